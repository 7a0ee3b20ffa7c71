"""State construction, seeded sampling, separability certification, state files.

The sampler is fully self-contained on top of the PCG64 bit stream: weights
come from inverse-CDF exponentials of uniform draws and kets from explicit
Box-Muller normals, so a (seed, k) pair maps to one bit-exact mixture.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import (
    InvalidSpecError,
    InvariantViolationError,
    ParseError,
    UnsupportedDimsError,
)
from .matcore import DensityMatrix, kron, partial_transpose

NORM_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-10
PPT_TOL = 1e-10
#: recorded in sweep CSV headers so results can be reproduced
PRNG_NAME = "PCG64+inverse-exponential-weights+box-muller-kets"

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized pure-state amplitude vector."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if a.ndim != 1 or a.size < 1:
            raise InvalidSpecError(f"ket must be a nonempty vector, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidSpecError("ket amplitudes must be finite")
        norm_sq = float((a.conj() * a).real.sum())
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InvalidSpecError(f"ket norm^2 = {norm_sq!r} is not 1 within {NORM_TOL}")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def dim(self) -> int:
        return self.amps.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amps, self.amps.conj())


def ket0() -> Ket:
    return Ket(np.array([1.0, 0.0]))


def ket1() -> Ket:
    return Ket(np.array([0.0, 1.0]))


def ket_h() -> Ket:
    """The balanced superposition (|0> + |1>)/sqrt(2)."""
    r = math.sqrt(0.5)
    return Ket(np.array([r, r]))


@dataclass(frozen=True)
class MixtureTerm:
    p: float
    a: Ket
    b: Ket


@dataclass(frozen=True, eq=False)
class ProductMixtureSpec:
    """Convex mixture of product pure states; separable by construction."""

    terms: tuple[MixtureTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise InvalidSpecError("mixture needs at least one term")
        total = 0.0
        da, db = terms[0].a.dim, terms[0].b.dim
        for idx, t in enumerate(terms):
            if not (t.p >= 0.0 and math.isfinite(t.p)):
                raise InvalidSpecError(f"terms[{idx}].p = {t.p!r} must be a finite weight >= 0")
            if t.a.dim != da or t.b.dim != db:
                raise InvalidSpecError(
                    f"terms[{idx}] has party dims ({t.a.dim}, {t.b.dim}), expected ({da}, {db})"
                )
            total += t.p
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidSpecError(f"weights sum to {total!r}, not 1 within {WEIGHT_SUM_TOL}")
        object.__setattr__(self, "terms", terms)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.terms[0].a.dim, self.terms[0].b.dim)


def from_product_mixture(spec: ProductMixtureSpec) -> DensityMatrix:
    """Assemble sum_k p_k |a_k><a_k| (x) |b_k><b_k|."""
    da, db = spec.dims
    acc = np.zeros((da * db, da * db), dtype=np.complex128)
    for t in spec.terms:
        acc += t.p * kron(t.a.projector(), t.b.projector())
    return DensityMatrix(acc, (da, db))


def counterexample_spec() -> ProductMixtureSpec:
    """Two-term mixture: half |00>, half |1>|H>."""
    return ProductMixtureSpec(
        (
            MixtureTerm(0.5, ket0(), ket0()),
            MixtureTerm(0.5, ket1(), ket_h()),
        )
    )


def counterexample_state() -> DensityMatrix:
    return from_product_mixture(counterexample_spec())


def _box_muller(u: np.ndarray) -> tuple[float, float, float, float]:
    """Four uniforms in [0,1) -> four standard normals (two Box-Muller pairs)."""
    r0 = math.sqrt(-2.0 * math.log1p(-u[0]))
    r1 = math.sqrt(-2.0 * math.log1p(-u[2]))
    return (
        r0 * math.cos(_TWO_PI * u[1]),
        r0 * math.sin(_TWO_PI * u[1]),
        r1 * math.cos(_TWO_PI * u[3]),
        r1 * math.sin(_TWO_PI * u[3]),
    )


def _haar_qubit(u: np.ndarray) -> Ket:
    x0, y0, x1, y1 = _box_muller(u)
    amps = np.array([x0 + 1j * y0, x1 + 1j * y1])
    norm = math.sqrt(float((amps.conj() * amps).real.sum()))
    if norm < 1e-12:  # unreachable in practice; keeps the map total
        return ket0()
    return Ket(amps / norm)


def random_separable(seed: int, k: int) -> tuple[DensityMatrix, ProductMixtureSpec]:
    """Seeded separable two-qubit sampler.

    Draw order from a single PCG64 stream: k uniforms for the weight simplex
    (w_i = e_i / sum e, e_i = -log(1 - u_i)), then per term four uniforms for
    the A ket and four for the B ket (Haar via normalized complex normals).
    The same (seed, k) always reproduces the same mixture bit for bit.
    """
    if k < 1:
        raise InvalidSpecError(f"term count k must be >= 1, got {k}")
    gen = np.random.Generator(np.random.PCG64(int(seed) & ((1 << 64) - 1)))
    expo = -np.log1p(-gen.random(k))
    weights = expo / expo.sum()
    terms = tuple(
        MixtureTerm(float(w), _haar_qubit(gen.random(4)), _haar_qubit(gen.random(4)))
        for w in weights
    )
    spec = ProductMixtureSpec(terms)
    return from_product_mixture(spec), spec


def bell_diagonal(probs) -> DensityMatrix:
    """Mixture of the four Bell states with the given probability 4-vector."""
    p = np.asarray(probs, dtype=np.float64)
    if p.shape != (4,):
        raise InvalidSpecError(f"need exactly 4 probabilities, got shape {p.shape}")
    if p.min() < 0.0 or abs(float(p.sum()) - 1.0) > WEIGHT_SUM_TOL:
        raise InvalidSpecError(f"probabilities {p.tolist()} must be >= 0 and sum to 1")
    s = math.sqrt(0.5)
    bells = np.array(
        [
            [s, 0.0, 0.0, s],   # (|00> + |11>)/sqrt(2)
            [s, 0.0, 0.0, -s],  # (|00> - |11>)/sqrt(2)
            [0.0, s, s, 0.0],   # (|01> + |10>)/sqrt(2)
            [0.0, s, -s, 0.0],  # (|01> - |10>)/sqrt(2)
        ],
        dtype=np.complex128,
    )
    acc = np.zeros((4, 4), dtype=np.complex128)
    for pi, ket in zip(p, bells):
        acc += pi * np.outer(ket, ket.conj())
    return DensityMatrix(acc, (2, 2))


class PptResult(NamedTuple):
    min_eigenvalue: float
    separable: bool


def ppt_check(rho: DensityMatrix) -> PptResult:
    """Peres-Horodecki test; necessary and sufficient at 2x2."""
    if rho.dims != (2, 2):
        raise UnsupportedDimsError(f"PPT check needs dims (2, 2), got {rho.dims}")
    w = np.linalg.eigvalsh(partial_transpose(rho, "B"))
    mn = float(w[0])
    return PptResult(mn, mn >= -PPT_TOL)


# ---------------------------------------------------------------------------
# State files: UTF-8 JSON with exactly one of "product_mixture" / "dense".


def _require(cond: bool, where: str, msg: str):
    if not cond:
        raise ParseError(f"{where}: {msg}")


def _parse_real(value, where: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), where, "expected a number")
    return float(value)


def _parse_ket(value, where: str) -> Ket:
    _require(isinstance(value, list) and len(value) >= 1, where, "expected a list of [re, im] pairs")
    amps = []
    for i, pair in enumerate(value):
        loc = f"{where}[{i}]"
        _require(isinstance(pair, list) and len(pair) == 2, loc, "expected an [re, im] pair")
        amps.append(complex(_parse_real(pair[0], loc), _parse_real(pair[1], loc)))
    try:
        return Ket(np.array(amps))
    except InvalidSpecError as exc:
        raise InvariantViolationError(f"{where}: {exc}") from exc


def _parse_product_mixture(doc, where: str) -> DensityMatrix:
    _require(isinstance(doc, dict), where, "expected an object")
    _require(set(doc) == {"terms"}, where, 'expected exactly the key "terms"')
    raw_terms = doc["terms"]
    _require(isinstance(raw_terms, list) and raw_terms, f"{where}.terms", "expected a nonempty list")
    terms = []
    for i, rt in enumerate(raw_terms):
        loc = f"{where}.terms[{i}]"
        _require(isinstance(rt, dict), loc, "expected an object")
        _require(set(rt) == {"p", "a", "b"}, loc, 'expected exactly the keys "p", "a", "b"')
        p = _parse_real(rt["p"], f"{loc}.p")
        a = _parse_ket(rt["a"], f"{loc}.a")
        b = _parse_ket(rt["b"], f"{loc}.b")
        terms.append(MixtureTerm(p, a, b))
    try:
        return from_product_mixture(ProductMixtureSpec(tuple(terms)))
    except InvalidSpecError as exc:
        raise InvariantViolationError(f"{where}: {exc}") from exc


def _parse_dense(doc, where: str) -> DensityMatrix:
    _require(isinstance(doc, dict), where, "expected an object")
    _require(set(doc) == {"dims", "re", "im"}, where, 'expected exactly the keys "dims", "re", "im"')
    dims = doc["dims"]
    _require(
        isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d >= 1 for d in dims),
        f"{where}.dims",
        "expected [dA, dB] positive integers",
    )
    da, db = dims
    n = da * db
    parts = {}
    for key in ("re", "im"):
        arr = doc[key]
        _require(isinstance(arr, list), f"{where}.{key}", "expected a list of reals")
        _require(len(arr) == n * n, f"{where}.{key}", f"expected {n * n} entries, got {len(arr)}")
        parts[key] = np.array(
            [_parse_real(x, f"{where}.{key}[{i}]") for i, x in enumerate(arr)]
        ).reshape(n, n)
    return DensityMatrix(parts["re"] + 1j * parts["im"], (da, db))


def parse_state(text: str) -> DensityMatrix:
    """Parse a StateSpec JSON document into a validated density matrix."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    _require(isinstance(doc, dict), "$", "top level must be an object")
    keys = set(doc)
    _require(
        keys in ({"product_mixture"}, {"dense"}),
        "$",
        'expected exactly one of the keys "product_mixture" or "dense"',
    )
    if "product_mixture" in keys:
        return _parse_product_mixture(doc["product_mixture"], "product_mixture")
    return _parse_dense(doc["dense"], "dense")


def load_state(path) -> DensityMatrix:
    """Read and parse a state file."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc}") from exc
    return parse_state(text)


def _ket_to_json(k: Ket) -> list:
    return [[z.real, z.imag] for z in k.amps]


def serialize_state(obj) -> str:
    """Serialize a ProductMixtureSpec or DensityMatrix to StateSpec JSON."""
    if isinstance(obj, ProductMixtureSpec):
        doc = {
            "product_mixture": {
                "terms": [
                    {"p": t.p, "a": _ket_to_json(t.a), "b": _ket_to_json(t.b)} for t in obj.terms
                ]
            }
        }
    elif isinstance(obj, DensityMatrix):
        doc = {
            "dense": {
                "dims": list(obj.dims),
                "re": obj.mat.real.ravel().tolist(),
                "im": obj.mat.imag.ravel().tolist(),
            }
        }
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return json.dumps(doc, indent=2) + "\n"
