"""Dense complex-matrix substrate: density matrices, spectra, and entropies.

Everything downstream is built from the operations here: tensor products,
partial traces/transposes, Hermitian eigendecompositions and the two
entropies (von Neumann and relative). All entropies are in bits. Functions
are pure; matrices held by returned objects are marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvariantViolationError,
    NegativeEigenvalueError,
    NotHermitianError,
    NumericalError,
)

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
#: eigenvalues in [-EIG_CLAMP, 0) are treated as exact zeros
EIG_CLAMP = 1e-12
#: reference eigenvalues at or below this carry no support
SUPPORT_EIG_FLOOR = 1e-12
#: weight on an unsupported direction above this makes S(rho||tau) infinite
SUPPORT_WEIGHT_TOL = 1e-10
#: relative entropies may round off this far below zero; clamped back to 0
NEG_RESULT_TOL = 1e-9
#: dense algebra is capped at two parties with d_A * d_B <= 64
MAX_TOTAL_DIM = 64


def as_matrix(entries) -> np.ndarray:
    """Coerce input to a square, finite, C-contiguous complex128 matrix."""
    m = np.ascontiguousarray(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvariantViolationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvariantViolationError("matrix entries must be finite")
    return m


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation |M - M^dagger|."""
    return float(np.abs(m - m.conj().T).max())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated bipartite state: Hermitian, unit trace, positive semidefinite.

    ``dims`` tags the party dimensions (d_A, d_B); their product must equal
    the matrix dimension. Single-party marginals use dims (d, 1).
    """

    mat: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        m = as_matrix(self.mat)
        da, db = int(self.dims[0]), int(self.dims[1])
        if da < 1 or db < 1:
            raise InvariantViolationError(f"party dimensions must be positive, got {(da, db)}")
        if da * db != m.shape[0]:
            raise InvariantViolationError(
                f"dims {(da, db)} do not factor matrix dimension {m.shape[0]}"
            )
        if da * db > MAX_TOTAL_DIM:
            raise InvariantViolationError(f"total dimension {da * db} exceeds cap {MAX_TOTAL_DIM}")
        defect = hermiticity_defect(m)
        if defect > HERMITICITY_TOL:
            raise InvariantViolationError(f"not Hermitian: max |M - M^dagger| = {defect:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantViolationError(f"trace {tr} is not 1 within {TRACE_TOL}")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -PSD_TOL:
            raise InvariantViolationError(f"not positive semidefinite: min eigenvalue {min_eig:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "dims", (da, db))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


class Spectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with index convention (i*db + j, k*db + l) -> a[i,k]*b[j,l]."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def partial_trace(rho: DensityMatrix, party: str) -> DensityMatrix:
    """Trace out one party ("A" or "B"), returning the other party's marginal."""
    da, db = rho.dims
    r = rho.mat.reshape(da, db, da, db)
    if party == "A":
        red = np.trace(r, axis1=0, axis2=2)  # (db, db) marginal of B
    elif party == "B":
        red = np.trace(r, axis1=1, axis2=3)  # (da, da) marginal of A
    else:
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    return DensityMatrix(red, (red.shape[0], 1))


def partial_transpose(rho: DensityMatrix, party: str) -> np.ndarray:
    """Transpose one party's indices; output is Hermitian, unit trace, maybe non-PSD."""
    da, db = rho.dims
    r = rho.mat.reshape(da, db, da, db)
    if party == "B":
        out = r.transpose(0, 3, 2, 1)
    elif party == "A":
        out = r.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    return np.ascontiguousarray(out.reshape(da * db, da * db))


def eig_hermitian(m) -> Spectrum:
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending."""
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > HERMITICITY_TOL:
        raise NotHermitianError(f"max |M - M^dagger| = {defect:.3e} exceeds {HERMITICITY_TOL}")
    w, v = np.linalg.eigh(m)
    return Spectrum(
        np.ascontiguousarray(w[::-1]),
        np.ascontiguousarray(v[:, ::-1]),
    )


def _clamped_probs(w: np.ndarray) -> np.ndarray:
    """Clamp eigenvalues in [-EIG_CLAMP, 0) to 0; reject anything lower."""
    w = np.asarray(w, dtype=np.float64)
    low = float(w.min())
    if low < -EIG_CLAMP:
        raise NegativeEigenvalueError(f"eigenvalue {low:.3e} below -{EIG_CLAMP}")
    return np.where(w > 0.0, w, 0.0)


def vn_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy -sum(p log2 p) in bits, with 0 log 0 = 0."""
    w = _clamped_probs(np.linalg.eigvalsh(rho.mat))
    nz = w[w > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def rel_entropy(rho: DensityMatrix, tau: DensityMatrix) -> float:
    """Relative entropy S(rho || tau) in bits; +inf when rho's support leaves tau's.

    Computed spectrally: sum_i p_i log2 p_i - sum_ij p_i |<u_i|w_j>|^2 log2 q_j.
    Support violation is flagged when weight above SUPPORT_WEIGHT_TOL lands on
    a tau eigenvalue at or below SUPPORT_EIG_FLOOR. Small negative round-off
    (down to -NEG_RESULT_TOL) is clamped to 0.
    """
    if rho.mat.shape != tau.mat.shape:
        raise DimensionMismatchError(
            f"operands have dimensions {rho.mat.shape[0]} and {tau.mat.shape[0]}"
        )
    pw, pv = np.linalg.eigh(rho.mat)
    qw, qv = np.linalg.eigh(tau.mat)
    pw = _clamped_probs(pw)
    qw = np.where(qw > 0.0, qw, 0.0)

    overlap = np.abs(pv.conj().T @ qv) ** 2  # overlap[i, j] = |<u_i|w_j>|^2
    weights = pw[:, None] * overlap
    unsupported = qw <= SUPPORT_EIG_FLOOR
    if np.any(weights[:, unsupported] > SUPPORT_WEIGHT_TOL):
        return math.inf

    nz = pw[pw > 0.0]
    term_rho = float((nz * np.log2(nz)).sum())
    safe_logs = np.where(unsupported, 0.0, np.log2(np.where(unsupported, 1.0, qw)))
    term_cross = float((weights * safe_logs[None, :]).sum())
    value = term_rho - term_cross
    if value < 0.0:
        if value < -NEG_RESULT_TOL:
            raise NumericalError(f"relative entropy evaluated to {value:.3e}")
        value = 0.0
    return value


def trace_distance(a, b) -> float:
    """Half the trace norm of the difference; accepts matrices or DensityMatrix."""
    am = a.mat if isinstance(a, DensityMatrix) else np.asarray(a, dtype=np.complex128)
    bm = b.mat if isinstance(b, DensityMatrix) else np.asarray(b, dtype=np.complex128)
    w = np.linalg.eigvalsh(am - bm)
    return 0.5 * float(np.abs(w).sum())
