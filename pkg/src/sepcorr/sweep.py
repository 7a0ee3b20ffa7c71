"""Monte-Carlo sweep over random separable states with reproducible CSV output.

Per-record seeds come from a SplitMix64 stream over the master seed: record i
uses output 2i to draw its term count k (uniform over [k_min, k_max]) and
output 2i+1 as the state seed, so any row can be regenerated in isolation
with random_separable(seed, k). Records are emitted in index order and the
CSV body is a pure function of the configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .correlations import analyze
from .errors import InvalidSpecError, SepcorrError
from .states import (
    PRNG_NAME,
    bell_diagonal,
    counterexample_state,
    ppt_check,
    random_separable,
)

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
#: records with l above this count as strictly superadditive
STRICT_L = 1e-6

CSV_HEADER = "index,seed,k,t,q,c,l,identity_residual,ppt_min_eig,theta_a,phi_a,theta_b,phi_b"


def splitmix64(master_seed: int, j: int) -> int:
    """The j-th output (0-based) of the SplitMix64 sequence seeded at master_seed."""
    z = (int(master_seed) + (j + 1) * _GOLDEN) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def per_record_seeds(master_seed: int, index: int) -> tuple[int, int]:
    """(k-draw seed, state seed) for one record."""
    return splitmix64(master_seed, 2 * index), splitmix64(master_seed, 2 * index + 1)


@dataclass(frozen=True)
class SweepConfig:
    n: int
    master_seed: int
    k_min: int = 1
    k_max: int = 4
    grid_n: int = 16
    refine: bool = True
    include_bell_diagonal: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpecError(f"state count n must be >= 1, got {self.n}")
        if not (1 <= self.k_min <= self.k_max <= 8):
            raise InvalidSpecError(
                f"need 1 <= k_min <= k_max <= 8, got k_min={self.k_min} k_max={self.k_max}"
            )
        if self.grid_n < 8:
            raise InvalidSpecError(f"grid_n must be >= 8, got {self.grid_n}")
        object.__setattr__(self, "master_seed", int(self.master_seed) & _M64)


@dataclass(frozen=True)
class SweepRecord:
    index: int
    seed: int
    k: int
    t: float
    q: float
    c: float
    l: float
    identity_residual: float
    ppt_min_eig: float
    theta_a: float
    phi_a: float
    theta_b: float
    phi_b: float


@dataclass(frozen=True)
class SweepSummary:
    n_records: int
    violations: int
    min_l: float
    max_l: float
    mean_l: float
    max_residual: float
    strict_superadditive: int


def _bell_diagonal_sample(seed: int):
    """Separable Bell-diagonal draw: simplex 4-vector shrunk toward uniform
    until its largest weight is 1/2 (the PPT boundary)."""
    gen = np.random.Generator(np.random.PCG64(seed))
    expo = -np.log1p(-gen.random(4))
    lam = expo / expo.sum()
    top = float(lam.max())
    if top > 0.5:
        lam = 0.25 + (lam - 0.25) * (0.25 / (top - 0.25))
    return bell_diagonal(lam)


def _record_for(index: int, seed: int, k: int, rho, cfg: SweepConfig) -> SweepRecord:
    ppt = ppt_check(rho)
    if not ppt.separable:
        raise InvalidSpecError(
            f"sampled state at index {index} (seed {seed}) is not PPT: {ppt.min_eigenvalue:.3e}"
        )
    report = analyze(rho, cfg.grid_n, cfg.refine)
    axis_a, axis_b = report.axes
    return SweepRecord(
        index=index,
        seed=seed,
        k=k,
        t=report.t,
        q=report.q,
        c=report.c,
        l=report.l,
        identity_residual=report.identity_residual,
        ppt_min_eig=ppt.min_eigenvalue,
        theta_a=axis_a.theta,
        phi_a=axis_a.phi,
        theta_b=axis_b.theta,
        phi_b=axis_b.phi,
    )


def run_sweep(
    cfg: SweepConfig, append_counterexample: bool = False
) -> tuple[list[SweepRecord], SweepSummary]:
    """Sample, analyze and summarize; raises with the offending seed on failure."""
    records = []
    for i in range(cfg.n):
        seed_k, seed_state = per_record_seeds(cfg.master_seed, i)
        try:
            if cfg.include_bell_diagonal and i % 4 == 3:
                k = 0  # marks a Bell-diagonal row; not a product-mixture draw
                rho = _bell_diagonal_sample(seed_state)
            else:
                k = cfg.k_min + seed_k % (cfg.k_max - cfg.k_min + 1)
                rho, _ = random_separable(seed_state, k)
            records.append(_record_for(i, seed_state, k, rho, cfg))
        except SepcorrError as exc:
            raise type(exc)(f"record {i} (seed {seed_state}): {exc}") from exc

    if append_counterexample:
        records.append(_record_for(cfg.n, 0, 2, counterexample_state(), cfg))

    ls = [r.l for r in records]
    summary = SweepSummary(
        n_records=len(records),
        violations=sum(1 for r in records if r.t > r.q + r.c + 1e-9),
        min_l=min(ls),
        max_l=max(ls),
        mean_l=math.fsum(ls) / len(ls),
        max_residual=max(r.identity_residual for r in records),
        strict_superadditive=sum(1 for v in ls if v > STRICT_L),
    )
    return records, summary


def _fmt(x: float) -> str:
    return format(x, ".12g")


def write_csv(records, cfg: SweepConfig, fh, append_counterexample: bool = False) -> None:
    """Write comment header, column header and rows; 12 significant digits, LF."""
    fh.write(f"# sepcorr {__version__}\n")
    fh.write(f"# prng={PRNG_NAME} seed_mix=SplitMix64\n")
    fh.write(
        "# config"
        f" n={cfg.n}"
        f" master_seed={cfg.master_seed}"
        f" k_min={cfg.k_min}"
        f" k_max={cfg.k_max}"
        f" grid_n={cfg.grid_n}"
        f" refine={str(cfg.refine).lower()}"
        f" include_bell_diagonal={str(cfg.include_bell_diagonal).lower()}"
        f" append_counterexample={str(append_counterexample).lower()}\n"
    )
    fh.write(CSV_HEADER + "\n")
    for r in records:
        fh.write(
            ",".join(
                [
                    str(r.index),
                    str(r.seed),
                    str(r.k),
                    _fmt(r.t),
                    _fmt(r.q),
                    _fmt(r.c),
                    _fmt(r.l),
                    _fmt(r.identity_residual),
                    _fmt(r.ppt_min_eig),
                    _fmt(r.theta_a),
                    _fmt(r.phi_a),
                    _fmt(r.theta_b),
                    _fmt(r.phi_b),
                ]
            )
            + "\n"
        )


def summary_line(summary: SweepSummary) -> str:
    """The stable one-line summary printed by the CLI."""
    return (
        f"violations={summary.violations}"
        f" min_l={_fmt(summary.min_l)}"
        f" max_residual={_fmt(summary.max_residual)}"
    )
