"""Correlation measures for two-qubit states and the closest-classical search.

For a separable state sigma the four quantities of interest are

    t = S(sigma || pi_sigma)          total correlation
    q = min over product bases of S(Pi(sigma)) - S(sigma)   dissonance
    c = S(chi || pi_chi)              classical correlation of chi = Pi(sigma)
    l = S(pi_sigma || pi_chi)         marginal-product gap

and they satisfy t = q + c - l exactly, for every dephasing basis, which
with l >= 0 makes the relation superadditive: t <= q + c.

The minimization over product bases runs a coarse grid scan (through the
kernels backend) followed by simplex descent from the best grid points.
For a fixed basis the relative-entropy-closest basis-diagonal state is the
dephased state itself, so the objective reduces to S(Pi(rho)) - S(rho).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvariantViolationError, NumericalError, UnsupportedDimsError
from .matcore import (
    DensityMatrix,
    kron,
    partial_trace,
    rel_entropy,
    trace_distance,
    vn_entropy,
)

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

IDENTITY_TOL = 1e-8
NONNEG_TOL = 1e-9
CLASSICAL_FIXPOINT_TOL = 1e-9
SIMPLEX_SPREAD_TOL = 1e-8
SIMPLEX_MAX_ITER = 500
N_RESTARTS = 5
POLISH_ROUNDS = 2
POLISH_SPREAD_TOL = 1e-12

_HALF_PI = 0.5 * math.pi
_TWO_PI = 2.0 * math.pi


def _canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    """Fold an axis onto the upper half sphere: theta in [0, pi/2], phi in [0, 2pi).

    Angles already in range pass through unchanged. A dephasing axis only
    matters up to sign, so the lower hemisphere maps to its antipode; equator
    axes resolve to the representative with positive x (then nonnegative y).
    """
    if 0.0 <= theta <= _HALF_PI and 0.0 <= phi < _TWO_PI:
        return float(theta), float(phi)
    st, ct = math.sin(theta), math.cos(theta)
    n = [st * math.cos(phi), st * math.sin(phi), ct]
    if n[2] < 0.0 or (n[2] == 0.0 and (n[0] < 0.0 or (n[0] == 0.0 and n[1] < 0.0))):
        n = [-n[0], -n[1], -n[2]]
    theta_c = math.atan2(math.hypot(n[0], n[1]), n[2])
    phi_c = math.atan2(n[1], n[0]) % _TWO_PI
    if theta_c > _HALF_PI:  # guard round-off at the equator
        theta_c = _HALF_PI
    return theta_c, phi_c


@dataclass(frozen=True)
class MeasurementAxis:
    """Bloch measurement axis n(theta, phi); canonicalized on construction."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise InvariantViolationError("axis angles must be finite")
        th, ph = _canonical_angles(float(self.theta), float(self.phi))
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "phi", ph)

    @property
    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Rank-1 projectors (I +/- n.sigma)/2 onto the axis eigenstates."""
        nop = sum(c * p for c, p in zip(self.unit_vector, _PAULIS))
        eye = np.eye(2, dtype=np.complex128)
        return (eye + nop) / 2.0, (eye - nop) / 2.0


def _dephase_matrix(mat: np.ndarray, axis_a: MeasurementAxis, axis_b: MeasurementAxis) -> np.ndarray:
    pa = axis_a.projectors()
    pb = axis_b.projectors()
    out = np.zeros_like(mat)
    for i in range(2):
        for j in range(2):
            proj = kron(pa[i], pb[j])
            out += proj @ mat @ proj
    return out


@dataclass(frozen=True, eq=False)
class ClassicalState:
    """A state diagonal in the product basis named by its two axes."""

    rho: DensityMatrix
    axis_a: MeasurementAxis
    axis_b: MeasurementAxis

    def __post_init__(self):
        again = _dephase_matrix(self.rho.mat, self.axis_a, self.axis_b)
        dist = trace_distance(again, self.rho.mat)
        if dist > CLASSICAL_FIXPOINT_TOL:
            raise InvariantViolationError(
                f"state moves under its own dephasing: trace distance {dist:.3e}"
            )


def dephase(rho: DensityMatrix, axis_a: MeasurementAxis, axis_b: MeasurementAxis) -> ClassicalState:
    """Project onto the product basis of the two axes (local pinching)."""
    if rho.dims != (2, 2):
        raise UnsupportedDimsError(f"dephase needs dims (2, 2), got {rho.dims}")
    out = _dephase_matrix(rho.mat, axis_a, axis_b)
    return ClassicalState(DensityMatrix(out, (2, 2)), axis_a, axis_b)


def marginal_product(rho: DensityMatrix) -> DensityMatrix:
    """Product of the two marginals, tr_B(rho) (x) tr_A(rho)."""
    ma = partial_trace(rho, "B")
    mb = partial_trace(rho, "A")
    return DensityMatrix(kron(ma.mat, mb.mat), rho.dims)


def bloch_decomposition(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors and correlation matrix (a, b, T) of a two-qubit state.

    a_k = tr[rho (sigma_k (x) I)], b_k = tr[rho (I (x) sigma_k)],
    T_kl = tr[rho (sigma_k (x) sigma_l)].
    """
    if rho.dims != (2, 2):
        raise UnsupportedDimsError(f"Bloch decomposition needs dims (2, 2), got {rho.dims}")
    r = rho.mat.reshape(2, 2, 2, 2)
    ra = np.trace(r, axis1=1, axis2=3)
    rb = np.trace(r, axis1=0, axis2=2)
    avec = np.array([float(np.trace(p @ ra).real) for p in _PAULIS])
    bvec = np.array([float(np.trace(p @ rb).real) for p in _PAULIS])
    tmat = np.array(
        [
            [float(np.trace(kron(pk, pl) @ rho.mat).real) for pl in _PAULIS]
            for pk in _PAULIS
        ]
    )
    return avec, bvec, tmat


def classical_objective(rho: DensityMatrix, axis_a: MeasurementAxis, axis_b: MeasurementAxis) -> float:
    """Entropy cost of dephasing at the given axes: S(Pi(rho)) - S(rho), in bits."""
    chi = dephase(rho, axis_a, axis_b)
    return _clamp_nonneg(vn_entropy(chi.rho) - vn_entropy(rho))


def _clamp_nonneg(value: float) -> float:
    if value < 0.0:
        if value < -NONNEG_TOL:
            raise NumericalError(f"nonnegative quantity evaluated to {value:.3e}")
        return 0.0
    return value


def _grid_axes(grid_n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Scan-ordered axis grid: theta major over [0, pi/2], phi over [0, 2pi)."""
    thetas = np.linspace(0.0, _HALF_PI, grid_n)
    phis = np.arange(2 * grid_n, dtype=np.float64) * (math.pi / grid_n)
    th = np.repeat(thetas, 2 * grid_n)
    ph = np.tile(phis, grid_n)
    st, ct = np.sin(th), np.cos(th)
    axes = np.column_stack([st * np.cos(ph), st * np.sin(ph), ct])
    return np.ascontiguousarray(axes), th, ph


def _axis_vector(theta: float, phi: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def _nelder_mead(fun, x0, steps, spread_tol=SIMPLEX_SPREAD_TOL, max_iter=SIMPLEX_MAX_ITER):
    """Minimize fun over R^n from x0; stops when the simplex value spread
    drops below spread_tol or after max_iter iterations."""
    n = len(x0)
    simplex = [np.array(x0, dtype=np.float64)]
    for i in range(n):
        x = np.array(x0, dtype=np.float64)
        x[i] += steps[i]
        simplex.append(x)
    values = [fun(x) for x in simplex]

    for _ in range(max_iter):
        order = sorted(range(n + 1), key=lambda i: values[i])
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if values[-1] - values[0] < spread_tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]

        reflected = centroid + (centroid - worst)
        fr = fun(reflected)
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
            continue
        if fr < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            fe = fun(expanded)
            if fe < fr:
                simplex[-1], values[-1] = expanded, fe
            else:
                simplex[-1], values[-1] = reflected, fr
            continue
        contracted = centroid + 0.5 * (worst - centroid)
        fc = fun(contracted)
        if fc < values[-1]:
            simplex[-1], values[-1] = contracted, fc
            continue
        best = simplex[0]
        simplex = [best] + [best + 0.5 * (x - best) for x in simplex[1:]]
        values = [values[0]] + [fun(x) for x in simplex[1:]]

    order = sorted(range(n + 1), key=lambda i: values[i])
    return simplex[order[0]], values[order[0]]


def closest_classical(
    rho: DensityMatrix, grid_n: int = 32, refine: bool = True
) -> tuple[ClassicalState, float]:
    """Minimize the dephasing objective over product bases.

    Coarse scan over a grid of grid_n theta values x 2*grid_n phi values per
    party; with refine, simplex descent restarts from the best N_RESTARTS
    grid points. Ties resolve to the smaller canonical (theta_a, phi_a,
    theta_b, phi_b), then to earlier grid scan order, so the result is
    deterministic and identical for every kernel schedule.
    """
    if rho.dims != (2, 2):
        raise UnsupportedDimsError(f"closest_classical needs dims (2, 2), got {rho.dims}")
    if grid_n < 8:
        raise ValueError(f"grid_n must be >= 8, got {grid_n}")

    avec, bvec, tmat = bloch_decomposition(rho)
    s_rho = vn_entropy(rho)
    axes, th, ph = _grid_axes(grid_n)
    n_axes = axes.shape[0]

    def objective(x):
        return kernels.point_entropy(
            avec, bvec, tmat, _axis_vector(x[0], x[1]), _axis_vector(x[2], x[3])
        )

    # The grid scan only proposes candidate axes; their objective values are
    # re-derived through the scalar point kernel so the reported optimum never
    # depends on the vectorized batch arithmetic.
    _, idxs = kernels.grid_scan(avec, bvec, tmat, axes, axes, N_RESTARTS)
    starts = []
    for flat in idxs.tolist():
        pa, pb = divmod(int(flat), n_axes)
        starts.append((th[pa], ph[pa], th[pb], ph[pb]))

    # candidates: (entropy H, theta_a, phi_a, theta_b, phi_b, tie rank)
    candidates = []
    for rank, x0 in enumerate(starts):
        canon = _canonical_angles(x0[0], x0[1]) + _canonical_angles(x0[2], x0[3])
        candidates.append((objective(x0),) + canon + (rank,))

    if refine:
        theta_step = 0.5 * _HALF_PI / (grid_n - 1)
        phi_step = 0.5 * math.pi / grid_n
        for rank, x0 in enumerate(starts):
            xr, hr = _nelder_mead(
                objective, x0, (theta_step, phi_step, theta_step, phi_step)
            )
            canon = _canonical_angles(xr[0], xr[1]) + _canonical_angles(xr[2], xr[3])
            candidates.append((float(hr),) + canon + (rank,))

    candidates.sort()
    h_best, ta, fa, tb, fb, _ = candidates[0]

    if refine:
        # small-step polish descents from the winner; each restart keeps the
        # same spread-based stopping rule but lands far closer to the optimum
        x = (ta, fa, tb, fb)
        for _ in range(POLISH_ROUNDS):
            xr, hr = _nelder_mead(
                objective, x, (1e-3, 1e-3, 1e-3, 1e-3), spread_tol=POLISH_SPREAD_TOL
            )
            if hr < h_best:
                x = tuple(xr)
                h_best = float(hr)
            else:
                break
        ta, fa = _canonical_angles(x[0], x[1])
        tb, fb = _canonical_angles(x[2], x[3])

    axis_a = MeasurementAxis(ta, fa)
    axis_b = MeasurementAxis(tb, fb)
    chi = dephase(rho, axis_a, axis_b)
    return chi, _clamp_nonneg(h_best - s_rho)


def mutual_information(rho: DensityMatrix) -> float:
    """Total correlation S(rho || pi_rho) in bits."""
    return rel_entropy(rho, marginal_product(rho))


def classical_correlation(chi: ClassicalState) -> float:
    """Correlation left in the classical state: S(chi || pi_chi) in bits."""
    return rel_entropy(chi.rho, marginal_product(chi.rho))


def l_quantity(rho: DensityMatrix, chi: ClassicalState) -> float:
    """Gap between the marginal products, S(pi_rho || pi_chi) in bits."""
    return _clamp_nonneg(rel_entropy(marginal_product(rho), marginal_product(chi.rho)))


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    """All measures for one analyzed state, plus the derived states."""

    t: float
    q: float
    c: float
    l: float
    identity_residual: float
    axes: tuple[MeasurementAxis, MeasurementAxis]
    superadditive: bool
    chi: ClassicalState
    pi_rho: DensityMatrix
    pi_chi: DensityMatrix

    def __post_init__(self):
        if self.identity_residual > IDENTITY_TOL:
            raise NumericalError(
                f"identity residual {self.identity_residual:.3e} exceeds {IDENTITY_TOL}"
            )
        if self.l < -NONNEG_TOL:
            raise NumericalError(f"l = {self.l:.3e} below -{NONNEG_TOL}")
        if self.superadditive != (self.t <= self.q + self.c + NONNEG_TOL):
            raise NumericalError("superadditive flag inconsistent with measures")


def analyze(rho: DensityMatrix, grid_n: int = 32, refine: bool = True) -> CorrelationReport:
    """Full chain for one state: optimize chi, evaluate t, q, c, l, check the identity.

    Callers are responsible for feeding separable input (the sigma = rho
    reduction only makes sense there); the CLI enforces this via the PPT gate.
    """
    chi, q = closest_classical(rho, grid_n, refine)
    pi_rho = marginal_product(rho)
    pi_chi = marginal_product(chi.rho)
    t = rel_entropy(rho, pi_rho)
    c = rel_entropy(chi.rho, pi_chi)
    l = rel_entropy(pi_rho, pi_chi)
    residual = abs(t - (q + c - l))
    return CorrelationReport(
        t=t,
        q=q,
        c=c,
        l=l,
        identity_residual=residual,
        axes=(chi.axis_a, chi.axis_b),
        superadditive=t <= q + c + NONNEG_TOL,
        chi=chi,
        pi_rho=pi_rho,
        pi_chi=pi_chi,
    )
