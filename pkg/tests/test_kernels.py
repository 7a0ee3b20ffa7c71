"""Both kernel backends against the dephase-matrix oracle and each other."""

import numpy as np
import pytest

from conftest import random_density
from sepcorr import kernels
from sepcorr.correlations import (
    MeasurementAxis,
    _grid_axes,
    bloch_decomposition,
    dephase,
)
from sepcorr.kernels import reference
from sepcorr.matcore import DensityMatrix, vn_entropy

try:
    from sepcorr.kernels import _fastgrid
except ImportError:
    _fastgrid = None

BACKENDS = [reference] + ([_fastgrid] if _fastgrid is not None else [])


def _oracle_entropy(rho, theta_a, phi_a, theta_b, phi_b):
    """Independent route: dephase the matrix and take the spectral entropy."""
    chi = dephase(rho, MeasurementAxis(theta_a, phi_a), MeasurementAxis(theta_b, phi_b))
    return vn_entropy(chi.rho)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
class TestAgainstMatrixOracle:
    def test_point_entropy_matches_dephase_route(self, backend, rng):
        for _ in range(200):
            rho = random_density(rng, 4)
            a, b, t = bloch_decomposition(rho)
            th_a, ph_a = rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi)
            th_b, ph_b = rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi)
            na = MeasurementAxis(th_a, ph_a).unit_vector
            nb = MeasurementAxis(th_b, ph_b).unit_vector
            fast = backend.point_entropy(a, b, t, na, nb)
            slow = _oracle_entropy(rho, th_a, ph_a, th_b, ph_b)
            assert abs(fast - slow) < 1e-12

    def test_grid_scan_matches_exhaustive_point_scan(self, backend, rng):
        axes, _, _ = _grid_axes(8)
        axes_a, axes_b = axes[:24], axes[40:71]
        for _ in range(5):
            rho = random_density(rng, 4)
            a, b, t = bloch_decomposition(rho)
            vals, idxs = backend.grid_scan(a, b, t, axes_a, axes_b, 5)
            brute = sorted(
                (backend.point_entropy(a, b, t, na, nb), i * len(axes_b) + j)
                for i, na in enumerate(axes_a)
                for j, nb in enumerate(axes_b)
            )[:5]
            assert np.abs(vals - np.array([v for v, _ in brute])).max() < 1e-12
            assert [int(x) for x in idxs] == [i for _, i in brute]

    def test_flat_objective_ties_resolve_in_scan_order(self, backend):
        # maximally mixed input: every axis pair gives entropy exactly 2
        axes, _, _ = _grid_axes(8)
        zeros = np.zeros(3)
        vals, idxs = backend.grid_scan(zeros, zeros, np.zeros((3, 3)), axes, axes, 5)
        assert np.all(vals == 2.0)
        assert idxs.tolist() == [0, 1, 2, 3, 4]

    def test_k_capped_by_grid_size(self, backend):
        axes = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        vals, idxs = backend.grid_scan(np.zeros(3), np.zeros(3), np.zeros((3, 3)), axes, axes, 16)
        assert len(vals) == 4


@pytest.mark.skipif(_fastgrid is None, reason="compiled kernel not built")
class TestBackendParity:
    def test_grid_scan_values_agree(self, rng):
        axes, _, _ = _grid_axes(16)
        for _ in range(10):
            rho = random_density(rng, 4)
            a, b, t = bloch_decomposition(rho)
            v1, i1 = _fastgrid.grid_scan(a, b, t, axes, axes, 5)
            v2, i2 = reference.grid_scan(a, b, t, axes, axes, 5)
            assert np.abs(v1 - v2).max() < 1e-12

    def test_point_entropy_agrees(self, rng):
        for _ in range(300):
            rho = random_density(rng, 4)
            a, b, t = bloch_decomposition(rho)
            na = MeasurementAxis(rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi)).unit_vector
            nb = MeasurementAxis(rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi)).unit_vector
            assert abs(
                _fastgrid.point_entropy(a, b, t, na, nb)
                - reference.point_entropy(a, b, t, na, nb)
            ) < 1e-12


def test_selected_backend_exposes_contract():
    assert kernels.BACKEND in ("cython", "python")
    assert callable(kernels.grid_scan)
    assert callable(kernels.point_entropy)


def test_rank_deficient_probabilities_hit_zero_guard():
    # |00><00|: the computational-basis dephasing has three zero outcomes
    rho = DensityMatrix(np.diag([1.0, 0.0, 0.0, 0.0]), (2, 2))
    a, b, t = bloch_decomposition(rho)
    pole = np.array([0.0, 0.0, 1.0])
    for backend in BACKENDS:
        assert backend.point_entropy(a, b, t, pole, pole) == 0.0
