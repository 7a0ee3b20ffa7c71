import math

import numpy as np
import pytest

from sepcorr.matcore import DensityMatrix

SQRT2 = math.sqrt(2.0)
#: spectrum of the B marginal [[3/4, 1/4], [1/4, 1/4]] via the quadratic formula
RHO_B_EIGS = ((2.0 + SQRT2) / 4.0, (2.0 - SQRT2) / 4.0)
#: (2+s2)log2(2+s2) + (2-s2)log2(2-s2), the recurring closed-form block
S_BLOCK = (2.0 + SQRT2) * math.log2(2.0 + SQRT2) + (2.0 - SQRT2) * math.log2(2.0 - SQRT2)
T_EXACT = 2.0 - S_BLOCK / 4.0
C_EXACT = 0.75 * math.log2(4.0 / 3.0)
L_EXACT = S_BLOCK / 4.0 - 0.75 * math.log2(3.0)
Q_EXACT = 0.5


def counterexample_matrix() -> np.ndarray:
    """1/2 |00><00| + 1/2 |1H><1H| written out by hand."""
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = 0.5
    m[2:, 2:] = 0.25
    return m


def bell_phi_plus() -> DensityMatrix:
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[0, 3] = m[3, 0] = m[3, 3] = 0.5
    return DensityMatrix(m, (2, 2))


def random_density(rng, dim=4, dims=None) -> DensityMatrix:
    """Full-support random state from a complex Wishart draw."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(m, dims or ((2, 2) if dim == 4 else (dim, 1)))


def random_pure(rng, dim=2) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary_from_spectrum(rng, dim=4) -> np.ndarray:
    """Unitary built from the eigenvectors of a random Hermitian matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    _, v = np.linalg.eigh(g + g.conj().T)
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
