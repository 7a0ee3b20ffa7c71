"""Dephased-entropy kernels: compiled extension with a pure-python fallback.

The closest-classical-state search spends essentially all of its time
evaluating, over many pairs of Bloch measurement axes, the entropy of the
locally dephased state. In Bloch form the four outcome probabilities are
p_ij = (1 + (-1)^i na.a + (-1)^j nb.b + (-1)^(i+j) na.T nb) / 4, so the
evaluation needs only two 3-vectors, one 3x3 matrix and four x*log2(x)
calls per axis pair. Both backends expose:

    grid_scan(avec, bvec, tmat, axes_a, axes_b, k) -> (values, flat_indices)
    point_entropy(avec, bvec, tmat, axis_a, axis_b) -> float

grid_scan returns the k smallest (entropy, flat_index) pairs in ascending
lexicographic order with flat_index = ia * len(axes_b) + ib; ties resolve to
the earlier scan position, exactly as a sequential scan would.

Backend selection happens once at import: the compiled extension when it is
built, otherwise the numpy fallback. Override with SEPCORR_KERNEL=python or
SEPCORR_KERNEL=cython (the latter raises if the extension is missing).
"""

import os

from . import reference

_CHOICE = os.environ.get("SEPCORR_KERNEL", "auto").strip().lower()

if _CHOICE in ("python", "reference", "pure"):
    _impl = reference
    BACKEND = "python"
elif _CHOICE in ("auto", "", "cython", "compiled", "fast"):
    try:
        from . import _fastgrid as _impl

        BACKEND = "cython"
    except ImportError:
        if _CHOICE not in ("auto", ""):
            raise ImportError(
                "SEPCORR_KERNEL requested the compiled kernel but sepcorr.kernels._fastgrid "
                "is not built; run `python setup.py build_ext --inplace` or reinstall"
            ) from None
        _impl = reference
        BACKEND = "python"
else:
    raise ValueError(f"SEPCORR_KERNEL={_CHOICE!r} not understood (use 'auto', 'python' or 'cython')")

grid_scan = _impl.grid_scan
point_entropy = _impl.point_entropy
