"""Pure-numpy fallback for the dephased-entropy kernels.

Row tiles keep peak memory bounded for large scans; candidate selection per
tile reproduces the sequential lexicographic (value, index) order exactly,
including runs of ties.
"""

from __future__ import annotations

import math

import numpy as np

_SIGNS = ((1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0))
_FLOOR = 1e-300
#: elements per tile temporary (~32 MB of float64)
_TILE_ELEMS = 1 << 22


def point_entropy(avec, bvec, tmat, axis_a, axis_b) -> float:
    """Entropy (bits) of the state dephased along one axis pair."""
    na = np.asarray(axis_a, dtype=np.float64)
    nb = np.asarray(axis_b, dtype=np.float64)
    al = float(na @ np.asarray(avec, dtype=np.float64))
    be = float(nb @ np.asarray(bvec, dtype=np.float64))
    ga = float(na @ np.asarray(tmat, dtype=np.float64) @ nb)
    acc = 0.0
    for s1, s2, s3 in _SIGNS:
        q = 1.0 + s1 * al + s2 * be + s3 * ga
        if q > _FLOOR:
            acc += q * math.log2(q)
    return 2.0 - 0.25 * acc


def _first_true_indices(mask: np.ndarray, count: int) -> np.ndarray:
    """First `count` indices where mask holds, scanning in chunks."""
    out = []
    have = 0
    step = 1 << 20
    for start in range(0, mask.size, step):
        hits = np.flatnonzero(mask[start : start + step])
        if hits.size:
            take = hits[: count - have] + start
            out.append(take)
            have += take.size
            if have >= count:
                break
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def grid_scan(avec, bvec, tmat, axes_a, axes_b, k: int):
    """k smallest (entropy, flat index) pairs over the axis-pair product grid."""
    axes_a = np.ascontiguousarray(axes_a, dtype=np.float64)
    axes_b = np.ascontiguousarray(axes_b, dtype=np.float64)
    na, nb = axes_a.shape[0], axes_b.shape[0]
    k = min(int(k), na * nb)
    if k < 1:
        raise ValueError("k must be >= 1")

    alpha = axes_a @ np.asarray(avec, dtype=np.float64)
    beta = axes_b @ np.asarray(bvec, dtype=np.float64)
    mrows = axes_a @ np.asarray(tmat, dtype=np.float64)  # row i = na_i^T T

    tile = max(1, _TILE_ELEMS // nb)
    cand_vals: list[float] = []
    cand_idxs: list[int] = []
    for i0 in range(0, na, tile):
        i1 = min(i0 + tile, na)
        gamma = mrows[i0:i1] @ axes_b.T
        al = alpha[i0:i1][:, None]
        acc = np.zeros_like(gamma)
        for s1, s2, s3 in _SIGNS:
            q = 1.0 + s1 * al + s2 * beta[None, :] + s3 * gamma
            np.clip(q, _FLOOR, None, out=q)
            acc += q * np.log2(q)
        flat = (2.0 - 0.25 * acc).ravel()
        base = i0 * nb

        kk = min(k, flat.size)
        if kk == flat.size:
            picks = np.argsort(flat, kind="stable")[:kk]
        else:
            vk = np.partition(flat, kk - 1)[kk - 1]
            lt = np.flatnonzero(flat < vk)  # at most kk - 1 entries
            eq = _first_true_indices(flat == vk, kk - lt.size)
            picks = np.concatenate([lt, eq])
        cand_vals.extend(flat[picks].tolist())
        cand_idxs.extend((picks + base).tolist())

    order = sorted(range(len(cand_vals)), key=lambda i: (cand_vals[i], cand_idxs[i]))[:k]
    return (
        np.array([cand_vals[i] for i in order], dtype=np.float64),
        np.array([cand_idxs[i] for i in order], dtype=np.int64),
    )
