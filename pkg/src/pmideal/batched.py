"""Vectorised mod-q kernels over stacks of small matrices.

Everything here takes int arrays of shape ``(N, k, k)`` or ``(N, r, c)`` with
entries already in ``[0, q)`` and returns int64 arrays.  The per-matrix
routines in :mod:`pmideal.exact_matrix` serve as the oracle for these.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def inverse_table(q: int) -> np.ndarray:
    """``inv[a]`` is the inverse of ``a`` mod q; ``inv[0] = 0``."""
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, -1, q)
    return inv


def det(mats: np.ndarray, q: int) -> np.ndarray:
    a = np.asarray(mats, dtype=np.int64)
    k = a.shape[-1]
    if k == 0:
        return np.ones(a.shape[0], dtype=np.int64)
    if k == 1:
        return a[:, 0, 0] % q
    if k == 2:
        return (a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]) % q
    if k == 3:
        m00, m01, m02 = a[:, 0, 0], a[:, 0, 1], a[:, 0, 2]
        m10, m11, m12 = a[:, 1, 0], a[:, 1, 1], a[:, 1, 2]
        m20, m21, m22 = a[:, 2, 0], a[:, 2, 1], a[:, 2, 2]
        c0 = (m11 * m22 - m12 * m21) % q
        c1 = (m10 * m22 - m12 * m20) % q
        c2 = (m10 * m21 - m11 * m20) % q
        return (m00 * c0 - m01 * c1 + m02 * c2) % q
    return _det_elim(a.copy() % q, q)


def _det_elim(a: np.ndarray, q: int) -> np.ndarray:
    n, k, _ = a.shape
    inv = inverse_table(q)
    out = np.ones(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    ar = np.arange(n)
    for c in range(k):
        cand = a[:, c:, c] != 0
        has = cand.any(axis=1)
        alive &= has
        piv = np.argmax(cand, axis=1) + c
        swap = has & (piv != c)
        if swap.any():
            idx = ar[swap]
            rc = a[idx, c, :].copy()
            a[idx, c, :] = a[idx, piv[swap], :]
            a[idx, piv[swap], :] = rc
            out[swap] = (-out[swap]) % q
        pv = a[:, c, c]
        out = out * pv % q
        if c + 1 < k:
            f = a[:, c + 1:, c] * inv[pv][:, None] % q
            a[:, c + 1:, :] = (a[:, c + 1:, :] - f[:, :, None] * a[:, c, None, :]) % q
    out[~alive] = 0
    return out


def rank(mats: np.ndarray, q: int) -> np.ndarray:
    a = np.asarray(mats, dtype=np.int64) % q
    a = a.copy()
    n, rows, cols = a.shape
    inv = inverse_table(q)
    rk = np.zeros(n, dtype=np.int64)
    row_ids = np.arange(rows)
    for c in range(cols):
        cand = (a[:, :, c] != 0) & (row_ids[None, :] >= rk[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = np.argmax(cand[idx], axis=1)
        tgt = rk[idx]
        prow = a[idx, piv, :].copy()
        a[idx, piv, :] = a[idx, tgt, :]
        a[idx, tgt, :] = prow * inv[prow[:, c]][:, None] % q
        sub = a[idx]
        f = sub[:, :, c].copy()
        f[np.arange(len(idx)), tgt] = 0
        a[idx] = (sub - f[:, :, None] * a[idx, tgt, None, :]) % q
        rk[idx] += 1
    return rk


def maximal_minors_of_rows(mats: np.ndarray, q: int) -> np.ndarray:
    """All r x r minors ``det(M[:, S])`` of a stack of r x n matrices, S in lex order."""
    a = np.asarray(mats, dtype=np.int64)
    _, r, n = a.shape
    cols = [det(a[:, :, list(s)], q) for s in combinations(range(n), r)]
    return np.stack(cols, axis=1)


def principal_minors(mats: np.ndarray, t: int, q: int) -> np.ndarray:
    """Principal t-minors of a stack of n x n matrices, one column per lex t-subset."""
    a = np.asarray(mats, dtype=np.int64)
    n = a.shape[-1]
    cols = [det(a[:, s][:, :, s], q) for s in map(list, combinations(range(n), t))]
    return np.stack(cols, axis=1)


def digits(indices: np.ndarray, base: int, width: int) -> np.ndarray:
    """Base-``base`` digits of each index, most significant first, shape (N, width)."""
    idx = np.asarray(indices, dtype=np.int64)
    powers = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % base


def product_grid(base: int, width: int) -> np.ndarray:
    """All of ``range(base) ** width`` as rows, lexicographic (first column slowest)."""
    if width == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return digits(np.arange(base**width, dtype=np.int64), base, width)
