"""Pure-Python (numpy-vectorised) versions of the compiled GF(p) kernels.

Same signatures and results as ``_ckernels``; selected automatically when
the extension is unavailable or ``DESCENTKIT_PURE=1`` is set.
"""

from __future__ import annotations

import numpy as np


def rref_modp(a, p: int):
    work = np.array(a, dtype=np.int64) % p
    rows, cols = work.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(work[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            work[[r, k]] = work[[k, r]]
        inv = pow(int(work[r, c]), -1, p)
        if inv != 1:
            work[r] = work[r] * inv % p
        col = work[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            work[hit] = (work[hit] - np.outer(col[hit], work[r])) % p
        pivots.append(c)
        r += 1
    return work, pivots


def rank_modp(a, p: int) -> int:
    return len(rref_modp(a, p)[1])


def _inverses(values: np.ndarray, p: int) -> np.ndarray:
    if p < 1 << 16:
        table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
        return table[values]
    return np.array([pow(int(x), -1, p) if x else 0 for x in values], dtype=np.int64)


def _batched_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack ``(k, n, m)`` of matrices mod p, eliminating all at once."""
    work = mats.copy()
    k, n, m = work.shape
    r = np.zeros(k, dtype=np.int64)
    rows = np.arange(n)
    every = np.arange(k)
    for c in range(m):
        cand = (work[:, :, c] != 0) & (rows[None, :] >= r[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        rc = np.minimum(r, n - 1)
        piv = np.where(has, cand.argmax(axis=1), rc)  # a no-op swap where nothing is found
        top = work[every, rc].copy()
        work[every, rc] = work[every, piv]
        work[every, piv] = top
        prow = work[every, rc] * _inverses(work[every, rc, c], p)[:, None] % p
        fac = np.where((rows[None, :] > rc[:, None]) & has[:, None], work[:, :, c], 0)
        work = (work - fac[:, :, None] * prow[:, None, :]) % p
        r += has
    return r


def first_rank_combination(basis, p: int, target: int, start: int, count: int, chunk: int = 4096) -> int:
    """Scan coefficient tuples in index order (base-p digits, digit 0 multiplies
    ``basis[0]``) and return the first index whose combination has rank ``target``."""
    b = np.asarray(basis, dtype=np.int64) % p
    h = b.shape[0]
    total = p ** h
    if start < 0 or start >= total:
        return -1
    stop = min(start + count, total)
    powers = [p ** d for d in range(h)]
    for lo in range(start, stop, chunk):
        idx = np.arange(lo, min(lo + chunk, stop), dtype=np.int64)
        acc = np.zeros((idx.size,) + b.shape[1:], dtype=np.int64)
        for d in range(h):
            digit = (idx // powers[d]) % p
            acc = (acc + digit[:, None, None] * b[d][None] % p) % p
        hits = np.flatnonzero(_batched_rank(acc, p) == target)
        if hits.size:
            return int(idx[hits[0]])
    return -1
