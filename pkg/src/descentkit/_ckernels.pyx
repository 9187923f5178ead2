# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled GF(p) kernels.  Entries must already lie in ``[0, p)`` and
``p < 2**31`` so that a single product fits in a signed 64-bit word."""

import numpy as np

ctypedef long long i64


cdef inline i64 _inv_mod(i64 a, i64 p) nogil:
    cdef i64 t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _rref(i64[:, ::1] a, i64 p, Py_ssize_t[::1] piv) nogil:
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, k, i, j
    cdef i64 inv, f, tmp
    for c in range(cols):
        if r == rows:
            break
        k = r
        while k < rows and a[k, c] == 0:
            k += 1
        if k == rows:
            continue
        if k != r:
            for j in range(c, cols):
                tmp = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = tmp
        inv = _inv_mod(a[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = a[r, j] * inv % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = p - a[i, c]
                for j in range(c, cols):
                    if a[r, j] != 0:
                        a[i, j] = (a[i, j] + f * a[r, j]) % p
        piv[r] = c
        r += 1
    return r


cdef Py_ssize_t _rank(i64[:, ::1] a, i64 p) nogil:
    # forward elimination only; destroys a
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, k, i, j
    cdef i64 inv, f, tmp
    for c in range(cols):
        if r == rows:
            break
        k = r
        while k < rows and a[k, c] == 0:
            k += 1
        if k == rows:
            continue
        if k != r:
            for j in range(c, cols):
                tmp = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = tmp
        inv = _inv_mod(a[r, c], p)
        for i in range(r + 1, rows):
            if a[i, c] != 0:
                f = (p - a[i, c]) * inv % p
                for j in range(c, cols):
                    if a[r, j] != 0:
                        a[i, j] = (a[i, j] + f * a[r, j]) % p
        r += 1
    return r


def rref_modp(a, long long p):
    """Return ``(R, pivots)`` with ``R`` the reduced row-echelon form of ``a`` mod p."""
    cdef i64[:, ::1] work = np.ascontiguousarray(np.mod(np.asarray(a, dtype=np.int64), p))
    cdef Py_ssize_t[::1] piv = np.empty(min(work.shape[0], work.shape[1]) + 1, dtype=np.intp)
    cdef Py_ssize_t r
    with nogil:
        r = _rref(work, p, piv)
    return np.asarray(work), [int(piv[i]) for i in range(r)]


def rank_modp(a, long long p):
    cdef i64[:, ::1] work = np.ascontiguousarray(np.mod(np.asarray(a, dtype=np.int64), p))
    cdef Py_ssize_t r
    with nogil:
        r = _rank(work, p)
    return r


def first_rank_combination(basis, long long p, Py_ssize_t target, long long start, long long count):
    """Scan coefficient tuples ``start .. start+count-1`` (base-p digits, digit 0
    multiplies ``basis[0]``) and return the first index whose combination has
    rank ``target``, or ``-1``."""
    cdef i64[:, :, ::1] b = np.ascontiguousarray(np.mod(np.asarray(basis, dtype=np.int64), p))
    cdef Py_ssize_t h = b.shape[0], n = b.shape[1], m = b.shape[2]
    cdef i64[:, ::1] cur = np.zeros((n, m), dtype=np.int64)
    cdef i64[:, ::1] scratch = np.zeros((n, m), dtype=np.int64)
    cdef i64[::1] digits = np.zeros(max(h, 1), dtype=np.int64)
    cdef long long t = start, stop = start + count, rem
    cdef Py_ssize_t i, r, c, d
    cdef i64 v
    cdef long long found = -1
    # initial combination for index start
    rem = start
    for d in range(h):
        digits[d] = rem % p
        rem = rem // p
        v = digits[d]
        if v != 0:
            for r in range(n):
                for c in range(m):
                    cur[r, c] = (cur[r, c] + v * b[d, r, c]) % p
    if rem != 0 or start < 0:
        return -1
    with nogil:
        while t < stop:
            for r in range(n):
                for c in range(m):
                    scratch[r, c] = cur[r, c]
            if _rank(scratch, p) == target:
                found = t
                break
            t += 1
            # odometer increment with incremental update of cur
            d = 0
            while d < h:
                if digits[d] == p - 1:
                    digits[d] = 0
                    for r in range(n):
                        for c in range(m):
                            cur[r, c] = (cur[r, c] + b[d, r, c]) % p
                    d += 1
                else:
                    digits[d] += 1
                    for r in range(n):
                        for c in range(m):
                            cur[r, c] = (cur[r, c] + b[d, r, c]) % p
                    break
            if d == h:
                break
    return found
