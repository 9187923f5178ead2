import itertools

import numpy as np
import pytest

from descentkit.field import make_field
from descentkit.gallery import frobenius_family, truncated_polynomial
from descentkit.descent import build_context
from descentkit.linalg import Subspace
from descentkit.module import quotient_module, regular_module


@pytest.fixture(scope="session")
def gf2():
    return make_field(2)


@pytest.fixture(scope="session")
def gf3():
    return make_field(3)


@pytest.fixture(scope="session")
def flagship():
    A, B, f = frobenius_family(2, 1, 1)
    return build_context(A, B, f)


def cyclic_quotient(b, k):
    """B / (x^k) for a truncated polynomial algebra B on the monomial basis."""
    f = b.field
    rows = f.eye(b.dim)[k:]
    return quotient_module(regular_module(b), Subspace.span(f, b.dim, rows))[0]


# ---- brute-force helpers, independent of the elimination code ---------------


def all_vectors(p, n):
    for t in itertools.product(range(p), repeat=n):
        yield np.array(t, dtype=np.int64)


def brute_span(p, rows, n):
    """Set of all vectors (as tuples) in the span of ``rows`` over GF(p).

    Grown one generator at a time, so the cost tracks the size of the span
    rather than p ** len(rows).
    """
    out = {tuple([0] * n)}
    for r in rows:
        r = np.asarray(r, dtype=np.int64) % p
        if tuple(int(x) for x in r) in out:
            continue
        out = {tuple(int(x) for x in (np.array(v) + c * r) % p) for v in out for c in range(p)}
    return out


def brute_dim(p, rows, n):
    size = len(brute_span(p, rows, n))
    d = 0
    while p ** d < size:
        d += 1
    return d


def upper_triangular_algebra(f):
    """2x2 upper-triangular matrices on the basis E11, E12, E22 (no augmentation)."""
    from descentkit.algebra import Algebra

    mul = f.zeros(3, 3, 3)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 2, 1] = mul[2, 2, 2] = 1
    return Algebra(f, mul, f.array([1, 0, 1]), ("E11", "E12", "E22"))


def tensor_relation_rows(ctx, n):
    """Relations of N|_A (x)_k B, one per (basis of N, basis of A, basis of B).

    Written out triple by triple: the generator n_i . a_l (x) b_j - n_i (x) f(a_l) b_j,
    with ambient index i * dim B + j.
    """
    from descentkit.module import restrict

    p = ctx.field.p
    res = restrict(ctx.f, n)
    a, b = ctx.A, ctx.B
    rows = []
    for i in range(n.dim):
        for l in range(a.dim):
            for j in range(b.dim):
                v = np.zeros(n.dim * b.dim, dtype=np.int64)
                for s in range(n.dim):
                    v[s * b.dim + j] += res.action[l][s, i]
                fb = b.multiply(ctx.f.image_of_basis(l), b.basis_vector(j))
                for t in range(b.dim):
                    v[i * b.dim + t] -= fb[t]
                rows.append(v % p)
    return rows
