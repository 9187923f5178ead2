"""Exact dense linear algebra and a canonical subspace calculus.

Vectors are 1-D field arrays, matrices 2-D field arrays (see :mod:`.field`).
Linear maps act on column vectors.  A :class:`Subspace` always stores its
basis as the non-zero rows of a reduced row-echelon form, so two subspaces
are equal exactly when their stored bases are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatch
from .field import Field


class RREF(NamedTuple):
    matrix: np.ndarray
    pivots: tuple[int, ...]
    rank: int


def _rref_generic(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    work = field.array(a) if a.dtype != field.dtype else a.copy()
    rows, cols = work.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if work[i, c] != 0]
        if not nz:
            continue
        k = nz[0]
        if k != r:
            work[[r, k]] = work[[k, r]]
        inv = field.inv(work[r, c])
        work[r] = field.reduce(work[r] * inv)
        hit = [i for i in range(rows) if i != r and work[i, c] != 0]
        if hit:
            work[hit] = field.reduce(work[hit] - np.outer(work[hit, c], work[r]))
        pivots.append(c)
        r += 1
    return work, pivots


def rref(field: Field, a: np.ndarray) -> RREF:
    """Unique reduced row-echelon form of ``a`` with its pivot columns."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise DimensionMismatch(f"rref needs a matrix, got shape {a.shape}")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return RREF(field.array(a).reshape(a.shape), (), 0)
    if field.uses_int64:
        m, piv = kernels.rref_modp(a, field.p)
    else:
        m, piv = _rref_generic(field, a)
    return RREF(m, tuple(piv), len(piv))


def rank(field: Field, a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if field.uses_int64:
        return int(kernels.rank_modp(a, field.p))
    return rref(field, a).rank


def is_invertible(field: Field, a: np.ndarray) -> bool:
    return a.shape[0] == a.shape[1] and rank(field, a) == a.shape[0]


def stack_rows(field: Field, blocks: Iterable[np.ndarray], width: int) -> np.ndarray:
    blocks = [b.reshape(-1, width) for b in blocks]
    if not blocks:
        return field.zeros(0, width)
    return np.vstack(blocks).astype(field.dtype, copy=False)


def stack_cols(field: Field, blocks: Iterable[np.ndarray], height: int) -> np.ndarray:
    blocks = [b.reshape(height, -1) for b in blocks]
    if not blocks:
        return field.zeros(height, 0)
    return np.hstack(blocks).astype(field.dtype, copy=False)


class Subspace:
    """Subspace of ``field**ambient_dim`` with a canonical RREF basis."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: Field, ambient_dim: int, basis: np.ndarray, pivots: Sequence[int]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field: Field, ambient_dim: int, rows) -> "Subspace":
        rows = np.asarray(rows)
        if rows.size == 0:
            return cls.zero(field, ambient_dim)
        rows = rows.reshape(-1, ambient_dim)
        red = rref(field, rows)
        return cls(field, ambient_dim, red.matrix[: red.rank].copy(), red.pivots)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, field.zeros(0, ambient_dim), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, field.eye(ambient_dim), range(ambient_dim))

    @classmethod
    def image(cls, field: Field, m: np.ndarray) -> "Subspace":
        """Column space of ``m``."""
        return cls.span(field, m.shape[0], np.asarray(m).T)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.pivots, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, pivots={self.pivots})"

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Normal form of ``v`` (or of each column of ``v``) modulo this subspace."""
        v = np.asarray(v)
        if self.dim == 0:
            return v.copy()
        piv = list(self.pivots)
        if v.ndim == 1:
            return self.field.reduce(v - v[piv] @ self.basis)
        return self.field.reduce(v - self.basis.T @ v[piv])

    def contains_vector(self, v: np.ndarray) -> bool:
        return self.field.is_zero(self.reduce(v))

    def contains(self, other: "Subspace") -> bool:
        _same_ambient(self, other)
        return other.dim == 0 or self.field.is_zero(self.reduce(other.basis.T))

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        """Coefficients of ``v`` (assumed inside) on the stored basis."""
        return np.asarray(v)[list(self.pivots)]


def _same_ambient(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch(f"ambient dims {u.ambient_dim} vs {v.ambient_dim}")


class Solution(NamedTuple):
    particular: np.ndarray | None
    nullspace: Subspace


def kernel(field: Field, m: np.ndarray) -> Subspace:
    """Null space ``{v : m v = 0}`` in canonical form."""
    m = np.asarray(m)
    rows, cols = m.shape
    if cols == 0:
        return Subspace.zero(field, 0)
    if rows == 0:
        return Subspace.full(field, cols)
    red = rref(field, m)
    piv = red.pivots
    free = [c for c in range(cols) if c not in set(piv)]
    if not free:
        return Subspace.zero(field, cols)
    vecs = field.zeros(len(free), cols)
    for t, f in enumerate(free):
        vecs[t, f] = field.one
        for i, c in enumerate(piv):
            vecs[t, c] = field.neg(red.matrix[i, f])
    return Subspace.span(field, cols, vecs)


def solve(field: Field, a: np.ndarray, b: np.ndarray) -> Solution:
    """Solve ``a X = b``; ``b`` may be a vector or a matrix of right-hand sides."""
    a = np.asarray(a)
    b = np.asarray(b)
    vector = b.ndim == 1
    bm = b.reshape(-1, 1) if vector else b
    if a.shape[0] != bm.shape[0]:
        raise DimensionMismatch(f"a has {a.shape[0]} rows, b has {bm.shape[0]}")
    rows, cols = a.shape
    null = kernel(field, a) if cols else Subspace.zero(field, 0)
    aug = np.hstack([a.astype(field.dtype, copy=False), bm.astype(field.dtype, copy=False)])
    red = rref(field, aug) if aug.size else RREF(aug, (), 0)
    if any(c >= cols for c in red.pivots):
        return Solution(None, null)
    x = field.zeros(cols, bm.shape[1])
    for i, c in enumerate(red.pivots):
        x[c] = red.matrix[i, cols:]
    return Solution(x[:, 0] if vector else x, null)


def sum_spaces(u: Subspace, v: Subspace) -> Subspace:
    _same_ambient(u, v)
    return Subspace.span(u.field, u.ambient_dim, np.vstack([u.basis, v.basis]))


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Exact intersection from the kernel of ``[U^T | -V^T]``."""
    _same_ambient(u, v)
    f = u.field
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(f, u.ambient_dim)
    stacked = np.hstack([u.basis.T, f.reduce(-v.basis.T)])
    ker = kernel(f, stacked)
    if ker.dim == 0:
        return Subspace.zero(f, u.ambient_dim)
    coeffs = ker.basis[:, : u.dim]
    return Subspace.span(f, u.ambient_dim, f.mm(coeffs, u.basis))


def product(
    u: Subspace,
    v: Subspace,
    bilinear: Callable[[np.ndarray, np.ndarray], np.ndarray] | np.ndarray,
    ambient_dim: int | None = None,
) -> Subspace:
    """Span of ``bilinear(x, y)`` over basis pairs of ``u`` and ``v``.

    ``bilinear`` is either a callable or a structure-constant tensor
    ``c[i, j, k]`` with ``x * y = sum_k (sum_ij x_i y_j c[i, j, k]) e_k``.
    """
    f = u.field
    if isinstance(bilinear, np.ndarray):
        out_dim = bilinear.shape[2]
        if u.dim == 0 or v.dim == 0:
            return Subspace.zero(f, out_dim)
        t = np.tensordot(u.basis, bilinear, axes=([1], [0]))  # (du, j, k)
        t = np.tensordot(t, v.basis, axes=([1], [1]))  # (du, k, dv)
        rows = f.reduce(np.transpose(t, (0, 2, 1)).reshape(-1, out_dim))
        return Subspace.span(f, out_dim, f.array(rows) if rows.dtype != f.dtype else rows)
    if ambient_dim is None:
        raise DimensionMismatch("product with a callable needs ambient_dim")
    rows = [bilinear(x, y) for x in u.basis for y in v.basis]
    return Subspace.span(f, ambient_dim, stack_rows(f, rows, ambient_dim))


def subspace_ops(op: str, u: Subspace, v: Subspace, bilinear=None, ambient_dim=None):
    if op == "sum":
        return sum_spaces(u, v)
    if op == "intersect":
        return intersect(u, v)
    if op == "contains":
        return u.contains(v)
    if op == "equals":
        _same_ambient(u, v)
        return u == v
    if op == "product":
        if bilinear is None:
            raise DimensionMismatch("product needs a bilinear map")
        return product(u, v, bilinear, ambient_dim)
    raise ValueError(f"unknown subspace op {op!r}")


@dataclass(frozen=True, eq=False)
class QuotientData:
    """``V / sub`` with the complement spanned by the non-pivot coordinates.

    ``project`` maps ambient coordinates to quotient coordinates and ``lift``
    is the section sending quotient basis vector ``t`` to ``e_{lift_basis[t]}``.
    """

    ambient_dim: int
    sub: Subspace
    lift_basis: tuple[int, ...]
    project: np.ndarray
    lift: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.lift_basis)

    def induced(self, m: np.ndarray) -> np.ndarray:
        """Matrix of the map induced on the quotient by ``m`` (assumed to preserve ``sub``)."""
        f = self.sub.field
        return f.mm(self.project, np.asarray(m)[:, list(self.lift_basis)])


def quotient_space(field: Field, ambient_dim: int, sub: Subspace) -> QuotientData:
    if sub.ambient_dim != ambient_dim:
        raise DimensionMismatch(f"subspace lives in dim {sub.ambient_dim}, not {ambient_dim}")
    piv = set(sub.pivots)
    comp = tuple(c for c in range(ambient_dim) if c not in piv)
    q = len(comp)
    project = field.zeros(q, ambient_dim)
    lift = field.zeros(ambient_dim, q)
    for t, c in enumerate(comp):
        project[t, c] = field.one
        lift[c, t] = field.one
    if sub.dim:
        comp_idx = list(comp)
        for i, c in enumerate(sub.pivots):
            project[:, c] = field.reduce(-sub.basis[i, comp_idx])
    return QuotientData(ambient_dim, sub, comp, project, lift)
