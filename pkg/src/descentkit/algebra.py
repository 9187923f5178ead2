"""Finite-dimensional associative unital algebras given by structure constants.

``mul[i, j, k]`` is the coefficient of ``e_k`` in ``e_i * e_j``.  Elements are
coordinate vectors.  Gradings take values in ``Z^z x N^n`` and are stored as
one integer tuple per basis element.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import MissingAugmentation, NotTwoSided, Report
from .field import Field
from .linalg import Subspace, kernel, product, quotient_space, rank, sum_spaces


@dataclass(frozen=True)
class GradingSignature:
    z_count: int = 0
    n_count: int = 1

    @property
    def width(self) -> int:
        return self.z_count + self.n_count

    def valid_degree(self, deg: Sequence[int]) -> bool:
        return len(deg) == self.width and all(d >= 0 for d in deg[self.z_count:])

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.width


@dataclass(frozen=True)
class Grading:
    signature: GradingSignature
    degrees: tuple[tuple[int, ...], ...]

    @classmethod
    def natural(cls, degrees: Sequence[int]) -> "Grading":
        """N-grading from a flat list of integer degrees."""
        return cls(GradingSignature(0, 1), tuple((int(d),) for d in degrees))


def add_degrees(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(eq=False)
class Algebra:
    field: Field
    mul: np.ndarray
    unit: np.ndarray
    basis: tuple[str, ...] = ()
    augmentation: np.ndarray | None = None
    grading: Grading | None = None
    name: str = dc_field(default="", compare=False)

    def __post_init__(self):
        n = self.mul.shape[0]
        if self.mul.shape != (n, n, n):
            raise ValueError(f"structure constants must be n x n x n, got {self.mul.shape}")
        if not self.basis:
            self.basis = tuple(f"e{i}" for i in range(n))
        self.basis = tuple(self.basis)

    @property
    def dim(self) -> int:
        return self.mul.shape[0]

    @property
    def is_augmented(self) -> bool:
        return self.augmentation is not None

    @property
    def is_graded(self) -> bool:
        return self.grading is not None

    def same_structure(self, other: "Algebra") -> bool:
        return (
            self.field == other.field
            and np.array_equal(self.mul, other.mul)
            and np.array_equal(self.unit, other.unit)
        )

    def element(self, coords) -> np.ndarray:
        return self.field.array(coords)

    def basis_vector(self, i: int) -> np.ndarray:
        return self.field.unit_vector(self.dim, i)

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        f = self.field
        t = np.tensordot(u, self.mul, axes=([0], [0]))
        return f.reduce(np.tensordot(v, t, axes=([0], [0])))

    def left_matrix(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ``v -> u v``."""
        return self.field.reduce(np.tensordot(u, self.mul, axes=([0], [0])).T)

    def right_matrix(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ``v -> v u``."""
        return self.field.reduce(np.tensordot(self.mul, u, axes=([1], [0])).T)

    def power(self, u: np.ndarray, k: int) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(k):
            out = self.multiply(out, u)
        return out

    def is_commutative(self) -> bool:
        return np.array_equal(self.mul, np.transpose(self.mul, (1, 0, 2)))

    def degree_of(self, i: int) -> tuple[int, ...]:
        assert self.grading is not None
        return self.grading.degrees[i]


@dataclass(eq=False)
class AlgebraMap:
    source: Algebra
    target: Algebra
    matrix: np.ndarray  # dim(target) x dim(source)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.target.field.mm(self.matrix, v)

    def image_of_basis(self, i: int) -> np.ndarray:
        return self.matrix[:, i].copy()


@dataclass(eq=False)
class IdealData:
    algebra: Algebra
    space: Subspace
    side: str  # "left" | "right" | "two_sided"
    nilpotency: tuple[bool, int | None] | None = None

    @property
    def dim(self) -> int:
        return self.space.dim


# ---------------------------------------------------------------- validation


def validate_algebra(a: Algebra) -> Report:
    """Check associativity, unit, augmentation and grading; witnesses are index triples."""
    f = a.field
    rep = Report()
    n = a.dim
    c = a.mul
    if a.unit.shape != (n,):
        rep.add("unit", f"unit has shape {a.unit.shape}, expected ({n},)")
        return rep
    # (e_i e_j) e_k  vs  e_i (e_j e_k)
    lhs = f.reduce(np.einsum("ijl,lkm->ijkm", c, c))
    rhs = f.reduce(np.einsum("jkl,ilm->ijkm", c, c))
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        i, j, k = (int(x) for x in bad[0][:3])
        rep.add("associativity", f"(e{i} e{j}) e{k} != e{i} (e{j} e{k})", (i, j, k))
    eye = f.eye(n)
    left_unit = f.reduce(np.tensordot(a.unit, c, axes=([0], [0])))  # (j, k): unit * e_j
    right_unit = f.reduce(np.tensordot(c, a.unit, axes=([1], [0])))  # (i, k): e_i * unit
    for name, m in (("left_unit", left_unit), ("right_unit", right_unit)):
        badu = np.argwhere(m != eye)
        if badu.size:
            j = int(badu[0][0])
            rep.add(name, f"unit fails on basis element {j}", (j,))
    if a.augmentation is not None:
        eps = a.augmentation
        if eps.shape != (n,):
            rep.add("augmentation", f"augmentation has shape {eps.shape}")
        else:
            if f.mm(eps, a.unit) != f.one:
                rep.add("augmentation_unit", "augmentation(unit) != 1")
            prod_eps = f.reduce(np.tensordot(c, eps, axes=([2], [0])))
            outer = f.reduce(np.outer(eps, eps))
            bade = np.argwhere(prod_eps != outer)
            if bade.size:
                i, j = (int(x) for x in bade[0])
                rep.add("augmentation_multiplicative", f"eps(e{i} e{j}) != eps(e{i}) eps(e{j})", (i, j))
    if a.grading is not None:
        _check_grading(a, rep)
    return rep


def _check_grading(a: Algebra, rep: Report) -> None:
    g = a.grading
    sig = g.signature
    if len(g.degrees) != a.dim:
        rep.add("grading", f"{len(g.degrees)} degrees for {a.dim} basis elements")
        return
    for i, d in enumerate(g.degrees):
        if not sig.valid_degree(d):
            rep.add("grading", f"degree {d} of e{i} outside signature", (i,))
            return
    for i, j, k in np.argwhere(a.mul != 0):
        i, j, k = int(i), int(j), int(k)
        if add_degrees(g.degrees[i], g.degrees[j]) != g.degrees[k]:
            rep.add("grading_multiplication", f"e{i} e{j} has a component e{k} of the wrong degree", (i, j, k))
            return
    zero = sig.zero()
    for i in np.flatnonzero(a.unit != 0):
        if g.degrees[int(i)] != zero:
            rep.add("grading_unit", "unit not in degree 0", (int(i),))
            return
    if a.augmentation is not None:
        for i in np.flatnonzero(a.augmentation != 0):
            if g.degrees[int(i)] != zero:
                rep.add("grading_augmentation", "augmentation not supported in degree 0", (int(i),))
                return


def validate_algebra_map(fmap: AlgebraMap) -> Report:
    a, b = fmap.source, fmap.target
    f = b.field
    rep = Report()
    if a.field != b.field:
        rep.add("field", f"{a.field!r} -> {b.field!r}")
        return rep
    if fmap.matrix.shape != (b.dim, a.dim):
        rep.add("shape", f"matrix shape {fmap.matrix.shape}, expected {(b.dim, a.dim)}")
        return rep
    if not np.array_equal(fmap(a.unit), b.unit):
        rep.add("unital", "f(unit) != unit")
    cols = [fmap.image_of_basis(i) for i in range(a.dim)]
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = fmap(a.multiply(a.basis_vector(i), a.basis_vector(j)))
            rhs = b.multiply(cols[i], cols[j])
            if not np.array_equal(lhs, rhs):
                rep.add("multiplicative", f"f(e{i} e{j}) != f(e{i}) f(e{j})", (i, j))
                return rep
    if a.grading is not None and b.grading is not None:
        for i in range(a.dim):
            for k in np.flatnonzero(cols[i] != 0):
                if b.grading.degrees[int(k)] != a.grading.degrees[i]:
                    rep.add("degree", f"f(e{i}) has a component of the wrong degree", (i, int(k)))
                    return rep
    return rep


# ------------------------------------------------------------------ structure


def opposite_algebra(a: Algebra) -> Algebra:
    return Algebra(
        a.field,
        np.ascontiguousarray(np.transpose(a.mul, (1, 0, 2))),
        a.unit.copy(),
        a.basis,
        None if a.augmentation is None else a.augmentation.copy(),
        a.grading,
        name=f"{a.name}^op" if a.name else "",
    )


def _closure(a: Algebra, space: Subspace, side: str) -> Subspace:
    mats = []
    if side in ("left", "two_sided"):
        mats += [a.left_matrix(a.basis_vector(i)) for i in range(a.dim)]
    if side in ("right", "two_sided"):
        mats += [a.right_matrix(a.basis_vector(i)) for i in range(a.dim)]
    f = a.field
    cur = space
    while True:
        if cur.dim == 0:
            return cur
        imgs = [f.mm(m, cur.basis.T).T for m in mats]
        nxt = Subspace.span(f, a.dim, np.vstack([cur.basis] + imgs))
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def ideal_generated(a: Algebra, gens: Subspace, side: str = "two_sided") -> IdealData:
    """Smallest ``side``-ideal containing ``gens``, by saturation."""
    if side not in ("left", "right", "two_sided"):
        raise ValueError(f"bad side {side!r}")
    return IdealData(a, _closure(a, gens, side), side)


def is_closed(a: Algebra, space: Subspace, side: str) -> bool:
    return _closure(a, space, side).dim == space.dim


def is_nilpotent_ideal(a: Algebra, k: IdealData) -> tuple[bool, int | None]:
    """``(True, n)`` with the least ``n`` such that ``K^n = 0``, else ``(False, None)``."""
    if k.space.dim == 0:
        k.nilpotency = (True, 1)
        return True, 1
    powk = k.space
    n = 1
    while True:
        nxt = product(powk, k.space, a.mul)
        n += 1
        if nxt.dim == 0:
            k.nilpotency = (True, n)
            return True, n
        if nxt.dim == powk.dim:
            k.nilpotency = (False, None)
            return False, None
        powk = nxt


def augmentation_ideal(a: Algebra) -> IdealData:
    if a.augmentation is None:
        raise MissingAugmentation(f"algebra {a.name or ''} has no augmentation")
    row = a.augmentation.reshape(1, -1)
    return IdealData(a, kernel(a.field, row), "two_sided")


def check_local_augmented(a: Algebra) -> bool:
    """True iff the augmentation ideal is nilpotent (then it is the radical)."""
    ideal = augmentation_ideal(a)
    ok, _ = is_nilpotent_ideal(a, ideal)
    return ok


def ideal_power(a: Algebra, space: Subspace, n: int) -> Subspace:
    if n == 0:
        return Subspace.full(a.field, a.dim)
    cur = space
    for _ in range(n - 1):
        cur = product(cur, space, a.mul)
    return cur


def quotient_algebra(b: Algebra, k: IdealData) -> tuple[Algebra, AlgebraMap]:
    """``B/K`` on the non-pivot basis of ``K`` and the projection ``B -> B/K``."""
    if not is_closed(b, k.space, "two_sided"):
        raise NotTwoSided("ideal is not two-sided; B/K carries no algebra structure")
    f = b.field
    q = quotient_space(f, b.dim, k.space)
    m = q.dim
    mul = f.zeros(m, m, m)
    for s, cs in enumerate(q.lift_basis):
        for t, ct in enumerate(q.lift_basis):
            prod_st = b.multiply(b.basis_vector(cs), b.basis_vector(ct))
            mul[s, t] = f.mm(q.project, prod_st)
    unit = f.mm(q.project, b.unit)
    aug = None
    if b.augmentation is not None and f.is_zero(f.mm(k.space.basis, b.augmentation)):
        aug = b.augmentation[list(q.lift_basis)].copy()
    grading = None
    if b.grading is not None:
        grading = Grading(b.grading.signature, tuple(b.grading.degrees[c] for c in q.lift_basis))
    c = Algebra(
        f, mul, unit, tuple(b.basis[c] for c in q.lift_basis), aug, grading,
        name=f"{b.name}/K" if b.name else "",
    )
    return c, AlgebraMap(b, c, q.project.copy())


def algebra_generators(a: Algebra) -> list[int]:
    """Greedy list of basis indices generating ``a`` as an algebra."""
    f = a.field
    gens: list[int] = []
    sub = Subspace.span(f, a.dim, a.unit.reshape(1, -1))
    while sub.dim < a.dim:
        for i in range(a.dim):
            if not sub.contains_vector(a.basis_vector(i)):
                gens.append(i)
                break
        sub = _subalgebra(a, [sub.basis] + [a.basis_vector(g).reshape(1, -1) for g in gens])
    return gens


def _subalgebra(a: Algebra, rows: list[np.ndarray]) -> Subspace:
    f = a.field
    cur = Subspace.span(f, a.dim, np.vstack(rows + [a.unit.reshape(1, -1)]))
    while True:
        nxt = sum_spaces(cur, product(cur, cur, a.mul))
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def single_generator(a: Algebra) -> tuple[np.ndarray, np.ndarray] | None:
    """Return ``(x, powers)`` if some basis element ``x`` generates ``a``.

    ``powers`` is the ``dim x dim`` matrix whose column ``i`` is ``x^i``.
    Only basis elements are tried; ``a`` must be commutative.
    """
    if not a.is_commutative():
        return None
    f = a.field
    for i in range(a.dim):
        x = a.basis_vector(i)
        cols = [a.unit]
        for _ in range(1, a.dim):
            cols.append(a.multiply(cols[-1], x))
        pw = np.stack(cols, axis=1).astype(f.dtype, copy=False)
        if rank(f, pw) == a.dim:
            return x, pw
    return None


def minimal_polynomial_of_generator(a: Algebra, x: np.ndarray, powers: np.ndarray) -> list:
    """Monic coefficients ``[c_0, ..., c_{d-1}, 1]`` of the relation ``x^d = ...``."""
    from .linalg import solve

    f = a.field
    xd = a.multiply(powers[:, -1], x)
    sol = solve(f, powers, xd)
    assert sol.particular is not None
    return [f.neg(c) for c in sol.particular] + [f.one]
