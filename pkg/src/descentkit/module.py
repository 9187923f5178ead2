"""Right modules over finite-dimensional algebras.

A module of dimension ``n`` over ``A`` stores one ``n x n`` matrix per basis
element of ``A``: column vectors, ``v . e_i = R_i v``, so the module law reads
``sum_k c_ij^k R_k = R_j R_i``.  Module maps are ``target x source`` matrices
``T`` with ``T R_i^src = R_i^tgt T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .algebra import Algebra, AlgebraMap, IdealData, add_degrees, augmentation_ideal, check_local_augmented
from .config import DEFAULT, Config
from .errors import AlgebraMismatch, DimensionMismatch, MissingAugmentation, NotCertifiedLocal, Report
from .linalg import QuotientData, Subspace, is_invertible, kernel, quotient_space, rank, solve, stack_cols
from .rng import XorShift64Star

Degree = tuple[int, ...]


@dataclass(eq=False)
class Module:
    algebra: Algebra
    action: np.ndarray  # (dim A, n, n)
    grading: tuple[Degree, ...] | None = None
    name: str = ""

    def __post_init__(self):
        a = np.asarray(self.action)
        if a.ndim != 3 or a.shape[1] != a.shape[2] or a.shape[0] != self.algebra.dim:
            raise DimensionMismatch(
                f"action must have shape ({self.algebra.dim}, n, n), got {a.shape}"
            )
        self.action = a
        if self.grading is not None:
            self.grading = tuple(tuple(int(x) for x in d) for d in self.grading)

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def field(self):
        return self.algebra.field

    @property
    def is_graded(self) -> bool:
        return self.grading is not None

    def act(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ``v -> v . u`` for an algebra element ``u``."""
        f = self.field
        return f.reduce(np.tensordot(u, self.action, axes=([0], [0])))

    def same_data(self, other: "Module") -> bool:
        return (
            self.algebra.same_structure(other.algebra)
            and np.array_equal(self.action, other.action)
            and self.grading == other.grading
        )


@dataclass(eq=False)
class ModuleMap:
    source: Module
    target: Module
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class FreenessWitness:
    rank: int
    lifts: tuple[np.ndarray, ...]
    iso_matrix: np.ndarray
    shifts: tuple[Degree, ...] | None = None
    free = True


@dataclass(frozen=True)
class NotFree:
    rank: int
    dim: int
    expected: int
    reason: str
    free = False


class IsoResult(NamedTuple):
    status: str  # "yes" | "no" | "inconclusive"
    witness: np.ndarray | None = None
    method: str = ""

    @property
    def yes(self) -> bool:
        return self.status == "yes"


class StripResult(NamedTuple):
    module: Module
    count: int
    conclusive: bool


# ------------------------------------------------------------- constructors


def regular_module(a: Algebra) -> Module:
    acts = np.stack([a.right_matrix(a.basis_vector(i)) for i in range(a.dim)])
    grading = a.grading.degrees if a.grading is not None else None
    return Module(a, acts.astype(a.field.dtype, copy=False), grading, name="regular")


def trivial_module(a: Algebra, dim: int = 1) -> Module:
    if a.augmentation is None:
        raise MissingAugmentation("trivial module needs an augmentation")
    f = a.field
    acts = f.zeros(a.dim, dim, dim)
    for i in range(a.dim):
        acts[i] = f.reduce(f.eye(dim) * a.augmentation[i])
    grading = (a.grading.signature.zero(),) * dim if a.grading is not None else None
    return Module(a, acts, grading, name="trivial" if dim == 1 else f"trivial^{dim}")


def zero_module(a: Algebra) -> Module:
    grading = () if a.grading is not None else None
    return Module(a, a.field.zeros(a.dim, 0, 0), grading, name="zero")


def free_module(a: Algebra, r: int, shifts: Sequence[Degree] | None = None) -> Module:
    f = a.field
    reg = regular_module(a)
    eye = f.eye(r)
    acts = np.stack([f.kron(eye, reg.action[i]) for i in range(a.dim)]) if r else f.zeros(a.dim, 0, 0)
    grading = None
    if a.grading is not None:
        if shifts is None:
            shifts = [a.grading.signature.zero()] * r
        if len(shifts) != r:
            raise DimensionMismatch(f"{len(shifts)} shifts for rank {r}")
        grading = tuple(add_degrees(s, d) for s in shifts for d in a.grading.degrees)
    return Module(a, acts, grading, name=f"free^{r}")


def direct_sum(m: Module, n: Module) -> Module:
    _same_algebra(m, n)
    f = m.field
    dm, dn = m.dim, n.dim
    acts = f.zeros(m.algebra.dim, dm + dn, dm + dn)
    acts[:, :dm, :dm] = m.action
    acts[:, dm:, dm:] = n.action
    grading = None
    if m.grading is not None and n.grading is not None:
        grading = m.grading + n.grading
    return Module(m.algebra, acts, grading)


def direct_sum_all(mods: Sequence[Module], algebra: Algebra) -> Module:
    out = zero_module(algebra)
    for m in mods:
        out = direct_sum(out, m)
    return out


def submodule(n: Module, sub: Subspace) -> Module:
    """Submodule spanned by ``sub`` on its stored basis (assumed stable)."""
    f = n.field
    k = sub.dim
    acts = f.zeros(n.algebra.dim, k, k)
    piv = list(sub.pivots)
    for i in range(n.algebra.dim):
        imgs = f.mm(n.action[i], sub.basis.T) if k else f.zeros(n.dim, 0)
        acts[i] = imgs[piv] if k else acts[i]
    grading = None
    if n.grading is not None:
        grading = tuple(n.grading[c] for c in piv)
    return Module(n.algebra, acts, grading)


def quotient_module(n: Module, sub: Subspace) -> tuple[Module, QuotientData]:
    f = n.field
    q = quotient_space(f, n.dim, sub)
    acts = f.zeros(n.algebra.dim, q.dim, q.dim)
    for i in range(n.algebra.dim):
        acts[i] = q.induced(n.action[i])
    grading = None
    if n.grading is not None:
        grading = tuple(n.grading[c] for c in q.lift_basis)
    return Module(n.algebra, acts, grading), q


def submodule_generated(n: Module, vectors: np.ndarray) -> Subspace:
    """Smallest submodule containing the rows of ``vectors``."""
    f = n.field
    cur = Subspace.span(f, n.dim, vectors)
    while True:
        if cur.dim == 0:
            return cur
        imgs = [f.mm(n.action[i], cur.basis.T).T for i in range(n.algebra.dim)]
        nxt = Subspace.span(f, n.dim, np.vstack([cur.basis] + imgs))
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def _same_algebra(m: Module, n: Module) -> None:
    if m.algebra is not n.algebra and not m.algebra.same_structure(n.algebra):
        raise AlgebraMismatch("modules live over different algebras")


# --------------------------------------------------------------- validation


def validate_module(m: Module) -> Report:
    a = m.algebra
    f = m.field
    rep = Report()
    n = m.dim
    unit_act = m.act(a.unit)
    if not np.array_equal(unit_act, f.eye(n)):
        rep.add("unit", "the unit does not act as the identity")
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = m.act(a.mul[i, j])
            rhs = f.mm(m.action[j], m.action[i])
            if not np.array_equal(lhs, rhs):
                rep.add("module_law", f"(v e{i}) e{j} != v (e{i} e{j})", (i, j))
                return rep
    if m.grading is not None:
        if a.grading is None:
            rep.add("grading", "graded module over an ungraded algebra")
            return rep
        if len(m.grading) != n:
            rep.add("grading", f"{len(m.grading)} degrees for dimension {n}")
            return rep
        for i in range(a.dim):
            di = a.grading.degrees[i]
            for k, l in np.argwhere(m.action[i] != 0):
                if m.grading[int(k)] != add_degrees(m.grading[int(l)], di):
                    rep.add("grading", f"e{i} sends basis {int(l)} to the wrong degree", (i, int(l)))
                    return rep
    return rep


def validate_module_map(t: ModuleMap) -> Report:
    rep = Report()
    src, tgt = t.source, t.target
    f = src.field
    if t.matrix.shape != (tgt.dim, src.dim):
        rep.add("shape", f"matrix shape {t.matrix.shape}, expected {(tgt.dim, src.dim)}")
        return rep
    for i in range(src.algebra.dim):
        if not np.array_equal(f.mm(t.matrix, src.action[i]), f.mm(tgt.action[i], t.matrix)):
            rep.add("intertwining", f"map does not commute with e{i}", (i,))
            return rep
    if src.grading is not None and tgt.grading is not None:
        for k, l in np.argwhere(t.matrix != 0):
            if tgt.grading[int(k)] != src.grading[int(l)]:
                rep.add("degree", "map does not preserve degrees", (int(k), int(l)))
                return rep
    return rep


def is_module_map(src: Module, tgt: Module, t: np.ndarray) -> bool:
    return validate_module_map(ModuleMap(src, tgt, t)).ok


# --------------------------------------------------------- change of rings


class BaseChangeData(NamedTuple):
    module: Module
    unit_map: np.ndarray  # dim(result) x dim(m)
    quotient: QuotientData  # presentation of M (x)_k B modulo relations


def base_change_data(fmap: AlgebraMap, m: Module) -> BaseChangeData:
    a, b = fmap.source, fmap.target
    if not m.algebra.same_structure(a):
        raise AlgebraMismatch("module is not over the source of the map")
    f = b.field
    dm, db = m.dim, b.dim
    amb = dm * db
    eye_m = f.eye(dm)
    eye_b = f.eye(db)
    rels = []
    for l in range(a.dim):
        left_fa = b.left_matrix(fmap.image_of_basis(l))
        rels.append(f.reduce(f.kron(m.action[l], eye_b) - f.kron(eye_m, left_fa)))
    relmat = stack_cols(f, rels, amb) if amb else f.zeros(0, 0)
    sub = Subspace.image(f, relmat) if amb else Subspace.zero(f, 0)
    q = quotient_space(f, amb, sub)
    reg = regular_module(b)
    acts = f.zeros(db, q.dim, q.dim)
    for t in range(db):
        acts[t] = q.induced(f.kron(eye_m, reg.action[t]))
    unit_map = f.mm(q.project, f.kron(eye_m, b.unit.reshape(-1, 1))) if amb else f.zeros(q.dim, dm)
    grading = None
    if m.grading is not None and b.grading is not None:
        amb_deg = [add_degrees(dmi, dbj) for dmi in m.grading for dbj in b.grading.degrees]
        grading = tuple(amb_deg[c] for c in q.lift_basis)
    return BaseChangeData(Module(b, acts, grading), unit_map, q)


def base_change(fmap: AlgebraMap, m: Module) -> tuple[Module, np.ndarray]:
    """``M (x)_A B`` with the unit ``m -> [m (x) 1]``."""
    d = base_change_data(fmap, m)
    return d.module, d.unit_map


def restrict(fmap: AlgebraMap, n: Module) -> Module:
    a = fmap.source
    f = a.field
    acts = f.zeros(a.dim, n.dim, n.dim)
    for i in range(a.dim):
        acts[i] = n.act(fmap.image_of_basis(i))
    grading = n.grading if a.grading is not None else None
    return Module(a, acts, grading)


def ideal_action_span(n: Module, ideal: Subspace) -> Subspace:
    """``N I`` for a subspace ``I`` of the algebra."""
    f = n.field
    if ideal.dim == 0 or n.dim == 0:
        return Subspace.zero(f, n.dim)
    mats = [n.act(x) for x in ideal.basis]
    return Subspace.image(f, np.hstack(mats))


def quotient_by_ideal(n: Module, k: IdealData, c: Algebra, g: AlgebraMap) -> tuple[Module, np.ndarray]:
    """``N / NK`` with its ``C``-action and the projection ``N -> N/NK``."""
    b = n.algebra
    f = n.field
    nk = ideal_action_span(n, k.space)
    q = quotient_space(f, n.dim, nk)
    cq = quotient_space(f, b.dim, k.space)
    acts = f.zeros(c.dim, q.dim, q.dim)
    for s, cs in enumerate(cq.lift_basis):
        acts[s] = q.induced(n.action[cs])
    grading = None
    if n.grading is not None and c.grading is not None:
        grading = tuple(n.grading[col] for col in q.lift_basis)
    return Module(c, acts, grading), q.project.copy()


# ------------------------------------------------------- freeness (local C)


def _require_local(c: Algebra) -> None:
    if c.augmentation is None:
        raise NotCertifiedLocal("algebra has no augmentation")
    if not check_local_augmented(c):
        raise NotCertifiedLocal("augmentation ideal is not nilpotent")


def top_quotient(n: Module) -> QuotientData:
    """``N / N m`` where ``m`` is the augmentation ideal."""
    _require_local(n.algebra)
    m = augmentation_ideal(n.algebra)
    return quotient_space(n.field, n.dim, ideal_action_span(n, m.space))


def minimal_generators(n: Module) -> list[np.ndarray]:
    """Standard-basis lifts of a basis of ``N / N m``; they generate ``N``."""
    q = top_quotient(n)
    f = n.field
    lifts = [f.unit_vector(n.dim, c) for c in q.lift_basis]
    gen = submodule_generated(n, np.array(lifts).reshape(-1, n.dim)) if lifts else Subspace.zero(f, n.dim)
    if gen.dim != n.dim:
        raise NotCertifiedLocal("generator lifts fail to generate; locality certificate is wrong")
    return lifts


def generator_map(n: Module, lifts: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix of ``C^r -> N`` sending the ``i``-th free generator to ``lifts[i]``."""
    f = n.field
    c = n.algebra
    cols = [f.mm(n.action[j], g).reshape(-1, 1) for g in lifts for j in range(c.dim)]
    return stack_cols(f, cols, n.dim)


def is_free_over_local(n: Module) -> FreenessWitness | NotFree:
    c = n.algebra
    lifts = minimal_generators(n)
    r = len(lifts)
    if n.dim != r * c.dim:
        return NotFree(r, n.dim, r * c.dim, f"dim {n.dim} != {r} * {c.dim}")
    iso = generator_map(n, lifts)
    if not is_invertible(n.field, iso):
        return NotFree(r, n.dim, r * c.dim, "generator map is not bijective")
    shifts = None
    if n.grading is not None and c.grading is not None:
        shifts = tuple(n.grading[int(np.flatnonzero(g)[0])] for g in lifts)
    return FreenessWitness(r, tuple(lifts), iso, shifts)


# --------------------------------------------------------- hom and isomorphism


def hom_space(m: Module, n: Module) -> list[np.ndarray]:
    """Basis of ``Hom(M, N)`` as ``dim N x dim M`` matrices (degree 0 if graded)."""
    _same_algebra(m, n)
    f = m.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    eye_m = f.eye(dm)
    eye_n = f.eye(dn)
    blocks = [
        f.reduce(f.kron(eye_n, m.action[i].T) - f.kron(n.action[i], eye_m))
        for i in range(m.algebra.dim)
    ]
    system = np.vstack(blocks)
    allowed = list(range(dn * dm))
    if m.grading is not None and n.grading is not None:
        allowed = [k * dm + l for k in range(dn) for l in range(dm) if n.grading[k] == m.grading[l]]
        if not allowed:
            return []
        system = system[:, allowed]
    ker = kernel(f, system)
    out = []
    for row in ker.basis:
        full = f.zeros(dn * dm)
        full[allowed] = row
        out.append(full.reshape(dn, dm))
    return out


def iso_invariants(m: Module) -> tuple:
    f = m.field
    ranks = tuple(rank(f, m.action[i]) for i in range(m.algebra.dim))
    degs = tuple(sorted(m.grading)) if m.grading is not None else None
    return (m.dim, ranks, degs)


def _combine(f, basis: np.ndarray, coeffs) -> np.ndarray:
    return f.reduce(np.tensordot(f.array(list(coeffs)), basis, axes=([0], [0])))


def _decode(index: int, p: int, h: int) -> list[int]:
    digits = []
    for _ in range(h):
        digits.append(index % p)
        index //= p
    return digits


def search_rank(
    f, basis: Sequence[np.ndarray], target: int, config: Config = DEFAULT,
    use_random: bool = True, stream: int = 0,
) -> tuple[str, np.ndarray | None, str]:
    """Look for a combination of ``basis`` matrices of rank ``target``.

    Returns ``(status, matrix, method)`` with status yes / no / inconclusive.
    """
    h = len(basis)
    if h == 0:
        return "no", None, "empty"
    stacked = np.stack(basis)
    if use_random:
        rng = XorShift64Star(config.seed, stream)
        for _ in range(config.random_trials):
            if f.is_finite:
                coeffs = rng.integers(f.p, h)
            else:
                coeffs = [rng.signed(1 << 20) for _ in range(h)]
            cand = _combine(f, stacked, coeffs)
            if rank(f, cand) == target:
                return "yes", cand, "random"
    if not f.is_finite:
        # generic evaluations missed: the determinant-type polynomial is taken to vanish
        return "no", None, "random"
    p = f.p
    if p ** h > config.exhaustive_cap:
        return "inconclusive", None, "exhaustive-cap"
    total = p ** h
    if f.uses_int64:
        idx = kernels.first_rank_combination(stacked, p, target, 0, total)
        if idx < 0:
            return "no", None, "exhaustive"
        return "yes", _combine(f, stacked, _decode(int(idx), p, h)), "exhaustive"
    for idx in range(total):
        cand = _combine(f, stacked, _decode(idx, p, h))
        if rank(f, cand) == target:
            return "yes", cand, "exhaustive"
    return "no", None, "exhaustive"


def is_isomorphic(m: Module, n: Module, config: Config = DEFAULT, mode: str = "auto") -> IsoResult:
    """Decide ``M ~ N``; ``mode="exhaustive"`` skips invariants and random trials."""
    _same_algebra(m, n)
    if m.dim != n.dim:
        return IsoResult("no", None, "dimension")
    if (m.grading is None) != (n.grading is None):
        return IsoResult("no", None, "grading")
    if m.dim == 0:
        return IsoResult("yes", m.field.zeros(0, 0), "zero")
    if mode != "exhaustive":
        if iso_invariants(m) != iso_invariants(n):
            return IsoResult("no", None, "invariants")
        if len(hom_space(m, n)) != len(hom_space(m, m)):
            return IsoResult("no", None, "invariants")
    basis = hom_space(m, n)
    status, w, method = search_rank(
        m.field, basis, m.dim, config, use_random=(mode != "exhaustive")
    )
    return IsoResult(status, w, method)


def strip_free_summands(n: Module, config: Config = DEFAULT) -> StripResult:
    """Split off free summands found through surjections ``N -> B``."""
    b = n.algebra
    _require_local(b)
    f = n.field
    reg = regular_module(b)
    cur = n
    count = 0
    conclusive = True
    while cur.dim >= b.dim:
        if cur.grading is not None:
            # a graded free summand may sit in any shift; search each shift present
            found = None
            for s in sorted(set(_shifts_for(cur))):
                target = free_module(b, 1, [s])
                status, p, _ = search_rank(f, hom_space(cur, target), b.dim, config)
                if status == "inconclusive":
                    conclusive = False
                if status == "yes":
                    found = p
                    break
            p = found
        else:
            status, p, _ = search_rank(f, hom_space(cur, reg), b.dim, config)
            if status == "inconclusive":
                conclusive = False
        if p is None:
            break
        sol = solve(f, p, b.unit)
        assert sol.particular is not None
        cur = submodule(cur, kernel(f, p))
        count += 1
    return StripResult(cur, count, conclusive)


def _shifts_for(n: Module) -> list[Degree]:
    # the generator of a graded copy of B has the degree of a top-quotient basis vector
    q = top_quotient(n)
    return [n.grading[c] for c in q.lift_basis]
