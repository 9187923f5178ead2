"""Descent along a map ``f: A -> B`` of local augmented algebras.

Given a right ``B``-module ``N`` the pipeline

1. reduces ``N`` modulo ``K = B f(I_A)`` and tests freeness over ``C = B/K``;
2. lifts free generators of ``N/NK`` to ``N`` and builds ``sigma: B^r -> N``;
3. defines the coaction ``psi: N -> N (x)_A B`` through a section of
   ``sigma`` and checks that it is well defined, counital and coassociative;
4. takes ``M = ker(psi - iota)`` and checks ``M (x)_A B -> N`` is an iso.

Every step is verified on the concrete matrices.  A failed step is reported
by name with a witness vector instead of being assumed away.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Iterator, NamedTuple, Sequence

import numpy as np

from .algebra import (
    Algebra,
    AlgebraMap,
    IdealData,
    augmentation_ideal,
    check_local_augmented,
    ideal_generated,
    ideal_power,
    is_closed,
    is_nilpotent_ideal,
    opposite_algebra,
    quotient_algebra,
    validate_algebra,
    validate_algebra_map,
)
from .config import DEFAULT, Config
from .errors import (
    BaseNotLocal,
    InvalidAlgebraMap,
    KernelNotNilpotent,
    KernelNotTwoSided,
    NotAugmented,
    NotFreeOverBase,
    QuotientNotLocal,
    Report,
)
from .linalg import QuotientData, Subspace, intersect, is_invertible, kernel, rank, solve, stack_cols
from .module import (
    FreenessWitness,
    Module,
    NotFree,
    base_change_data,
    generator_map,
    ideal_action_span,
    is_free_over_local,
    quotient_by_ideal,
    restrict,
    validate_module_map,
)
from .rng import XorShift64Star

STEPS = (
    "S1_lift",
    "S2_reduction_mismatch",
    "S3_not_epi",
    "S4_psi_ill_defined",
    "S5_not_counital",
    "S6_not_coassociative",
    "S7_mu_not_iso",
)
STEP = {s[:2]: s for s in STEPS}

HYPOTHESES = ("A_augmented", "f_valid", "K_two_sided", "K_nilpotent", "A_local", "B_free_over_A", "C_local")


# ------------------------------------------------------------------ context


@dataclass(eq=False)
class ExtensionContext:
    A: Algebra
    B: Algebra
    f: AlgebraMap
    I_A: IdealData
    K: IdealData
    C: Algebra
    g: AlgebraMap
    rho: int
    checks: dict[str, bool]
    B_over_A: FreenessWitness | None = None

    @property
    def field(self):
        return self.B.field

    @property
    def graded(self) -> bool:
        return self.A.is_graded and self.B.is_graded


def build_context(a: Algebra, b: Algebra, f: AlgebraMap) -> ExtensionContext:
    """Check the standing hypotheses on ``f`` and derive ``I_A``, ``K``, ``C``, ``g``, ``rho``."""
    checks: dict[str, bool] = {}
    if a.augmentation is None:
        checks["A_augmented"] = False
        raise NotAugmented("A carries no augmentation", checks)
    checks["A_augmented"] = True

    rep = Report()
    for r in (validate_algebra(a), validate_algebra(b), validate_algebra_map(f)):
        rep.violations.extend(r.violations)
    if not rep.ok:
        checks["f_valid"] = False
        first = rep.first()
        raise InvalidAlgebraMap(f"invalid input: {first.kind}: {first.message}", checks)
    checks["f_valid"] = True

    fld = b.field
    i_a = augmentation_ideal(a)
    image = fld.mm(f.matrix, i_a.space.basis.T).T if i_a.dim else fld.zeros(0, b.dim)
    k = ideal_generated(b, Subspace.span(fld, b.dim, image), "left")
    if not is_closed(b, k.space, "right"):
        checks["K_two_sided"] = False
        raise KernelNotTwoSided("B f(I_A) is a left ideal but not two-sided", checks)
    checks["K_two_sided"] = True
    k = IdealData(b, k.space, "two_sided")

    nil, _ = is_nilpotent_ideal(b, k)
    if not nil:
        checks["K_nilpotent"] = False
        raise KernelNotNilpotent("B f(I_A) is not nilpotent, so it is not in the radical of B", checks)
    checks["K_nilpotent"] = True

    if not check_local_augmented(a):
        checks["A_local"] = False
        raise BaseNotLocal("augmentation ideal of A is not nilpotent", checks)
    checks["A_local"] = True

    # B as a left A-module, i.e. a right A^op-module, acting by left multiplication
    aop = opposite_algebra(a)
    acts = np.stack([b.left_matrix(f.image_of_basis(i)) for i in range(a.dim)])
    b_left = Module(aop, acts.astype(fld.dtype, copy=False))
    wit = is_free_over_local(b_left)
    if not isinstance(wit, FreenessWitness):
        checks["B_free_over_A"] = False
        raise NotFreeOverBase(f"B is not free over A: {wit.reason}", checks)
    checks["B_free_over_A"] = True

    c, g = quotient_algebra(b, k)
    if c.augmentation is None or not check_local_augmented(c):
        checks["C_local"] = False
        raise QuotientNotLocal("C = B/K has no nilpotent augmentation ideal", checks)
    checks["C_local"] = True
    return ExtensionContext(a, b, f, i_a, k, c, g, wit.rank, checks, wit)


# ---------------------------------------------------------------- criterion


@dataclass(eq=False)
class Verdict:
    criterion_free: bool
    witness: FreenessWitness | NotFree
    Nbar: Module
    projection: np.ndarray  # N -> Nbar

    @property
    def rank(self) -> int | None:
        return self.witness.rank if self.criterion_free else None


def descent_criterion(ctx: ExtensionContext, n: Module) -> Verdict:
    nbar, proj = quotient_by_ideal(n, ctx.K, ctx.C, ctx.g)
    wit = is_free_over_local(nbar)
    return Verdict(isinstance(wit, FreenessWitness), wit, nbar, proj)


# ------------------------------------------------------------- presentation


@dataclass(eq=False)
class TensorPresentation:
    """``N (x)_A B`` in coordinates, with its counit and unit maps."""

    n_module: Module
    restricted: Module
    ambient_dim: int
    relations: Subspace
    quotient: QuotientData
    module: Module  # right B-module on quotient coordinates
    counit: np.ndarray  # N (x)_A B -> N
    iota: np.ndarray  # N -> N (x)_A B
    report: Report

    @property
    def action(self) -> np.ndarray:
        return self.module.action

    @property
    def dim(self) -> int:
        return self.quotient.dim


def _counit_ambient(n: Module) -> np.ndarray:
    """``n_i (x) b_j -> n_i . b_j`` on ambient coordinates ``i * dim B + j``."""
    f = n.field
    db = n.algebra.dim
    cols = f.zeros(n.dim, n.dim * db)
    for i in range(n.dim):
        for j in range(db):
            cols[:, i * db + j] = n.action[j][:, i]
    return cols


def compute_FGN(ctx: ExtensionContext, n: Module) -> TensorPresentation:
    f = ctx.field
    res = restrict(ctx.f, n)
    bc = base_change_data(ctx.f, res)
    q = bc.quotient
    counit_amb = _counit_ambient(n)
    counit = f.mm(counit_amb, q.lift)
    rep = Report()
    if q.sub.dim and not f.is_zero(f.mm(counit_amb, q.sub.basis.T)):
        rep.add("counit_well_defined", "counit does not kill the relations")
    if not np.array_equal(f.mm(counit, bc.unit_map), f.eye(n.dim)):
        rep.add("counit_iota", "counit o iota != id")
    for t in range(ctx.B.dim):
        if not np.array_equal(f.mm(counit, bc.module.action[t]), f.mm(n.action[t], counit)):
            rep.add("counit_linear", f"counit not B-linear at e{t}", (t,))
            break
    for l in range(ctx.A.dim):
        act = bc.module.act(ctx.f.image_of_basis(l))
        if not np.array_equal(f.mm(bc.unit_map, res.action[l]), f.mm(act, bc.unit_map)):
            rep.add("iota_linear", f"iota not A-linear at e{l}", (l,))
            break
    return TensorPresentation(
        n, res, n.dim * ctx.B.dim, q.sub, q, bc.module, counit, bc.unit_map, rep
    )


def apply_FG(ctx: ExtensionContext, src: TensorPresentation, tgt: TensorPresentation, phi: np.ndarray) -> np.ndarray:
    """``phi (x) B`` between two presentations, for ``phi`` A-linear."""
    f = ctx.field
    big = f.kron(phi, f.eye(ctx.B.dim))
    return f.mm(f.mm(tgt.quotient.project, big), src.quotient.lift)


# ------------------------------------------------------------ sigma and psi


@dataclass(eq=False)
class SigmaData:
    lifts: tuple[np.ndarray, ...]
    sigma: np.ndarray  # N <- B^r
    kernel: Subspace
    nbar_iso: np.ndarray  # C^r -> Nbar


@dataclass(eq=False)
class PsiData:
    psi: np.ndarray  # N -> N (x)_A B
    T: np.ndarray  # B^r -> N (x)_A B, y (x) b -> [sigma(y) (x) b]


@dataclass(eq=False)
class Failure:
    step: str
    witness: np.ndarray | None
    message: str
    verdict: Verdict | None = None
    attempts: list[tuple[int, str]] = dc_field(default_factory=list)
    ok = False

    @property
    def short_step(self) -> str:
        return self.step[:2]


@dataclass(eq=False)
class Certificate:
    rank: int
    shifts: tuple | None
    lifts: tuple[np.ndarray, ...]
    sigma: np.ndarray
    nbar_iso: np.ndarray
    psi: np.ndarray
    M_basis: Subspace
    M: Module
    mu: np.ndarray
    mu_is_iso: bool
    verdict: Verdict | None = None
    retries_used: int = 0
    attempts: list[tuple[int, str]] = dc_field(default_factory=list)
    ok = True


def _sigma_matrix(n: Module, lifts: Sequence[np.ndarray]) -> np.ndarray:
    return generator_map(n, lifts)


def _T_matrix(ctx: ExtensionContext, pres: TensorPresentation, lifts: Sequence[np.ndarray]) -> np.ndarray:
    f = ctx.field
    eye_b = f.eye(ctx.B.dim)
    blocks = [f.kron(l.reshape(-1, 1), eye_b) for l in lifts]
    amb = stack_cols(f, blocks, pres.ambient_dim)
    return f.mm(pres.quotient.project, amb)


def _reduction(ctx: ExtensionContext, r: int) -> np.ndarray:
    f = ctx.field
    return f.kron(f.eye(r), ctx.g.matrix)


def construct_sigma(ctx: ExtensionContext, n: Module, verdict: Verdict, lifts: Sequence[np.ndarray] | None = None) -> SigmaData | Failure:
    f = ctx.field
    if not verdict.criterion_free:
        return Failure("S1_lift", None, "criterion fails: N/NK is not free over C", verdict)
    wit = verdict.witness
    if lifts is None:
        lex = quotient_lift(verdict, n)
        lifts = [f.mm(lex, g) for g in wit.lifts]
    lifts = tuple(np.asarray(l) for l in lifts)
    images = [f.mm(verdict.projection, l) for l in lifts]
    nbar_iso = generator_map(verdict.Nbar, images)
    if len(lifts) != wit.rank or not is_invertible(f, nbar_iso):
        return Failure("S1_lift", None, "lifts do not reduce to a free basis of N/NK", verdict)
    sigma = _sigma_matrix(n, lifts)
    # S2: sigma mod K is the chosen iso C^r -> N/NK
    lhs = f.mm(verdict.projection, sigma)
    rhs = f.mm(nbar_iso, _reduction(ctx, len(lifts)))
    if not np.array_equal(lhs, rhs):
        bad = np.argwhere(lhs != rhs)[0]
        return Failure("S2_reduction_mismatch", f.unit_vector(sigma.shape[1], int(bad[1])), "sigma mod K differs from the iso", verdict)
    # S3: surjective
    if rank(f, sigma) != n.dim:
        return Failure("S3_not_epi", None, "sigma is not surjective", verdict)
    return SigmaData(lifts, sigma, kernel(f, sigma), nbar_iso)


def quotient_lift(verdict: Verdict, n: Module) -> np.ndarray:
    """Section ``Nbar -> N`` picking the lexicographically first preimages."""
    f = n.field
    proj = verdict.projection
    # the projection is the identity on the non-pivot columns of NK
    q = proj.shape[0]
    lift = f.zeros(n.dim, q)
    cols = []
    for c in range(n.dim):
        col = proj[:, c]
        nz = np.flatnonzero(col)
        if len(nz) == 1 and col[nz[0]] == 1 and not any(int(nz[0]) == t for t, _ in cols):
            cols.append((int(nz[0]), c))
    for t, c in cols:
        lift[c, t] = f.one
    return lift


def construct_psi(ctx: ExtensionContext, n: Module, sd: SigmaData, pres: TensorPresentation | None = None,
                  double: TensorPresentation | None = None) -> PsiData | Failure:
    f = ctx.field
    if pres is None:
        pres = compute_FGN(ctx, n)
    T = _T_matrix(ctx, pres, sd.lifts)
    # S4: T must vanish on ker sigma
    for z in sd.kernel.basis:
        img = f.mm(T, z)
        if not f.is_zero(img):
            return Failure("S4_psi_ill_defined", img, "psi is not well defined on ker sigma")
    sec = solve(f, sd.sigma, f.eye(n.dim))
    assert sec.particular is not None
    psi = f.mm(T, sec.particular)
    for t in range(ctx.B.dim):
        if not np.array_equal(f.mm(psi, n.action[t]), f.mm(pres.action[t], psi)):
            return Failure("S4_psi_ill_defined", f.unit_vector(ctx.B.dim, t), "psi is not B-linear")
    chk = _check_counit_coassoc(ctx, n, pres, psi, double)
    if chk is not None:
        return chk
    return PsiData(psi, T)


def _check_counit_coassoc(ctx, n, pres, psi, double) -> Failure | None:
    f = ctx.field
    ci = f.mm(pres.counit, psi)
    if not np.array_equal(ci, f.eye(n.dim)):
        col = int(np.argwhere(ci != f.eye(n.dim))[0][1])
        return Failure("S5_not_counital", f.unit_vector(n.dim, col), "counit o psi != id")
    if double is None:
        double = compute_FGN(ctx, pres.module)
    lhs = f.mm(apply_FG(ctx, pres, double, psi), psi)
    rhs = f.mm(apply_FG(ctx, pres, double, pres.iota), psi)
    if not np.array_equal(lhs, rhs):
        col = int(np.argwhere(lhs != rhs)[0][1])
        return Failure("S6_not_coassociative", f.unit_vector(n.dim, col), "psi is not coassociative")
    return None


# ---------------------------------------------------------------- equalizer


def _first_nonzero(v: np.ndarray) -> int:
    return int(np.flatnonzero(v)[0])


def _homogeneous(v: np.ndarray, grading) -> bool:
    nz = np.flatnonzero(v)
    return len({grading[int(i)] for i in nz}) <= 1


def descended_module(ctx: ExtensionContext, n: Module, m_basis: Subspace) -> Module | None:
    """The ``A``-module structure on ``m_basis`` through ``f``; ``None`` if not stable."""
    f = ctx.field
    k = m_basis.dim
    a = ctx.A
    acts = f.zeros(a.dim, k, k)
    for l in range(a.dim):
        act = n.act(ctx.f.image_of_basis(l))
        imgs = f.mm(act, m_basis.basis.T) if k else f.zeros(n.dim, 0)
        if k and not m_basis.contains(Subspace.image(f, imgs)):
            return None
        acts[l] = imgs[list(m_basis.pivots)] if k else acts[l]
    grading = None
    if n.grading is not None and a.grading is not None:
        grading = tuple(n.grading[c] for c in m_basis.pivots)
    return Module(a, acts, grading)


def mu_matrix(ctx: ExtensionContext, n: Module, m_basis: Subspace, m: Module) -> tuple[np.ndarray, Module, Report]:
    """``mu: M (x)_A B -> N`` and the base change it is defined on."""
    f = ctx.field
    db = ctx.B.dim
    bc = base_change_data(ctx.f, m)
    amb = f.zeros(n.dim, m.dim * db)
    for k2, vec in enumerate(m_basis.basis):
        for j in range(db):
            amb[:, k2 * db + j] = f.mm(n.action[j], vec)
    rep = Report()
    if bc.quotient.sub.dim and not f.is_zero(f.mm(amb, bc.quotient.sub.basis.T)):
        rep.add("mu_well_defined", "mu does not kill the relations")
    mu = f.mm(amb, bc.quotient.lift)
    return mu, bc.module, rep


def _finish(ctx, n, sd: SigmaData, pd: PsiData, pres: TensorPresentation, verdict) -> Certificate | Failure:
    f = ctx.field
    diff = f.reduce(pd.psi - pres.iota)
    m_basis = kernel(f, diff)
    m = descended_module(ctx, n, m_basis)
    if m is None:
        return Failure("S7_mu_not_iso", None, "equalizer is not stable under A", verdict)
    if n.grading is not None:
        for v in m_basis.basis:
            if not _homogeneous(v, n.grading):
                return Failure("S7_mu_not_iso", v, "equalizer basis is not homogeneous", verdict)
    mu, bcm, rep = mu_matrix(ctx, n, m_basis, m)
    if not rep.ok:
        return Failure("S7_mu_not_iso", None, rep.first().message, verdict)
    iso = is_invertible(f, mu)
    if not iso:
        ker = kernel(f, mu)
        w = ker.basis[0] if ker.dim else None
        return Failure("S7_mu_not_iso", w, "mu is not invertible", verdict)
    mrep = validate_module_map(_mm(bcm, n, mu))
    if not mrep.ok:
        return Failure("S7_mu_not_iso", None, f"mu: {mrep.first().message}", verdict)
    wit = verdict.witness
    shifts = None
    if n.grading is not None:
        shifts = tuple(n.grading[_first_nonzero(l)] for l in sd.lifts)
    return Certificate(
        wit.rank, shifts, sd.lifts, sd.sigma, sd.nbar_iso, pd.psi, m_basis, m, mu, True, verdict
    )


def _mm(src, tgt, mat):
    from .module import ModuleMap

    return ModuleMap(src, tgt, mat)


# -------------------------------------------------------------- lift choice


def _degree(v: np.ndarray, grading) -> tuple:
    return grading[_first_nonzero(v)]


def level_lifts(ctx: ExtensionContext, n: Module) -> list[np.ndarray] | None:
    """Lifts adapted to the annihilators of ``f(I_A)^m``.

    Top generators are chosen level by level: first those that can be lifted
    into the part of ``N`` killed by ``f(I_A)``, then by ``f(I_A)^2``, and so
    on.  For an extended module this finds lifts spanning a copy of ``M``.
    """
    f = ctx.field
    b = ctx.B
    mb = augmentation_ideal(b)
    top_sub = ideal_action_span(n, mb.space)
    from .linalg import quotient_space

    top = quotient_space(f, n.dim, top_sub)
    r = top.dim
    chosen_top = Subspace.zero(f, r)
    lifts: list[np.ndarray] = []
    level = 1
    while chosen_top.dim < r:
        ipow = ideal_power(ctx.A, ctx.I_A.space, level)
        if ipow.dim:
            fimg = Subspace.span(f, b.dim, f.mm(ctx.f.matrix, ipow.basis.T).T)
            mats = [n.act(x) for x in fimg.basis]
            v_m = kernel(f, np.vstack(mats))
        else:
            v_m = Subspace.full(f, n.dim)
        for vec in v_m.basis:
            t = f.mm(top.project, vec)
            if f.is_zero(t) or chosen_top.contains_vector(t):
                continue
            chosen_top = Subspace.span(f, r, np.vstack([chosen_top.basis, t.reshape(1, -1)]))
            lifts.append(vec)
        if ipow.dim == 0:
            break
        level += 1
    if chosen_top.dim < r:
        return None
    return lifts


def _candidate_lifts(ctx: ExtensionContext, n: Module, verdict: Verdict, config: Config) -> Iterator[tuple[np.ndarray, ...]]:
    f = ctx.field
    lex = quotient_lift(verdict, n)
    base = tuple(f.mm(lex, g) for g in verdict.witness.lifts)
    seen = set()

    def key(t):
        return b"".join(np.asarray(x, dtype=object).tobytes() if x.dtype == object else x.tobytes() for x in t)

    yield base
    seen.add(key(base))
    lv = level_lifts(ctx, n)
    if lv is not None:
        lv = tuple(lv)
        if key(lv) not in seen:
            seen.add(key(lv))
            yield lv
        base = lv
    mb = augmentation_ideal(ctx.B)
    pert = ideal_action_span(n, mb.space)
    if pert.dim == 0:
        return
    attempt = 2
    tries = 0
    while attempt < config.retry_bound and tries < 4 * config.retry_bound:
        tries += 1
        rng = XorShift64Star(config.seed, stream=tries)
        out = []
        for l in base:
            rows = pert.basis
            if n.grading is not None:
                d = _degree(l, n.grading)
                rows = [v for v in pert.basis if _homogeneous(v, n.grading) and _degree(v, n.grading) == d]
            v = l.copy()
            for row in rows:
                c = rng.below(f.p) if f.is_finite else rng.signed(3)
                if c:
                    v = f.reduce(v + f.canon(c) * row)
            out.append(v)
        out = tuple(out)
        if key(out) in seen:
            continue
        seen.add(key(out))
        attempt += 1
        yield out


def _attempt(ctx, n, verdict, lifts, pres, double_cache) -> Certificate | Failure:
    sd = construct_sigma(ctx, n, verdict, lifts)
    if isinstance(sd, Failure):
        return sd
    if double_cache.get("d") is None:
        double_cache["d"] = compute_FGN(ctx, pres.module)
    pd = construct_psi(ctx, n, sd, pres, double_cache["d"])
    if isinstance(pd, Failure):
        pd.verdict = verdict
        return pd
    return _finish(ctx, n, sd, pd, pres, verdict)


def descend(ctx: ExtensionContext, n: Module, config: Config = DEFAULT) -> Certificate | Failure:
    verdict = descent_criterion(ctx, n)
    if not verdict.criterion_free:
        return Failure("S1_lift", None, "criterion fails: N/NK is not free over C", verdict, [(0, "S1")])
    pres = compute_FGN(ctx, n)
    cache: dict[str, Any] = {}
    attempts: list[tuple[int, str]] = []
    first: Failure | None = None
    for i, lifts in enumerate(_candidate_lifts(ctx, n, verdict, config)):
        if i >= config.retry_bound:
            break
        out = _attempt(ctx, n, verdict, lifts, pres, cache)
        if isinstance(out, Certificate):
            attempts.append((i, "ok"))
            out.retries_used = i
            out.attempts = attempts
            return out
        attempts.append((i, out.short_step))
        if first is None:
            first = out
    assert first is not None
    first.attempts = attempts
    return first


# ------------------------------------------------------------- verification


def verify_certificate(ctx: ExtensionContext, n: Module, cert: Certificate) -> Report:
    """Recheck S2 through S7 from the raw matrices of ``cert``."""
    f = ctx.field
    rep = Report()
    verdict = descent_criterion(ctx, n)
    r = len(cert.lifts)
    db = ctx.B.dim
    lifts = tuple(np.asarray(l) for l in cert.lifts)
    sigma = np.asarray(cert.sigma)
    # S2
    if sigma.shape != (n.dim, r * db) or not np.array_equal(sigma, _sigma_matrix(n, lifts)):
        rep.add("S2", "sigma does not send the free generators to the lifts")
        return rep
    iso = np.asarray(cert.nbar_iso)
    if not verdict.criterion_free or iso.shape != (verdict.Nbar.dim, r * ctx.C.dim) or not is_invertible(f, iso):
        rep.add("S2", "reduction iso is not a bijection C^r -> N/NK")
        return rep
    if not np.array_equal(f.mm(verdict.projection, sigma), f.mm(iso, _reduction(ctx, r))):
        rep.add("S2", "sigma mod K differs from the reduction iso")
        return rep
    # S3
    if rank(f, sigma) != n.dim:
        rep.add("S3", "sigma is not surjective")
        return rep
    pres = compute_FGN(ctx, n)
    T = _T_matrix(ctx, pres, lifts)
    # S4a
    for z in kernel(f, sigma).basis:
        img = f.mm(T, z)
        if not f.is_zero(img):
            rep.add("S4", "T does not vanish on ker sigma", ("class", f.to_strings(img)))
            return rep
    psi = np.asarray(cert.psi)
    if psi.shape != (pres.dim, n.dim):
        rep.add("S5", "psi has the wrong shape")
        return rep
    double = compute_FGN(ctx, pres.module)
    fail = _check_counit_coassoc(ctx, n, pres, psi, double)
    if fail is not None:
        rep.add(fail.short_step, fail.message)
        return rep
    # S4b: psi is the map induced by T, and B-linear
    if not np.array_equal(f.mm(psi, sigma), T):
        rep.add("S4", "psi o sigma != T")
        return rep
    for t in range(db):
        if not np.array_equal(f.mm(psi, n.action[t]), f.mm(pres.action[t], psi)):
            rep.add("S4", f"psi is not B-linear at e{t}")
            return rep
    # S7
    m_basis = kernel(f, f.reduce(psi - pres.iota))
    if cert.M_basis != m_basis:
        rep.add("S7", "M_basis is not ker(psi - iota)")
        return rep
    m = descended_module(ctx, n, m_basis)
    if m is None or not np.array_equal(m.action, cert.M.action):
        rep.add("S7", "M action does not match the equalizer")
        return rep
    mu, bcm, mrep = mu_matrix(ctx, n, m_basis, m)
    if not mrep.ok:
        rep.add("S7", mrep.first().message)
        return rep
    if not np.array_equal(mu, np.asarray(cert.mu)):
        rep.add("S7", "mu differs from m (x) b -> m b")
        return rep
    if not is_invertible(f, mu):
        rep.add("S7", "mu is not invertible")
        return rep
    if not validate_module_map(_mm(bcm, n, mu)).ok:
        rep.add("S7", "mu is not a graded B-module map")
        return rep
    if n.grading is not None:
        for v in m_basis.basis:
            if not _homogeneous(v, n.grading):
                rep.add("S7", "M_basis is not homogeneous")
                return rep
    return rep
