"""Standard algebras, extension families, random modules and the small-module oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import sympy

from .algebra import (
    Algebra,
    AlgebraMap,
    Grading,
    GradingSignature,
    algebra_generators,
    augmentation_ideal,
    single_generator,
    minimal_polynomial_of_generator,
)
from .config import DEFAULT, Config
from .errors import BadFamilySpec, BudgetExceeded, NotAGroup, Unsupported
from .field import Field, make_field
from .linalg import Subspace, kernel, quotient_space, rank, solve
from .module import (
    Module,
    base_change,
    direct_sum,
    free_module,
    is_isomorphic,
    quotient_module,
    validate_module,
    zero_module,
)
from .rng import XorShift64Star

# ------------------------------------------------------------------ algebras


def group_algebra(table: Sequence[Sequence[int]], field: Field, labels: Sequence[str] | None = None) -> Algebra:
    """Group algebra from a Cayley table ``table[i][j] = index of g_i g_j``."""
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise NotAGroup("table must be square and non-empty")
    if any(not (0 <= x < n) for row in table for x in row):
        raise NotAGroup("table entries out of range")
    for i, j, k in itertools.product(range(n), repeat=3):
        if table[table[i][j]][k] != table[i][table[j][k]]:
            raise NotAGroup(f"not associative at ({i},{j},{k})")
    ids = [e for e in range(n) if all(table[e][j] == j and table[j][e] == j for j in range(n))]
    if not ids:
        raise NotAGroup("no identity element")
    e = ids[0]
    for i in range(n):
        if not any(table[i][j] == e for j in range(n)):
            raise NotAGroup(f"element {i} has no inverse")
    f = field
    mul = f.zeros(n, n, n)
    for i in range(n):
        for j in range(n):
            mul[i, j, table[i][j]] = f.one
    aug = f.array([1] * n)
    labels = tuple(labels) if labels else tuple(f"g{i}" for i in range(n))
    return Algebra(f, mul, f.unit_vector(n, e), labels, aug, name="group algebra")


def cyclic_group_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def cyclic_group_algebra(n: int, field: Field) -> Algebra:
    labels = ["1"] + ["g" if i == 1 else f"g^{i}" for i in range(1, n)]
    a = group_algebra(cyclic_group_table(n), field, labels)
    a.name = f"{field!r}[C{n}]"
    return a


def truncated_polynomial(field: Field, t: int, deg: int | Sequence[int] | None = None, var: str = "x") -> Algebra:
    """``k[x]/(x^t)`` on the monomial basis, optionally graded with ``deg(x^i) = i * deg``."""
    if t < 1:
        raise ValueError("t must be at least 1")
    f = field
    mul = f.zeros(t, t, t)
    for i in range(t):
        for j in range(t - i):
            mul[i, j, i + j] = f.one
    aug = f.unit_vector(t, 0)
    grading = None
    if deg is not None:
        dv = (deg,) if isinstance(deg, int) else tuple(deg)
        sig = GradingSignature(0, len(dv))
        grading = Grading(sig, tuple(tuple(i * d for d in dv) for i in range(t)))
    labels = tuple("1" if i == 0 else (var if i == 1 else f"{var}^{i}") for i in range(t))
    return Algebra(f, mul, f.unit_vector(t, 0), labels, aug, grading, name=f"{f!r}[{var}]/({var}^{t})")


def exterior_algebra(field: Field, n: int, degrees: Sequence[int] | None = None) -> Algebra:
    """Exterior algebra on ``n`` generators; basis element ``S`` is the bitmask of a subset."""
    f = field
    d = 1 << n
    mul = f.zeros(d, d, d)
    for s in range(d):
        for t in range(d):
            if s & t:
                continue
            # sign of moving the generators of t past the larger ones of s
            inv = sum(bin(s >> (j + 1)).count("1") for j in range(n) if t >> j & 1)
            mul[s, t, s | t] = f.canon(-1 if inv % 2 else 1)
    labels = []
    for s in range(d):
        gens = [f"x{j + 1}" for j in range(n) if s >> j & 1]
        labels.append("*".join(gens) if gens else "1")
    grading = None
    if degrees is not None:
        if len(degrees) != n:
            raise ValueError("one degree per generator")
        grading = Grading.natural([sum(degrees[j] for j in range(n) if s >> j & 1) for s in range(d)])
    return Algebra(f, mul, f.unit_vector(d, 0), tuple(labels), f.unit_vector(d, 0), grading,
                   name=f"exterior({n}) over {f!r}")


# ----------------------------------------------------------------- families


@dataclass(frozen=True)
class ExtensionFamilySpec:
    kind: str  # "frobenius" | "group_inclusion" | "exterior" | "custom"
    params: tuple
    field: Field

    def build(self) -> tuple[Algebra, Algebra, AlgebraMap]:
        if self.kind == "frobenius":
            return frobenius_family(*self.params, field=self.field)
        if self.kind == "group_inclusion":
            return group_inclusion(*self.params, field=self.field)
        if self.kind == "exterior":
            return exterior_inclusion(*self.params, field=self.field)
        raise BadFamilySpec(f"cannot build family {self.kind!r}")


def frobenius_family(p: int, a: int, b: int, field: Field | None = None, graded: bool = False):
    """``k[y]/(y^(p^a)) -> k[x]/(x^(p^(a+b)))`` with ``y -> x^(p^b)``."""
    if not sympy.isprime(p):
        raise BadFamilySpec(f"{p} is not prime")
    if a < 1 or b < 1:
        raise BadFamilySpec("a and b must be at least 1")
    f = field or make_field(p)
    ta, tb, step = p ** a, p ** (a + b), p ** b
    A = truncated_polynomial(f, ta, step if graded else None, var="y")
    B = truncated_polynomial(f, tb, 1 if graded else None, var="x")
    mat = f.zeros(tb, ta)
    for i in range(ta):
        mat[i * step, i] = f.one
    return A, B, AlgebraMap(A, B, mat)


def group_inclusion(m: int, n: int, field: Field):
    """``k[C_m] -> k[C_n]`` sending the generator ``h`` to ``g^(n/m)``."""
    if m < 1 or n % m:
        raise BadFamilySpec(f"C{m} is not a subgroup of C{n}")
    A = cyclic_group_algebra(m, field)
    B = cyclic_group_algebra(n, field)
    step = n // m
    mat = field.zeros(n, m)
    for i in range(m):
        mat[i * step, i] = field.one
    return A, B, AlgebraMap(A, B, mat)


def exterior_inclusion(n_a: int, n_b: int, field: Field):
    """``Lambda(x_1..x_na) -> Lambda(x_1..x_nb)`` on the first generators."""
    if not 0 <= n_a <= n_b:
        raise BadFamilySpec("need 0 <= n_a <= n_b")
    A = exterior_algebra(field, n_a)
    B = exterior_algebra(field, n_b)
    mat = field.zeros(B.dim, A.dim)
    for s in range(A.dim):
        mat[s, s] = field.one
    return A, B, AlgebraMap(A, B, mat)


def gallery_contexts(graded: bool = False) -> dict[str, tuple[Algebra, Algebra, AlgebraMap]]:
    """The extensions exercised by the acceptance suite."""
    gf2, gf3 = make_field(2), make_field(3)
    out = {
        "frobenius:2,1,1": frobenius_family(2, 1, 1),
        "frobenius:2,1,2": frobenius_family(2, 1, 2),
        "frobenius:3,1,1": frobenius_family(3, 1, 1),
        "group:C2<C4/GF2": group_inclusion(2, 4, gf2),
        "exterior:1<2/GF2": exterior_inclusion(1, 2, gf2),
        "exterior:1<2/GF3": exterior_inclusion(1, 2, gf3),
    }
    if graded:
        out = {"frobenius:2,1,1/graded": frobenius_family(2, 1, 1, graded=True)}
    return out


def parse_family(spec: str, field: Field | None = None) -> ExtensionFamilySpec:
    """``frobenius:p,a,b`` | ``group:Cm<Cn`` | ``group:Cn`` | ``exterior:a<b``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "frobenius":
            p, a, b = (int(x) for x in rest.split(","))
            if not sympy.isprime(p):
                raise BadFamilySpec(f"{p} is not prime")
            if a < 1 or b < 1:
                raise BadFamilySpec("a and b must be at least 1")
            return ExtensionFamilySpec("frobenius", (p, a, b), field or make_field(p))
        if kind == "group":
            fld = field or make_field(2)
            if "<" in rest:
                lo, hi = rest.split("<")
                m, n = int(lo.strip().lstrip("Cc")), int(hi.strip().lstrip("Cc"))
            else:
                n = int(rest.strip().lstrip("Cc"))
                m = n // int(sympy.primefactors(n)[0]) if n > 1 else 1
            if m < 1 or n % m:
                raise BadFamilySpec(f"C{m} is not a subgroup of C{n}")
            return ExtensionFamilySpec("group_inclusion", (m, n), fld)
        if kind == "exterior":
            lo, hi = rest.split("<")
            return ExtensionFamilySpec("exterior", (int(lo), int(hi)), field or make_field(2))
    except (ValueError, IndexError) as exc:
        raise BadFamilySpec(f"bad family spec {spec!r}: {exc}") from None
    raise BadFamilySpec(f"unknown family {spec!r}")


# ----------------------------------------------------------- random modules


def socle(m: Module) -> Subspace:
    """Vectors killed by the augmentation ideal."""
    f = m.field
    ideal = augmentation_ideal(m.algebra)
    if m.dim == 0:
        return Subspace.zero(f, 0)
    if ideal.dim == 0:
        return Subspace.full(f, m.dim)
    return kernel(f, np.vstack([m.act(x) for x in ideal.space.basis]))


def random_module(a: Algebra, dim: int, seed: int, stream: int = 0) -> Module:
    """Quotient of a free module by random socle vectors until ``dim`` is reached.

    Over a local algebra the span of one socle vector is a submodule, so each
    step lowers the dimension by exactly one and the result is always valid.
    """
    if dim == 0:
        return zero_module(a)
    f = a.field
    rng = XorShift64Star(seed, stream)
    r = -(-dim // a.dim)
    cur = free_module(a, r)
    while cur.dim > dim:
        soc = socle(cur)
        v = f.zeros(cur.dim)
        while f.is_zero(v):
            coeffs = [rng.below(f.p) if f.is_finite else rng.signed(4) for _ in range(soc.dim)]
            v = f.reduce(f.array(coeffs) @ soc.basis)
        cur, _ = quotient_module(cur, Subspace.span(f, cur.dim, v.reshape(1, -1)))
    cur.name = f"random(dim={dim}, seed={seed:#x})"
    return cur


# --------------------------------------------------------------- enumeration


def companion(f: Field, coeffs: Sequence[int]) -> np.ndarray:
    """Companion matrix of a monic ``c_0 + c_1 t + ... + t^d`` (coefficient list without the 1)."""
    d = len(coeffs)
    m = f.zeros(d, d)
    for i in range(1, d):
        m[i, i - 1] = f.one
    for i in range(d):
        m[i, d - 1] = f.neg(f.canon(coeffs[i]))
    return m


def _poly_factors(f: Field, monic: Sequence) -> list[tuple[list[int], int]]:
    """Monic irreducible factors ``[c_0..c_{d-1}]`` with multiplicities, sorted."""
    t = sympy.Symbol("t")
    coeffs = [int(c) for c in monic]
    poly = sympy.Poly(list(reversed(coeffs)), t, modulus=f.p)
    _, facs = poly.factor_list()
    out = []
    for q, e in facs:
        cs = [int(c) % f.p for c in reversed(q.all_coeffs())]
        lead = cs[-1]
        inv = pow(lead, -1, f.p)
        cs = [c * inv % f.p for c in cs]
        out.append((cs[:-1], int(e)))
    out.sort()
    return out


def _poly_mul(f: Field, a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % f.p
    return out


def _power_monic(f: Field, q: list[int], e: int) -> list[int]:
    full = list(q) + [1]
    out = [1]
    for _ in range(e):
        out = _poly_mul(f, out, full)
    return out[:-1]


def _module_from_matrix(a: Algebra, powers_inv: np.ndarray, x: np.ndarray) -> Module:
    """Module where the generator acts by ``x`` (``a`` commutative, one generator)."""
    f = a.field
    n = x.shape[0]
    pw = [f.eye(n)]
    for _ in range(1, a.dim):
        pw.append(f.mm(pw[-1], x))
    acts = f.zeros(a.dim, n, n)
    for i in range(a.dim):
        acc = f.zeros(n, n)
        for k in range(a.dim):
            c = powers_inv[k, i]
            if c != 0:
                acc = f.reduce(acc + c * pw[k])
        acts[i] = acc
    return Module(a, acts)


def _blockdiag(f: Field, blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = f.zeros(n, n)
    o = 0
    for b in blocks:
        k = b.shape[0]
        out[o:o + k, o:o + k] = b
        o += k
    return out


def _multisets(items: list[tuple[int, int]], total: int) -> Iterable[list[int]]:
    """Multisets of item indices whose sizes sum to ``total`` (items = (index, size))."""
    def rec(start: int, remaining: int):
        if remaining == 0:
            yield []
            return
        for i in range(start, len(items)):
            size = items[i][1]
            if size <= remaining:
                for rest in rec(i, remaining - size):
                    yield [items[i][0]] + rest
    yield from rec(0, total)


def _single_generator_modules(a: Algebra, dim: int, sg) -> list[Module]:
    f = a.field
    x, powers = sg
    minpoly = minimal_polynomial_of_generator(a, x, powers)
    facs = _poly_factors(f, minpoly)
    blocks = []  # (companion matrix, label)
    for q, mult in facs:
        for e in range(1, mult + 1):
            cs = _power_monic(f, q, e)
            blocks.append((companion(f, cs), (tuple(q), e)))
    items = [(i, blk[0].shape[0]) for i, blk in enumerate(blocks)]
    sol = solve(f, powers, f.eye(a.dim))
    pinv = sol.particular
    out = []
    for ms in _multisets(items, dim):
        mat = _blockdiag(f, [blocks[i][0] for i in ms])
        mod = _module_from_matrix(a, pinv, mat)
        mod.name = "+".join(_block_name(a, blocks[i][1]) for i in ms)
        out.append(mod)
    return out


def _block_name(a: Algebra, label) -> str:
    """``J3`` for a nilpotent Jordan block of size 3, else ``[c_0,..]^e`` for ``q(t)^e``."""
    q, e = label
    if tuple(q) == (0,):
        return f"J{e}"
    return f"[{','.join(map(str, q))}]^{e}"


def _word_basis(a: Algebra, gens: list[int]):
    """Words in the generators whose elements form a basis, with their coordinates."""
    f = a.field
    words = [()]
    elems = [a.unit]
    span = Subspace.span(f, a.dim, a.unit.reshape(1, -1))
    frontier = [()]
    while span.dim < a.dim and frontier:
        nxt = []
        for w in frontier:
            base = elems[words.index(w)]
            for g in gens:
                e = a.multiply(base, a.basis_vector(g))
                if not span.contains_vector(e):
                    words.append(w + (g,))
                    elems.append(e)
                    span = Subspace.span(f, a.dim, np.vstack([span.basis, e.reshape(1, -1)]))
                    nxt.append(w + (g,))
        frontier = nxt
    mat = np.stack(elems, axis=1)
    coords = solve(f, mat, f.eye(a.dim)).particular  # column i: e_i in terms of words
    return words, coords


def _brute_modules(a: Algebra, dim: int, config: Config) -> list[Module]:
    f = a.field
    gens = algebra_generators(a)
    cells = dim * dim * len(gens)
    total = f.p ** cells
    if total > config.enumeration_budget:
        raise BudgetExceeded(
            f"{total} candidate action tuples for dim {dim} exceed the budget {config.enumeration_budget}"
        )
    words, coords = _word_basis(a, gens)
    reps: list[Module] = []
    for flat in itertools.product(range(f.p), repeat=cells):
        mats = {g: f.array(list(flat[i * dim * dim:(i + 1) * dim * dim])).reshape(dim, dim) for i, g in enumerate(gens)}
        wmats = []
        for w in words:
            m = f.eye(dim)
            for g in w:
                m = f.mm(mats[g], m)
            wmats.append(m)
        acts = f.zeros(a.dim, dim, dim)
        for i in range(a.dim):
            acc = f.zeros(dim, dim)
            for k, wm in enumerate(wmats):
                c = coords[k, i]
                if c != 0:
                    acc = f.reduce(acc + c * wm)
            acts[i] = acc
        cand = Module(a, acts)
        if not validate_module(cand).ok:
            continue
        if any(is_isomorphic(cand, r, config).yes for r in reps):
            continue
        reps.append(cand)
    return reps


def enumerate_modules(a: Algebra, max_dim: int, config: Config = DEFAULT, method: str = "auto",
                      min_dim: int = 1) -> list[Module]:
    """Pairwise non-isomorphic modules of dimension ``min_dim .. max_dim``.

    One-generator commutative algebras are classified by rational canonical
    forms; otherwise generator matrices are enumerated within the budget.
    """
    f = a.field
    if not f.is_finite:
        raise Unsupported("module enumeration needs a finite field")
    out: list[Module] = []
    sg = single_generator(a) if method == "auto" else None
    for d in range(min_dim, max_dim + 1):
        if d == 0:
            out.append(zero_module(a))
        elif sg is not None:
            out.extend(_single_generator_modules(a, d, sg))
        else:
            out.extend(_brute_modules(a, d, config))
    return out


def enumerate_graded_modules(a: Algebra, max_dim: int, shifts: Sequence[int] = (0, 1)) -> list[Module]:
    """Graded modules over a graded ``k[x]/(x^t)``: sums of shifted cyclic quotients.

    Only the given degree shifts are used, so the list is complete for modules
    generated in those degrees.
    """
    if a.grading is None:
        raise ValueError("algebra is not graded")
    sg = single_generator(a)
    if sg is None:
        raise Unsupported("graded enumeration needs a one-generator algebra")
    x, powers = sg
    f = a.field
    minpoly = minimal_polynomial_of_generator(a, x, powers)
    t = len(minpoly) - 1
    if any(c != 0 for c in minpoly[:-1]):
        raise Unsupported("graded enumeration needs a relation x^t = 0")
    xi = int(np.flatnonzero(x)[0])
    dx = a.grading.degrees[xi]
    sig = a.grading.signature
    pinv = solve(f, powers, f.eye(a.dim)).particular
    items = [((e, s), e) for e in range(1, t + 1) for s in shifts]
    out = []
    for d in range(1, max_dim + 1):
        for ms in _multisets([(i, it[1]) for i, it in enumerate(items)], d):
            blocks, degs = [], []
            for i in ms:
                e, s = items[i][0]
                blocks.append(companion(f, [0] * e))
                base = (s,) + (0,) * (sig.width - 1)
                degs.extend(tuple(b + k * c for b, c in zip(base, dx)) for k in range(e))
            mod = _module_from_matrix(a, pinv, _blockdiag(f, blocks))
            mod.grading = tuple(degs)
            mod.name = "+".join(f"k[x]/x^{items[i][0][0]}({items[i][0][1]})" for i in ms)
            out.append(mod)
    return out


# -------------------------------------------------------------------- oracle


class OracleResult(NamedTuple):
    status: str  # "yes" | "no" | "inconclusive"
    M: Module | None = None
    candidates: int = 0
    reason: str = ""

    @property
    def yes(self) -> bool:
        return self.status == "yes"


def decide_extended_oracle(ctx, n: Module, config: Config = DEFAULT) -> OracleResult:
    """Brute-force test: is ``n`` isomorphic to ``M (x)_A B`` for an enumerated ``M``?"""
    if n.dim % ctx.rho:
        return OracleResult("no", None, 0, f"dim {n.dim} is not divisible by {ctx.rho}")
    m_dim = n.dim // ctx.rho
    plain = Module(n.algebra, n.action)
    cands = enumerate_modules(ctx.A, m_dim, config, min_dim=m_dim) if m_dim else [zero_module(ctx.A)]
    inconclusive = False
    for m in cands:
        bc, _ = base_change(ctx.f, m)
        res = is_isomorphic(bc, plain, config)
        if res.yes:
            return OracleResult("yes", m, len(cands), "isomorphic to a base change")
        if res.status == "inconclusive":
            inconclusive = True
    if inconclusive:
        return OracleResult("inconclusive", None, len(cands), "isomorphism search hit the cap")
    return OracleResult("no", None, len(cands), f"no A-module of dim {m_dim} base-changes to N")
