"""Ideal and module calculus built on the basis engine."""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from ..symcore import MonomialOrder, Polynomial, RingContext
from .engine import Engine, Vec
from .module import FreeElement, GBasis, Submodule

INFINITE = math.inf


class SymPowerTooLarge(ValueError):
    pass


# ---------------------------------------------------------------------------
# determinants and minors
# ---------------------------------------------------------------------------


def determinant(A: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Cofactor expansion with memoisation over column subsets (division free)."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    ctx = A[0][0].ctx

    @lru_cache(maxsize=None)
    def det(row: int, cols: tuple) -> Polynomial:
        if row == n - 1:
            return A[row][cols[0]]
        acc = ctx.zero()
        for k, c in enumerate(cols):
            a = A[row][c]
            if a.is_zero():
                continue
            sub = det(row + 1, cols[:k] + cols[k + 1:])
            if sub.is_zero():
                continue
            term = a * sub
            acc = acc - term if k % 2 else acc + term
        return acc

    return det(0, tuple(range(n)))


def minors(A: Sequence[Sequence[Polynomial]], t: int, ctx: RingContext | None = None) -> Submodule:
    """Ideal generated by all t x t minors of A."""
    if t <= 0:
        raise ValueError("minor size must be positive")
    rows, cols = len(A), len(A[0]) if A else 0
    if ctx is None:
        ctx = A[0][0].ctx
    if t > min(rows, cols):
        raise ValueError(f"no {t}x{t} minors in a {rows}x{cols} matrix")
    seen = []
    keys = set()
    for rs in combinations(range(rows), t):
        for cs in combinations(range(cols), t):
            d = determinant([[A[r][c] for c in cs] for r in rs])
            if d.is_zero():
                continue
            k = frozenset(d.terms.items())
            neg = frozenset((-d).terms.items())
            if k in keys or neg in keys:
                continue
            keys.add(k)
            seen.append(ctx._import(d))
    return Submodule.ideal(ctx, seen) if seen else Submodule(ctx, [], rank=1)


# ---------------------------------------------------------------------------
# colength
# ---------------------------------------------------------------------------


def _minimal_monomials(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


@lru_cache(maxsize=100_000)
def _count_standard(gens: tuple, n: int):
    """Number of monomials in n variables outside the monomial ideal ``gens`` (inf if infinite)."""
    if n == 0:
        return 0 if gens else 1
    if any(not any(g) for g in gens):
        return 0
    pure = [g[-1] for g in gens if not any(g[:-1])]
    if not pure:
        return INFINITE
    a = min(pure)
    total = 0
    for k in range(a):
        sub = _minimal_monomials(g[:-1] for g in gens if g[-1] <= k)
        c = _count_standard(sub, n - 1)
        if c == INFINITE:
            return INFINITE
        total += c
    return total


def leading_monomials(B: GBasis) -> list[tuple]:
    """Per component, the minimal generators of the leading-term monomial ideal."""
    per = [[] for _ in range(B.rank)]
    for comp, e in B.leading_terms():
        per[comp].append(e)
    return [_minimal_monomials(g) for g in per]


def count_standard_monomials(lead_ideals, nvars: int):
    total = 0
    for gens in lead_ideals:
        c = _count_standard(tuple(gens), nvars)
        if c == INFINITE:
            return INFINITE
        total += c
    return total


class ColengthBoundExceeded(ValueError):
    """A colength exceeded the configured ``MAX_COLENGTH`` safety bound."""


MAX_COLENGTH: int | None = None
TRUNCATION_BUDGET = 60_000      # monomials (times rank) below the truncation degree


def _monomials_below(N: int, n: int) -> int:
    return math.comb(N - 1 + n, n)


def _degree_profile(lead, n: int, N: int) -> list[int]:
    """hf[k] = number of monomials of degree k < N outside the monomial modules ``lead``."""
    hf = [0] * N

    def rec(prefix, i, left):
        if i == n - 1:
            yield prefix + (left,)
            return
        for a in range(left, -1, -1):
            yield from rec(prefix + (a,), i + 1, left - a)

    for gens in lead:
        for k in range(N):
            if n == 0:
                hf[k] += 0 if (gens or k) else 1
                continue
            for e in rec((), 0, k):
                if not any(all(a <= b for a, b in zip(g, e)) for g in gens):
                    hf[k] += 1
    return hf


def _truncated_colength(S: Submodule):
    """Local colength modulo growing powers m^N, or None if undecided within the budget.

    Under a degree-first local order, truncating at degree N never touches a
    leading term, so the leading module of S + m^N F agrees with that of S in
    degrees below N.  Its degree profile is the Hilbert function of the
    associated graded module; a zero in degree k means m^k F lies in S by
    Nakayama, and the colength is the sum of the profile below k.
    """
    raw = S._raw_generators()
    n = S.ctx.nvars
    if not raw or n == 0:
        return None
    maxdeg = max(sum(e) for g in raw for (_, e) in g)
    order = MonomialOrder("local_degrevlex", module="top")
    N = max(maxdeg + 2, 4)
    while _monomials_below(N, n) * S.rank <= TRUNCATION_BUDGET:
        eng = Engine(S.ctx.field, order, trunc=N)
        vecs = eng.basis(raw, rank_one=S.rank == 1, reduce=False)
        per = [[] for _ in range(S.rank)]
        for v in vecs:
            per[v.lm[0]].append(v.lm[1])
        if any(not g for g in per):
            return None
        hf = _degree_profile([_minimal_monomials(g) for g in per], n, N)
        if 0 in hf:
            return sum(hf[:hf.index(0)])
        if MAX_COLENGTH is not None and sum(hf) > MAX_COLENGTH:
            raise ColengthBoundExceeded(f"colength exceeds {MAX_COLENGTH}")
        N *= 2
    return None


def colength(S: Submodule, order: MonomialOrder | None = None):
    """dim of O_X^p / S: number of standard monomials of the leading module (inf if unbounded).

    Under a local order this is the length of the quotient of the localisation
    at the origin; under a global order it counts all points.
    """
    order = order or S.ctx.order
    c = None
    if order.is_local and order not in S._basis:
        c = _truncated_colength(S)
    if c is None:
        B = S.basis(order)
        c = count_standard_monomials(leading_monomials(B), S.ctx.nvars)
    if MAX_COLENGTH is not None and c != INFINITE and c > MAX_COLENGTH:
        raise ColengthBoundExceeded(f"colength {c} exceeds {MAX_COLENGTH}")
    return c


def standard_monomials(S: Submodule, order: MonomialOrder | None = None) -> list[tuple[int, tuple]]:
    """Explicit list of standard monomials (component, exponents); the module must have finite colength."""
    lead = leading_monomials(S.basis(order))
    n = S.ctx.nvars
    out = []
    for comp, gens in enumerate(lead):
        bounds = []
        for i in range(n):
            pure = [g[i] for g in gens if all(g[j] == 0 for j in range(n) if j != i)]
            if not pure:
                raise ValueError("infinite colength")
            bounds.append(min(pure))

        def rec(prefix, i):
            if i == n:
                e = tuple(prefix)
                if not any(all(a <= b for a, b in zip(g, e)) for g in gens):
                    out.append((comp, e))
                return
            for k in range(bounds[i]):
                rec(prefix + [k], i + 1)

        rec([], 0)
    return out


# ---------------------------------------------------------------------------
# preimages, quotients, saturation, elimination
# ---------------------------------------------------------------------------


def preimage_submodule(h_list: Sequence[FreeElement], T: Submodule, *, basis_only: bool = False):
    """U = {a in O^s : sum a_i h_i in T}, s = len(h_list).

    Syzygies of [h_1..h_s | T-generators] via a position-over-term basis of the
    module generated by (h_i, e_i) and (t_j, 0) in O^{r+s}; the basis elements
    whose leading term sits in the last s components generate U.
    The returned Submodule carries that basis pre-computed.
    """
    ctx = T.ctx
    r = T.rank
    s = len(h_list)
    if s == 0:
        raise ValueError("empty h_list")
    raw = []
    for i, h in enumerate(h_list):
        if h.rank != r:
            raise ValueError("h_list and T live in different free modules")
        d = h.to_terms()
        d[(r + i, (0,) * ctx.nvars)] = ctx.field.one
        raw.append(d)
    raw.extend(T._raw_generators())
    for q in ctx.quotient:
        for i in range(s):
            raw.append({(r + i, e): a for e, a in q.terms.items()})
    order = ctx.order.with_module("pot")
    eng = Engine(ctx.field, order)
    vecs = eng.basis(raw, rank_one=False)
    sub = []
    for v in vecs:
        if v.lm[0] >= r:
            sub.append(eng.vec({(c - r, e): a for (c, e), a in v.t.items()}))
    # build U; its basis under the ctx order (pot) is exactly ``sub``
    elems = [FreeElement.from_terms(ctx, s, v.t) for v in sub]
    U = Submodule(ctx, elems, rank=s) if elems else Submodule(ctx, [], rank=s)
    sub_eng = Engine(ctx.field, order)
    basis = GBasis(ctx, s, sub_eng.minimalize(sub, reduce=not order.is_local), sub_eng)
    U._basis[order] = basis
    if basis_only:
        return basis
    return U


def quotient_length(N: Submodule, M: Submodule):
    """Length of N/M (M contained in N) as the colength of the preimage of M under O^s -> N."""
    U = preimage_submodule(N.generators, M)
    return colength(U, U.ctx.order.with_module("pot"))


def ideal_quotient(I: Submodule, J: Submodule) -> Submodule:
    """(I : J) = {g : g J in I} for ideals."""
    if I.rank != 1 or J.rank != 1:
        raise ValueError("ideal_quotient expects ideals")
    ctx = I.ctx
    js = [g[0] for g in J.generators if not g[0].is_zero()]
    if not js:
        return Submodule.ideal(ctx, [ctx.one()])
    m = len(js)
    h = FreeElement(ctx, js)
    T = Submodule(ctx, [FreeElement(ctx, [f if k == i else ctx.zero() for k in range(m)])
                        for f in I.polys() for i in range(m)] or [], rank=m)
    U = preimage_submodule([h], T)
    return _ideal_from_basis(U)


def _ideal_from_basis(U: Submodule) -> Submodule:
    B = U.basis(U.ctx.order.with_module("pot"))
    polys = [e[0] for e in B.elements]
    # quotient multiples are implicit in the ring; drop them for readability
    out = Submodule.ideal(U.ctx, polys) if polys else Submodule(U.ctx, [], rank=1)
    return out


def saturate(I: Submodule, J: Submodule, max_iter: int = 64) -> Submodule:
    """(I : J^infinity), iterating quotients until the ideal stops growing."""
    cur = I
    for _ in range(max_iter):
        nxt = ideal_quotient(cur, J)
        if cur.contains_module(nxt):
            return cur if cur is not I else nxt
        cur = nxt
    raise RuntimeError("saturation did not stabilise")


def is_unit_ideal(I: Submodule) -> bool:
    return I.contains(I.ctx.one())


def eliminate(I: Submodule, vars_: Sequence[str]) -> Submodule:
    """I intersected with the subring not involving ``vars_`` (global block order)."""
    ctx = I.ctx
    if ctx.order.is_local:
        raise ValueError("elimination requires a global block order")
    if I.rank != 1:
        raise ValueError("eliminate expects an ideal")
    elim = [v for v in ctx.vars if v in set(vars_)]
    for v in vars_:
        ctx.index(v)
    if not elim:
        return I
    rest = [v for v in ctx.vars if v not in set(elim)]
    perm = [ctx.index(v) for v in elim + rest]
    order = MonomialOrder("elimination_block", split=len(elim))
    eng = Engine(ctx.field, order)
    raw = []
    for g in I._raw_generators():
        raw.append({(c, tuple(e[i] for i in perm)): a for (c, e), a in g.items()})
    vecs = eng.basis(raw, rank_one=True)
    inv = [0] * len(perm)
    for pos, i in enumerate(perm):
        inv[i] = pos
    k = len(elim)
    keep = []
    for v in vecs:
        if all(not any(e[:k]) for (_, e) in v.t):
            keep.append(Polynomial(ctx, {tuple(e[inv[i]] for i in range(len(perm))): a for (_, e), a in v.t.items()}))
    return Submodule.ideal(ctx, keep) if keep else Submodule(ctx, [], rank=1)


def reduced_ideal_basis(I: Submodule) -> list[Polynomial]:
    """Reduced global degrevlex basis as a list of polynomials (canonical form)."""
    ctx = I.ctx.global_() if I.ctx.order.is_local else I.ctx
    J = I.with_context(ctx) if ctx is not I.ctx else I
    return [e[0] for e in J.basis().elements]


# ---------------------------------------------------------------------------
# symmetric-algebra powers
# ---------------------------------------------------------------------------


def sym_basis(p: int, n: int) -> list[tuple]:
    """Degree-n monomials in T_1..T_p, largest lex first."""
    out = []
    for combo in combinations_with_replacement(range(p), n):
        e = [0] * p
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _sym_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, fa in a.items():
        for eb, fb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            prod = fa * fb
            cur = out.get(e)
            out[e] = prod if cur is None else cur + prod
    return {e: f for e, f in out.items() if not f.is_zero()}


def power_in_sym(S: Submodule, n: int, max_rank: int = 5000) -> Submodule:
    """Degree-n piece of the Rees algebra of S inside Sym^n(O^p).

    Generators are all products of n generators of S, read as T-linear forms;
    the ambient free module has the degree-n T-monomials as basis.
    """
    if n < 1:
        raise ValueError("power must be >= 1")
    p = S.rank
    rank = math.comb(n + p - 1, p - 1)
    if rank > max_rank:
        raise SymPowerTooLarge(f"Sym^{n} of rank {p} has rank {rank} > {max_rank}")
    ctx = S.ctx
    basis = sym_basis(p, n)
    index = {e: i for i, e in enumerate(basis)}
    forms = []
    for g in S.generators:
        form = {}
        for i, c in enumerate(g.components):
            if not c.is_zero():
                e = [0] * p
                e[i] = 1
                form[tuple(e)] = c
        forms.append(form)
    gens = []
    seen = set()
    cache = {(): {(0,) * p: ctx.one()}}
    for combo in combinations_with_replacement(range(len(forms)), n):
        prod = cache.get(combo[:-1])
        if prod is None:
            prod = cache[combo[:-1]] = _sym_power_product(cache, forms, combo[:-1])
        prod = _sym_mul(prod, forms[combo[-1]])
        if n > 1:
            cache[combo] = prod
        if not prod:
            continue
        comps = [ctx.zero()] * rank
        for e, f in prod.items():
            comps[index[e]] = f
        el = FreeElement(ctx, comps)
        key = el.components
        if key in seen:
            continue
        seen.add(key)
        gens.append(el)
    return Submodule(ctx, gens, rank=rank)


def _sym_power_product(cache, forms, combo):
    if combo in cache:
        return cache[combo]
    prev = _sym_power_product(cache, forms, combo[:-1])
    cache[combo] = _sym_mul(prev, forms[combo[-1]])
    return cache[combo]
