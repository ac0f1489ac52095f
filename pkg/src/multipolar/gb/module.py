"""Free-module elements, submodules and their (standard) bases."""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from ..symcore import ContextError, MonomialOrder, Polynomial, RingContext
from .engine import Engine, Vec


class FreeElement:
    """An element of the free module O^p, stored as a tuple of polynomials."""

    __slots__ = ("ctx", "components")

    def __init__(self, ctx: RingContext, components: Iterable):
        self.ctx = ctx
        self.components = tuple(ctx._import(c) for c in components)

    @classmethod
    def unit(cls, ctx: RingContext, rank: int, i: int) -> "FreeElement":
        return cls(ctx, [ctx.one() if j == i else ctx.zero() for j in range(rank)])

    @property
    def rank(self) -> int:
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "FreeElement") -> "FreeElement":
        return FreeElement(self.ctx, [a + b for a, b in zip(self.components, other.components, strict=True)])

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return FreeElement(self.ctx, [a - b for a, b in zip(self.components, other.components, strict=True)])

    def __neg__(self):
        return FreeElement(self.ctx, [-a for a in self.components])

    def __mul__(self, f) -> "FreeElement":
        f = self.ctx._import(f)
        return FreeElement(self.ctx, [f * a for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, FreeElement) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def to_terms(self) -> dict:
        out = {}
        for i, c in enumerate(self.components):
            for e, a in c.terms.items():
                out[(i, e)] = a
        return out

    @classmethod
    def from_terms(cls, ctx: RingContext, rank: int, terms: dict) -> "FreeElement":
        comps: list[dict] = [{} for _ in range(rank)]
        for (i, e), a in terms.items():
            comps[i][e] = a
        return cls(ctx, [Polynomial(ctx, c) for c in comps])

    def to_str(self) -> str:
        if self.rank == 1:
            return self.components[0].to_str()
        return "[" + ", ".join(c.to_str() for c in self.components) + "]"

    def __repr__(self):
        return f"FreeElement({self.to_str()})"


def _as_element(ctx: RingContext, rank: int | None, g) -> FreeElement:
    if isinstance(g, FreeElement):
        if not g.ctx.same_ring(ctx):
            raise ContextError("generator from a different ring")
        return FreeElement(ctx, g.components)
    if isinstance(g, (Polynomial, str, int)):
        return FreeElement(ctx, [g])
    return FreeElement(ctx, list(g))


class GBasis:
    """An interreduced Groebner basis (global order) or Mora standard basis (local order)."""

    def __init__(self, ctx: RingContext, rank: int, vecs: list[Vec], engine: Engine):
        self.ctx = ctx
        self.rank = rank
        self.order = engine.order
        self.flavor = "local" if engine.local else "global"
        self._vecs = vecs
        self._engine = engine

    @cached_property
    def elements(self) -> list[FreeElement]:
        return [FreeElement.from_terms(self.ctx, self.rank, v.t) for v in self._vecs]

    def leading_terms(self) -> list[tuple[int, tuple]]:
        return [v.lm for v in self._vecs]

    def __len__(self):
        return len(self._vecs)

    def canonical(self) -> tuple:
        """Hashable canonical form (exact for reduced global bases; leading terms for local ones)."""
        if self.flavor == "global":
            return tuple(tuple(sorted(v.t.items())) for v in self._vecs)
        return tuple(sorted(v.lm for v in self._vecs))

    def __eq__(self, other):
        return isinstance(other, GBasis) and self.flavor == other.flavor and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())


class Submodule:
    """Finitely generated submodule of the free module O_X^p.

    When the context has quotient equations, every basis computation also
    includes ``q * e_i`` for each equation q and unit vector e_i.
    """

    def __init__(self, ctx: RingContext, generators: Sequence, rank: int | None = None):
        gens = [_as_element(ctx, rank, g) for g in generators]
        if rank is None:
            if not gens:
                raise ValueError("rank must be given for a module without generators")
            rank = gens[0].rank
        for g in gens:
            if g.rank != rank:
                raise ValueError(f"generator of length {g.rank} in a rank-{rank} module")
        self.ctx = ctx
        self.rank = rank
        self.generators = gens
        self._basis: dict = {}
        self._generic_rank = None

    # -- constructors ---------------------------------------------------------
    @classmethod
    def ideal(cls, ctx: RingContext, polys: Sequence) -> "Submodule":
        return cls(ctx, [[f] for f in polys], rank=1)

    @classmethod
    def free(cls, ctx: RingContext, rank: int) -> "Submodule":
        return cls(ctx, [FreeElement.unit(ctx, rank, i) for i in range(rank)], rank=rank)

    @classmethod
    def from_matrix(cls, ctx: RingContext, rows: Sequence[Sequence]) -> "Submodule":
        """Columns of the matrix ``rows`` are the generators."""
        rows = [[ctx._import(a) for a in r] for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(ctx, [[r[j] for r in rows] for j in range(ncols)], rank=len(rows))

    def with_context(self, ctx: RingContext) -> "Submodule":
        return Submodule(ctx, [FreeElement(ctx, g.components) for g in self.generators], self.rank)

    # -- properties -------------------------------------------------------------
    @property
    def is_ideal(self) -> bool:
        return self.rank == 1

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def polys(self) -> list[Polynomial]:
        if self.rank != 1:
            raise ValueError("not an ideal")
        return [g[0] for g in self.generators]

    def matrix(self) -> list[list[Polynomial]]:
        """Generator matrix: rank rows, one column per generator."""
        return [[g[i] for g in self.generators] for i in range(self.rank)]

    def __repr__(self):
        gens = ", ".join(g.to_str() for g in self.generators)
        return f"Submodule(rank={self.rank}, [{gens}])"

    def _raw_generators(self) -> list[dict]:
        raw = [g.to_terms() for g in self.generators]
        for q in self.ctx.quotient:
            for i in range(self.rank):
                raw.append({(i, e): a for e, a in q.terms.items()})
        return [r for r in raw if r]

    # -- bases ------------------------------------------------------------------
    def engine(self, order: MonomialOrder | None = None) -> Engine:
        return Engine(self.ctx.field, order or self.ctx.order)

    def basis(self, order: MonomialOrder | None = None) -> GBasis:
        order = order or self.ctx.order
        if order not in self._basis:
            eng = self.engine(order)
            vecs = eng.basis(self._raw_generators(), rank_one=self.rank == 1)
            self._basis[order] = GBasis(self.ctx, self.rank, vecs, eng)
        return self._basis[order]

    def contains(self, h, order: MonomialOrder | None = None) -> bool:
        h = _as_element(self.ctx, self.rank, h)
        return normal_form(h, self.basis(order)).is_zero()

    def contains_module(self, other: "Submodule", order: MonomialOrder | None = None) -> bool:
        B = self.basis(order)
        return all(normal_form(g, B).is_zero() for g in other.generators)

    def equals(self, other: "Submodule", order: MonomialOrder | None = None) -> bool:
        return self.contains_module(other, order) and other.contains_module(self, order)

    def generic_rank(self) -> int:
        """Largest t such that some t x t minor is nonzero modulo the quotient ideal."""
        if self._generic_rank is None:
            from .ops import determinant
            ctx = self.ctx
            qbasis = Submodule.ideal(ctx.global_(), list(ctx.quotient)) if ctx.quotient else None
            mat = self.matrix()
            rank = 0
            for t in range(1, min(self.rank, len(self.generators)) + 1):
                found = False
                for rows in combinations(range(self.rank), t):
                    for cols in combinations(range(len(self.generators)), t):
                        d = determinant([[mat[r][c] for c in cols] for r in rows])
                        if d.is_zero():
                            continue
                        if qbasis is not None and qbasis.contains(d):
                            continue
                        found = True
                        break
                    if found:
                        break
                if not found:
                    break
                rank = t
            self._generic_rank = rank
        return self._generic_rank


def groebner_basis(S: Submodule) -> GBasis:
    if S.ctx.order.is_local:
        raise ValueError("groebner_basis needs a global order; use standard_basis for local orders")
    return S.basis()


def standard_basis(S: Submodule) -> GBasis:
    if not S.ctx.order.is_local:
        raise ValueError("standard_basis needs a local order")
    return S.basis()


def normal_form(h: FreeElement, B: GBasis) -> FreeElement:
    """Remainder of ``h`` modulo ``B``: fully reduced for global bases, Mora weak normal form for local ones."""
    if h.rank != B.rank:
        raise ValueError("rank mismatch")
    if not h.ctx.same_ring(B.ctx):
        raise ContextError("normal_form: context mismatch")
    eng = B._engine
    v = eng.vec(h.to_terms())
    if B.flavor == "global":
        r = eng.full_reduce(v, B._vecs)
    else:
        r = eng.mora_nf(v, B._vecs)
    return FreeElement.from_terms(B.ctx, B.rank, r.t)
