"""Buchberger (global orders) and Mora (local orders) on sparse module vectors.

A vector is a dict ``{(component, exponents): coefficient}``.  Everything here
works on those raw dicts; :mod:`multipolar.gb.module` wraps them.

Pair handling follows Gebauer-Moeller.  The product criterion is only applied
in rank one, where it is valid for every monomial order.  Pairs are selected
by the normal strategy (smallest lcm) with sugar as tie-break for
degree-compatible orders, by sugar first for lex/elimination orders, and by
lcm degree plus ecart for local orders.
"""

from __future__ import annotations

from ..symcore import Field, MonomialOrder


class BasisTooLarge(RuntimeError):
    """A safety bound on basis size or reduction steps was exceeded."""


class Vec:
    __slots__ = ("t", "lm", "lc", "deg", "ecart", "sugar")

    def __init__(self, terms: dict, tkey, sugar: int | None = None):
        self.t = terms
        self.refresh(tkey)
        if sugar is None:
            sugar = self.deg
        self.sugar = sugar

    def refresh(self, tkey, full: bool = True):
        t = self.t
        if not t:
            self.lm = None
            self.lc = None
            self.deg = -1
            self.ecart = 0
            return
        lm = max(t, key=tkey)
        self.lm = lm
        self.lc = t[lm]
        if full:
            self.deg = max(sum(ce[1]) for ce in t)
            self.ecart = self.deg - sum(lm[1])

    def __repr__(self):
        return f"Vec(lm={self.lm}, n={len(self.t)}, ecart={self.ecart})"


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class Engine:
    """Basis computations for one field and one module order."""

    def __init__(self, field: Field, order: MonomialOrder, *, max_steps: int = 2_000_000,
                 trunc: int | None = None):
        self.F = field
        self.p = field.p
        self.order = order
        tk = order.term_key
        cache: dict = {}

        def tkey(ce):
            k = cache.get(ce)
            if k is None:
                k = cache[ce] = tk(ce[0], ce[1])
            return k

        self.tkey = tkey
        self.local = order.is_local
        self.max_steps = max_steps
        self.steps = 0
        # with trunc = N every term of degree >= N is dropped: we work modulo m^N,
        # where plain reduction terminates and no ecart bookkeeping is needed
        self.trunc = trunc
        # degree and ecart are only consulted by Mora's normal form
        self._full = self.local and trunc is None

    # -- vector arithmetic ----------------------------------------------------
    def vec(self, terms: dict, sugar=None) -> Vec:
        if self.trunc is not None:
            N = self.trunc
            terms = {k: a for k, a in terms.items() if sum(k[1]) < N}
        return Vec(terms, self.tkey, sugar)

    def _axpy(self, h: dict, g: dict, shift, c):
        """h -= c * x^shift * g  (in place)."""
        p = self.p
        N = self.trunc
        if any(shift):
            ds = sum(shift)
            for (comp, e), a in g.items():
                if N is not None and sum(e) + ds >= N:
                    continue
                key = (comp, tuple([x + y for x, y in zip(e, shift)]))
                v = h.get(key)
                if v is None:
                    v = -c * a
                else:
                    v = v - c * a
                if p:
                    v %= p
                if v:
                    h[key] = v
                else:
                    del h[key]
        else:
            for key, a in g.items():
                v = h.get(key)
                if v is None:
                    v = -c * a
                else:
                    v = v - c * a
                if p:
                    v %= p
                if v:
                    h[key] = v
                else:
                    del h[key]

    def _reduce_step(self, h: Vec, g: Vec):
        """Cancel the leading term of ``h`` against ``g`` (lm(g) | lm(h))."""
        self.steps += 1
        if self.steps > self.max_steps:
            raise BasisTooLarge("reduction step bound exceeded")
        shift = tuple([x - y for x, y in zip(h.lm[1], g.lm[1])])
        c = h.lc * self.F.inv(g.lc) if self.p else h.lc / g.lc
        if self.p:
            c %= self.p
        self._axpy(h.t, g.t, shift, c)
        h.sugar = max(h.sugar, g.sugar + sum(shift))
        h.refresh(self.tkey, self._full)

    def spoly(self, f: Vec, g: Vec) -> Vec:
        comp = f.lm[0]
        L = _lcm(f.lm[1], g.lm[1])
        sf = tuple(a - b for a, b in zip(L, f.lm[1]))
        sg = tuple(a - b for a, b in zip(L, g.lm[1]))
        p = self.p
        h: dict = {}
        N = self.trunc
        dsf = sum(sf)
        # h = g.lc * x^sf f - f.lc * x^sg g
        for (c, e), a in f.t.items():
            if N is not None and sum(e) + dsf >= N:
                continue
            v = a * g.lc
            h[(c, tuple(x + y for x, y in zip(e, sf)))] = v % p if p else v
        self._axpy(h, g.t, sg, f.lc)
        return Vec(h, self.tkey, max(f.sugar + sum(sf), g.sugar + sum(sg)))

    def monic(self, v: Vec) -> Vec:
        if not v.t or v.lc == 1:
            return v
        inv = self.F.inv(v.lc)
        p = self.p
        v.t = {k: (a * inv % p if p else a * inv) for k, a in v.t.items()}
        v.refresh(self.tkey)
        return v

    # -- normal forms ---------------------------------------------------------
    def _find_reducer(self, lm, G):
        comp, e = lm
        for g in G:
            gl = g.lm
            if gl[0] == comp and _divides(gl[1], e):
                return g
        return None

    def top_reduce(self, h: Vec, G) -> Vec:
        """Global orders: reduce until the leading term is irreducible."""
        while h.t:
            g = self._find_reducer(h.lm, G)
            if g is None:
                break
            self._reduce_step(h, g)
        return h

    def full_reduce(self, h: Vec, G) -> Vec:
        """Global orders: fully reduced remainder (no term divisible by any lm(G))."""
        rem: dict = {}
        h = Vec(dict(h.t), self.tkey, h.sugar)
        while h.t:
            g = self._find_reducer(h.lm, G)
            if g is None:
                rem[h.lm] = h.lc
                del h.t[h.lm]
                h.refresh(self.tkey, self._full)
            else:
                self._reduce_step(h, g)
        return Vec(rem, self.tkey, h.sugar)

    def mora_nf(self, h: Vec, G) -> Vec:
        """Mora's weak normal form with ecart-controlled reducer set."""
        T = list(G)
        while h.t:
            comp, e = h.lm
            best = None
            for g in T:
                gl = g.lm
                if gl[0] == comp and _divides(gl[1], e):
                    if best is None or g.ecart < best.ecart:
                        best = g
                        if g.ecart == 0:
                            break
            if best is None:
                break
            if best.ecart > h.ecart:
                T.append(Vec(dict(h.t), self.tkey, h.sugar))
            self._reduce_step(h, best)
        return h

    def nf(self, h: Vec, G) -> Vec:
        return self.mora_nf(h, G) if self.local and self.trunc is None else self.top_reduce(h, G)

    # -- basis ------------------------------------------------------------------
    def _pair_key(self, lcm_ce, sugar, ecart):
        if self.local:
            return (sum(lcm_ce[1]) + ecart, sum(lcm_ce[1]), self.tkey(lcm_ce))
        if self.order.is_degree_compatible:
            return (self.tkey(lcm_ce), sugar)
        return (sugar, self.tkey(lcm_ce))

    def basis(self, gens, *, rank_one: bool = False, max_size: int = 50_000, reduce: bool = True):
        """Return a minimal (and, for global orders, reduced) basis as a list of Vec."""
        product_ok = rank_one
        G: list[Vec] = []        # active basis (Gebauer-Moeller pruned for global orders)
        everything: list[Vec] = []
        B: list = []             # pairs (f, g, lcm_e, comp)
        gens = [self.vec(dict(t)) for t in gens if t]
        gens.sort(key=lambda v: (v.deg, self.tkey(v.lm)))

        def add(h: Vec):
            nonlocal G, B
            h = self.monic(h)
            hc, he = h.lm
            C = [(g, _lcm(he, g.lm[1])) for g in G if g.lm[0] == hc]
            D = []
            for idx, (g1, l1) in enumerate(C):
                if product_ok and _coprime(he, g1.lm[1]):
                    D.append((g1, l1, True))
                    continue
                dominated = False
                for g2, l2 in C[idx + 1:]:
                    if _divides(l2, l1):
                        dominated = True
                        break
                if not dominated:
                    for g2, l2, _ in D:
                        if _divides(l2, l1):
                            dominated = True
                            break
                if not dominated:
                    D.append((g1, l1, False))
            E = [(h, g, l) for g, l, cop in D if not cop]
            keep = []
            for f, g, l, comp in B:
                if comp == hc and _divides(he, l) and _lcm(f.lm[1], he) != l and _lcm(g.lm[1], he) != l:
                    continue
                keep.append((f, g, l, comp))
            B = keep + [(f, g, l, hc) for f, g, l in E]
            if self.local and self.trunc is None:
                G.append(h)
            else:
                G = [g for g in G if not (g.lm[0] == hc and _divides(he, g.lm[1]))] + [h]
            everything.append(h)
            if len(everything) > max_size:
                raise BasisTooLarge(f"basis exceeded {max_size} elements")

        for g in gens:
            h = self.nf(g, G)
            if h.t:
                add(h)

        while B:
            best_i = 0
            best_k = None
            for i, (f, g, l, comp) in enumerate(B):
                s = max(f.sugar + sum(l) - sum(f.lm[1]), g.sugar + sum(l) - sum(g.lm[1]))
                k = self._pair_key((comp, l), s, max(f.ecart, g.ecart))
                if best_k is None or k < best_k:
                    best_k, best_i = k, i
            f, g, l, comp = B.pop(best_i)
            h = self.nf(self.spoly(f, g), G)
            if h.t:
                add(h)

        return self.minimalize(G, reduce=reduce)

    def minimalize(self, G, reduce: bool = True):
        G = sorted(G, key=lambda v: self.tkey(v.lm))
        out: list[Vec] = []
        for g in G:
            if any(h.lm[0] == g.lm[0] and _divides(h.lm[1], g.lm[1]) for h in out):
                continue
            out.append(g)
        if reduce and not self.local:
            red = []
            for i, g in enumerate(out):
                others = out[:i] + out[i + 1:]
                tail = Vec({k: v for k, v in g.t.items() if k != g.lm}, self.tkey)
                r = self.full_reduce(tail, others) if tail.t else tail
                r.t[g.lm] = g.lc
                r.refresh(self.tkey)
                red.append(self.monic(r))
            out = red
        else:
            out = [self.monic(g) for g in out]
        out.sort(key=lambda v: self.tkey(v.lm), reverse=True)
        return out
