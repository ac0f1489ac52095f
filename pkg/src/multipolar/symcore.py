"""Exact arithmetic: coefficient fields, monomial orders, sparse polynomials.

Coefficients live in QQ (``gmpy2.mpq``) or in a prime field F_p (plain ints in
``[0, p)``).  Exponent vectors are plain tuples; a :class:`Monomial` wrapper is
only used at API boundaries.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import gmpy2

_MASK64 = 0xFFFF_FFFF_FFFF_FFFF


class ContextError(ValueError):
    """Raised when objects from different rings are combined."""


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


class Field:
    """A coefficient field, either QQ (``p == 0``) or F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p:
            if p < 2 or p >= 2**31 or not gmpy2.is_prime(p):
                raise ValueError(f"characteristic must be a prime below 2^31, got {p}")
        self.p = p

    @property
    def tag(self) -> str:
        return f"FP:{self.p}" if self.p else "QQ"

    @classmethod
    def from_tag(cls, tag: str) -> "Field":
        tag = tag.strip().upper()
        if tag in ("QQ", "Q"):
            return cls(0)
        m = re.fullmatch(r"(?:FP|GF|F)[:_]?(\d+)", tag)
        if not m:
            raise ValueError(f"unknown field {tag!r}")
        return cls(int(m.group(1)))

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.tag})"

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction, mpq, or ``"a/b"`` string) into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        p = self.p
        if not p:
            if isinstance(x, Fraction):
                return gmpy2.mpq(x.numerator, x.denominator)
            return gmpy2.mpq(x)
        if isinstance(x, (Fraction, type(gmpy2.mpq()))):
            num, den = int(x.numerator), int(x.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
            return num * pow(den, -1, p) % p
        return int(x) % p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, a):
        if self.p:
            return pow(int(a), -1, self.p)
        return 1 / a

    def fmt(self, c) -> str:
        if self.p:
            return str(int(c))
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"


QQ = Field(0)


# ---------------------------------------------------------------------------
# monomials and orders
# ---------------------------------------------------------------------------


class Monomial(tuple):
    """Exponent vector with its total degree cached."""

    def __new__(cls, exponents: Iterable[int]):
        obj = super().__new__(cls, tuple(int(e) for e in exponents))
        if any(e < 0 for e in obj):
            raise ValueError("exponents must be non-negative")
        obj.total_degree = sum(obj)
        return obj

    @property
    def exponents(self) -> tuple:
        return tuple(self)

    def __mul__(self, other):
        return Monomial(a + b for a, b in zip(self, other))

    def divides(self, other) -> bool:
        return all(a <= b for a, b in zip(self, other))


def _revlex(e):
    return tuple(-x for x in reversed(e))


ORDER_KINDS = ("global_degrevlex", "global_lex", "weighted", "local_degrevlex", "elimination_block")


class MonomialOrder:
    """A multiplicative total order on exponent vectors, extended to free modules.

    ``key(e)`` maps an exponent tuple to a tuple that compares like the order
    (larger key means larger monomial).  ``term_key(c, e)`` does the same for the
    module term ``x^e * gen_c``; generator 0 is the largest component.
    """

    def __init__(self, kind: str = "global_degrevlex", *, split: int = 0, weights: Sequence[int] = (),
                 module: str = "pot"):
        if kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        if module not in ("pot", "top"):
            raise ValueError("module extension must be 'pot' or 'top'")
        self.kind = kind
        self.split = int(split)
        self.weights = tuple(int(w) for w in weights)
        self.module = module
        if kind == "weighted" and (not self.weights or any(w <= 0 for w in self.weights)):
            raise ValueError("weighted order needs positive weights")
        self.key = self._make_key()
        if module == "pot":
            k = self.key
            self.term_key = lambda c, e: (-c, k(e))
        else:
            k = self.key
            self.term_key = lambda c, e: (k(e), -c)

    def _make_key(self):
        kind = self.kind
        if kind == "global_degrevlex":
            return lambda e: (sum(e), *_revlex(e))
        if kind == "global_lex":
            return lambda e: e
        if kind == "local_degrevlex":
            return lambda e: (-sum(e), *_revlex(e))
        if kind == "weighted":
            w = self.weights
            return lambda e: (sum(a * b for a, b in zip(w, e)), *_revlex(e))
        s = self.split
        return lambda e: (sum(e[:s]), *_revlex(e[:s]), sum(e[s:]), *_revlex(e[s:]))

    @property
    def is_local(self) -> bool:
        return self.kind == "local_degrevlex"

    @property
    def is_degree_compatible(self) -> bool:
        return self.kind in ("global_degrevlex", "weighted")

    def with_module(self, module: str) -> "MonomialOrder":
        return MonomialOrder(self.kind, split=self.split, weights=self.weights, module=module)

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind and self.split == other.split
                and self.weights == other.weights and self.module == other.module)

    def __hash__(self):
        return hash((self.kind, self.split, self.weights, self.module))

    def __repr__(self):
        extra = f", split={self.split}" if self.kind == "elimination_block" else ""
        return f"MonomialOrder({self.kind!r}{extra}, module={self.module!r})"


LT, EQ, GT = -1, 0, 1


def monomial_compare(a, b, order: MonomialOrder) -> int:
    """Three-way comparison of two exponent vectors; returns LT, EQ or GT."""
    if len(a) != len(b):
        raise ContextError(f"variable count mismatch: {len(a)} vs {len(b)}")
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# ring context
# ---------------------------------------------------------------------------


class RingContext:
    """Polynomial ring over a field, variables ordered params first, then space.

    ``quotient`` holds the equations of X; ``dim_d`` the fiber dimension of X.
    """

    def __init__(self, space_vars: Sequence[str], param_vars: Sequence[str] = (), field: Field = QQ,
                 order: MonomialOrder | str = "global_degrevlex", quotient: Sequence = (),
                 dim_d: int | None = None):
        self.space_vars = tuple(space_vars)
        self.param_vars = tuple(param_vars)
        self.vars = self.param_vars + self.space_vars
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"variable names must be distinct: {self.vars}")
        for v in self.vars:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"bad variable name {v!r}")
        self.field = field
        self.order = MonomialOrder(order) if isinstance(order, str) else order
        self.nvars = len(self.vars)
        self._index = {v: i for i, v in enumerate(self.vars)}
        q = []
        for f in quotient:
            f = self._import(f)
            if f.is_zero():
                raise ValueError("quotient generators must be nonzero")
            q.append(f)
        self.quotient = tuple(q)
        if dim_d is None:
            dim_d = len(self.space_vars) if not q else None
        if dim_d is None:
            raise ValueError("dim_d must be declared for a ring with quotient equations")
        if dim_d < 0:
            raise ValueError("dim_d must be non-negative")
        if not q and dim_d != len(self.space_vars):
            raise ValueError("without quotient equations dim_d equals the number of space variables")
        self.dim_d = dim_d

    # -- derived contexts -------------------------------------------------
    def _spec(self):
        return (self.space_vars, self.param_vars, self.field, self.order)

    def __eq__(self, other):
        return isinstance(other, RingContext) and self._spec() == other._spec() and \
            self.quotient_key() == other.quotient_key()

    def __hash__(self):
        return hash((self.vars, self.field, self.order))

    def quotient_key(self):
        return tuple(sorted(tuple(sorted(f.terms.items())) for f in self.quotient))

    def same_ring(self, other: "RingContext") -> bool:
        """True when both contexts have the same polynomial ring (order/quotient may differ)."""
        return self.vars == other.vars and self.field == other.field

    def __repr__(self):
        return (f"RingContext(space={','.join(self.space_vars)}, params={','.join(self.param_vars)}, "
                f"field={self.field.tag}, order={self.order.kind}, quotient={len(self.quotient)})")

    @property
    def ring_dim(self) -> int:
        """Krull dimension of the ring (parameters count as dimensions)."""
        return self.dim_d + len(self.param_vars)

    def with_order(self, order) -> "RingContext":
        order = MonomialOrder(order) if isinstance(order, str) else order
        ctx = RingContext(self.space_vars, self.param_vars, self.field, order, (), len(self.space_vars))
        return ctx._set_quotient(self.quotient, self.dim_d)

    def local(self) -> "RingContext":
        return self.with_order(MonomialOrder("local_degrevlex", module=self.order.module))

    def global_(self) -> "RingContext":
        return self.with_order(MonomialOrder("global_degrevlex", module=self.order.module))

    def with_quotient(self, quotient: Sequence, dim_d: int | None = None) -> "RingContext":
        ctx = RingContext(self.space_vars, self.param_vars, self.field, self.order)
        qs = [ctx._import(f) for f in quotient]
        if dim_d is None:
            if qs:
                raise ValueError("dim_d must be declared for a ring with quotient equations")
            dim_d = len(self.space_vars)
        return ctx._set_quotient(qs, dim_d)

    def _set_quotient(self, quotient, dim_d):
        q = tuple(Polynomial(self, f.terms) for f in quotient)
        if any(f.is_zero() for f in q):
            raise ValueError("quotient generators must be nonzero")
        self.quotient = q
        self.dim_d = dim_d
        return self

    def free(self) -> "RingContext":
        """Same ring and order without the quotient equations."""
        return RingContext(self.space_vars, self.param_vars, self.field, self.order)

    def fiber(self) -> "RingContext":
        """Context of a single fiber: parameters dropped, space variables kept."""
        ctx = RingContext(self.space_vars, (), self.field, self.order)
        return ctx

    def extended(self, new_vars: Sequence[str], order=None, front: bool = True) -> "RingContext":
        """A larger free ring (no quotient), new variables placed first as params or appended as space."""
        order = order or self.order
        if front:
            return RingContext(self.space_vars, tuple(new_vars) + self.param_vars, self.field, order)
        return RingContext(self.space_vars + tuple(new_vars), self.param_vars, self.field, order)

    # -- element construction ------------------------------------------------
    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.var(v) for v in self.vars]

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def monomial(self, exps, coeff=1) -> "Polynomial":
        c = self.field(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(self, text)

    def __call__(self, x) -> "Polynomial":
        return self._import(x)

    def _import(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ctx is self:
                return x
            if not x.ctx.same_ring(self):
                raise ContextError(f"polynomial from {x.ctx!r} used in {self!r}")
            return Polynomial(self, x.terms)
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)

    def map_poly(self, f: "Polynomial", images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute ``images[v]`` (polynomials of this context) for each variable v of ``f``'s ring."""
        src = f.ctx
        imgs = []
        for v in src.vars:
            img = images.get(v)
            if img is None:
                img = self.var(v) if v in self._index else None
            if img is None:
                raise ContextError(f"no image for variable {v!r}")
            imgs.append(self._import(img))
        out = self.zero()
        cache: dict = {}
        for e, c in f.terms.items():
            t = self.const(self.field(c) if self.field.p else c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = imgs[i] ** k
                    t = t * cache[key]
            out = out + t
        return out


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Sparse polynomial: dict exponent-tuple -> nonzero coefficient."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: RingContext, terms: Mapping | None = None):
        self.ctx = ctx
        n = ctx.nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise ContextError(f"monomial {e} has {len(e)} exponents, ring has {n} variables")
                if c:
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    # -- basics -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ctx is not self.ctx and not other.ctx.same_ring(self.ctx):
                raise ContextError("polynomials from different rings")
            return other
        return self.ctx.const(other)

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        p = self.ctx.field.p
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if p:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.field.p
        return Polynomial(self.ctx, {e: (-c % p if p else -c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        p = self.ctx.field.p
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                out[e] = v % p if p else v
        return Polynomial(self.ctx, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ctx.field(c)
        p = self.ctx.field.p
        return Polynomial(self.ctx, {e: (v * c % p if p else v * c) for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ctx.same_ring(other.ctx) and self.terms == other.terms
        try:
            return self.terms == self.ctx.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- inspection -----------------------------------------------------------
    def sorted_terms(self, order: MonomialOrder | None = None):
        order = order or self.ctx.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder | None = None):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        order = order or self.ctx.order
        e = max(self.terms, key=order.key)
        return Monomial(e), self.terms[e]

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def order_at_origin(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coeff(self):
        return self.terms.get((0,) * self.ctx.nvars, self.ctx.field.zero)

    def variables(self) -> set:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return {self.ctx.vars[i] for i in used}

    def evaluate(self, point: Mapping[str, object]) -> "Polynomial":
        """Substitute field constants for some variables; returns a polynomial of the same ring."""
        F = self.ctx.field
        vals = {self.ctx.index(v): F(c) for v, c in point.items()}
        p = F.p
        out: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, val in vals.items():
                k = e2[i]
                if k:
                    c = c * (val ** k)
                    if p:
                        c %= p
                    e2[i] = 0
            e2 = tuple(e2)
            v = out.get(e2)
            v = c if v is None else v + c
            out[e2] = v % p if p else v
        return Polynomial(self.ctx, out)

    def translate(self, point: Mapping[str, object]) -> "Polynomial":
        """Return f(x + a): moves the point ``a`` to the origin."""
        ctx = self.ctx
        images = {v: ctx.var(v) + ctx.const(point.get(v, 0)) for v in ctx.vars}
        return ctx.map_poly(self, images)

    def to_str(self, order: MonomialOrder | None = None) -> str:
        if not self.terms:
            return "0"
        F = self.ctx.field
        names = self.ctx.vars
        parts = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            neg = False
            if not F.p and c < 0:
                neg, c = True, -c
            cs = F.fmt(c)
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def differentiate(f: Polynomial, var: str) -> Polynomial:
    """Formal partial derivative of ``f`` with respect to ``var``."""
    i = f.ctx.index(var)
    F = f.ctx.field
    p = F.p
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        if k:
            e2 = e[:i] + (k - 1,) + e[i + 1:]
            v = c * k
            if p:
                v %= p
            if v:
                out[e2] = v
    return Polynomial(f.ctx, out)


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    if not f.ctx.same_ring(g.ctx):
        raise ContextError("poly_mul: context mismatch")
    return f * g


# ---------------------------------------------------------------------------
# expression parser: + - * ^ ( ) integers, fractions a/b, variable names
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message if pos is None else f"{message} at column {pos + 1}")
        self.pos = pos


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r}", pos)
        if m.group(1):
            toks.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            toks.append(("name", m.group(2), m.start(2)))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def parse_poly(ctx: RingContext, text: str, names: Mapping[str, Polynomial] | None = None) -> Polynomial:
    """Parse a polynomial expression; ``names`` may bind extra identifiers to polynomials."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, val=None):
        nonlocal i
        t = toks[i]
        if kind and (t[0] != kind or (val is not None and t[1] != val)):
            want = val or kind
            raise ParseError(f"expected {want!r}", t[2])
        i += 1
        return t

    def expr():
        sign = 1
        t = peek()
        if t[0] == "op" and t[1] in "+-":
            take()
            sign = -1 if t[1] == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = factor()
        while True:
            t = peek()
            if t[0] == "op" and t[1] == "*":
                take()
                acc = acc * factor()
            elif t[0] == "op" and t[1] == "/":
                take()
                d = factor()
                if not d.is_constant() or d.is_zero():
                    raise ParseError("division only by nonzero constants", t[2])
                acc = acc.scale(ctx.field.inv(d.constant_coeff()))
            else:
                return acc

    def factor():
        base = atom()
        t = peek()
        if t[0] == "op" and t[1] == "^":
            take()
            nt = take("num")
            return base ** nt[1]
        return base

    def atom():
        t = take()
        if t[0] == "num":
            return ctx.const(t[1])
        if t[0] == "name":
            if names and t[1] in names:
                return ctx._import(names[t[1]])
            if t[1] in ctx._index:
                return ctx.var(t[1])
            raise ParseError(f"undefined name {t[1]}", t[2])
        if t[0] == "op" and t[1] == "(":
            v = expr()
            take("op", ")")
            return v
        if t[0] == "op" and t[1] == "-":
            return -factor()
        raise ParseError("unexpected token" if t[0] != "end" else "unexpected end of expression", t[2])

    out = expr()
    if peek()[0] != "end":
        raise ParseError("trailing input", peek()[2])
    return out


# ---------------------------------------------------------------------------
# generic scalars
# ---------------------------------------------------------------------------


class GenericScalarStream:
    """Seeded source of "generic" field constants.

    The generator is SplitMix64 (Steele, Lea, Flood 2014): a 64-bit Weyl
    sequence with increment 0x9E3779B97F4A7C15 followed by the two
    xor-shift-multiply rounds below.  Each draw is ``1 + (x mod 65536)``, so
    sequences are identical on every platform for the same seed.
    """

    GAMMA = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB
    RANGE = 65536

    def __init__(self, seed: int = 0):
        if not 0 <= int(seed) <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self._state = self.seed
        self.draw_log: list[int] = []

    def _next64(self) -> int:
        self._state = (self._state + self.GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * self.MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * self.MIX2) & _MASK64
        return z ^ (z >> 31)

    def draw_int(self) -> int:
        v = 1 + self._next64() % self.RANGE
        self.draw_log.append(v)
        return v

    def draw(self, field: Field, count: int) -> list:
        return [field(self.draw_int()) for _ in range(count)]

    def spawn(self, salt: int) -> "GenericScalarStream":
        """Independent child stream; used for retries and per-task streams."""
        return GenericScalarStream((self.seed * 0x100000001B3 + salt * self.GAMMA + 1) & _MASK64)


def draw_generic(stream: GenericScalarStream, count: int, field: Field = QQ) -> list:
    return stream.draw(field, count)
