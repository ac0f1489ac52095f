"""Singularity-theoretic invariants of hypersurfaces, map germs and ICIS."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .gb import (
    INFINITE,
    FreeElement,
    Submodule,
    colength,
    determinant,
    eliminate,
    minors,
    reduced_ideal_basis,
    saturate,
)
from .gb.engine import Engine
from .mult import (
    DEFAULT_NMAX,
    MultiplicityError,
    NotContained,
    as_local,
    buchsbaum_rim,
    module_length,
    pair_multiplicity,
)
from .polar import _drop_params, evaluate_point, translate_module
from .symcore import GenericScalarStream, MonomialOrder, Polynomial, RingContext, differentiate


class GermError(MultiplicityError):
    kind = "GermError"


class NotCritical(GermError):
    kind = "NotCritical"


class NotICIS(GermError):
    kind = "NotICIS"


class NotIsolated(GermError):
    kind = "NotIsolated"


class NotFinite(GermError):
    kind = "NotFinite"


class NotCorank1(GermError):
    kind = "NotCorank1"


class IncompletePointList(GermError):
    kind = "IncompletePointList"


# ---------------------------------------------------------------------------
# Jacobian modules
# ---------------------------------------------------------------------------


def jacobian_module(F: Sequence[Polynomial], f: Polynomial | None = None, relative_to: str = "all",
                    ctx: RingContext | None = None) -> Submodule:
    """Module generated by the columns of D(F; f): Jacobian of F with the gradient of f as last row.

    ``relative_to`` selects the columns: ``all`` variables, ``r_k`` the space
    variables (partials along the fibers), ``r_n`` the parameter variables.
    """
    rows_src = list(F) + ([f] if f is not None else [])
    if not rows_src:
        raise ValueError("jacobian_module needs F or f")
    ctx = ctx or rows_src[0].ctx
    if relative_to == "all":
        vars_ = ctx.vars
    elif relative_to == "r_k":
        vars_ = ctx.space_vars
    elif relative_to == "r_n":
        vars_ = ctx.param_vars
    else:
        raise ValueError(f"relative_to must be all, r_k or r_n, not {relative_to!r}")
    if not vars_:
        raise ValueError("empty column selection")
    rows = [[ctx._import(differentiate(g, v)) for v in vars_] for g in rows_src]
    return Submodule.from_matrix(ctx, rows)


def jacobian_ideal(f: Polynomial, ctx: RingContext | None = None, vars_: Sequence[str] | None = None) -> Submodule:
    ctx = ctx or f.ctx
    vars_ = vars_ or ctx.vars
    return Submodule.ideal(ctx, [ctx._import(differentiate(f, v)) for v in vars_])


# ---------------------------------------------------------------------------
# j(f) and the Pellikaan census
# ---------------------------------------------------------------------------


def j_invariant(f: Polynomial, I: Submodule) -> int:
    """dim I/J(f) in the local ring at the origin."""
    loc = I.ctx.local()
    Il = I.with_context(loc)
    J = jacobian_ideal(loc._import(f), loc)
    if not Il.contains_module(J):
        raise NotContained("J(f) is not contained in I")
    n = module_length(Il, J)
    if n == INFINITE:
        raise MultiplicityError("I/J(f) has infinite length")
    return n


@dataclass
class SingularPointClass:
    point: dict
    cls: str
    local_j: int | None
    hessian_rank: int | None

    def as_dict(self):
        return {"point": self.point, "class": self.cls, "local_j": self.local_j,
                "hessian_rank": self.hessian_rank}


def _rank(mat, field) -> int:
    m = [list(r) for r in mat]
    rank = 0
    rows, cols = len(m), len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = field.inv(m[rank][c])
        for r in range(rows):
            if r != rank and m[r][c]:
                fac = m[r][c] * inv
                m[r] = [a - fac * b for a, b in zip(m[r], m[rank])]
                if field.p:
                    m[r] = [a % field.p for a in m[r]]
        rank += 1
    return rank


def classify_singular_point(f: Polynomial, sigma: Submodule, point: Mapping[str, object]) -> SingularPointClass:
    """A_1 off the singular curve (nondegenerate Hessian); A_inf / D_inf on it by local j = 0 / 1."""
    ctx = f.ctx
    F = ctx.field
    pt = {v: F(point.get(v, 0)) for v in ctx.vars}
    g = f.translate(pt)
    grads = [differentiate(g, v) for v in ctx.vars]
    if any(not d.constant_coeff() == 0 for d in grads):
        raise NotCritical(f"point {point} is not a critical point")
    hess = [[differentiate(differentiate(g, a), b).constant_coeff() for b in ctx.vars] for a in ctx.vars]
    hrank = _rank(hess, F)
    sig = translate_module(sigma.with_context(ctx), pt)
    shown = {v: F.fmt(c) for v, c in pt.items()}
    on_sigma = all(gen[0].constant_coeff() == 0 for gen in sig.generators)
    if not on_sigma:
        cls = "A_1" if hrank == ctx.nvars else "other"
        return SingularPointClass(shown, cls, None, hrank)
    try:
        j = j_invariant(g, sig)
    except (NotContained, MultiplicityError):
        return SingularPointClass(shown, "other", None, hrank)
    cls = {0: "A_infinity", 1: "D_infinity"}.get(j, "other")
    return SingularPointClass(shown, cls, j, hrank)


@dataclass
class PellikaanReport:
    j: int
    e_pair: int
    t0: str
    points: list
    counts: dict
    global_length: int
    checks: dict

    @property
    def holds(self) -> bool:
        return all(self.checks.values())


def _fiber_poly(f: Polynomial, fib: RingContext, values) -> Polynomial:
    return _drop_params(f.evaluate(values), fib)


def pellikaan_report(f: Polynomial, I: Submodule, family_f: Polynomial, sigma_family: Submodule,
                     points: Sequence, stream: GenericScalarStream, n_max: int = 4,
                     method: str = "preimage") -> PellikaanReport:
    """j(f), e(J(f), I), and the A_1 / D_inf census of a generic member of a deformation of f.

    ``family_f`` and ``sigma_family`` live in a ring whose single parameter is
    the deformation parameter; ``f`` and ``I`` may use the same ring (without
    the parameter) or the fiber ring.
    """
    fam_ctx = family_f.ctx
    if len(fam_ctx.param_vars) > 1:
        raise GermError("pellikaan_report supports one deformation parameter")
    fib = RingContext(fam_ctx.space_vars, (), fam_ctx.field, "local_degrevlex")
    zero = {v: 0 for v in fam_ctx.param_vars}
    f0 = _fiber_poly(f, fib, zero) if f.ctx.param_vars else fib._import(f)
    I0 = Submodule.ideal(fib, [(_fiber_poly(g, fib, zero) if I.ctx.param_vars else fib._import(g))
                               for g in I.polys()])
    I2 = Submodule.ideal(fib, [a * b for a in I0.polys() for b in I0.polys()])
    if not I2.contains(f0):
        raise NotContained("f is not in I^2")
    j = j_invariant(f0, I0)
    J0 = jacobian_ideal(f0, fib)
    e = pair_multiplicity(J0, I0, n_max, method=method).value

    F = fam_ctx.field
    if fam_ctx.param_vars:
        tv = fam_ctx.param_vars[0]
        t0 = stream.draw(F, 1)[0]
        vals = {tv: t0}
    else:
        t0, vals = F(0), {}
    glob = fib.global_()
    ft = _fiber_poly(family_f, glob, vals)
    sig_t = Submodule.ideal(glob, [_fiber_poly(g, glob, vals) for g in sigma_family.polys()])
    Jt = jacobian_ideal(ft, glob)
    if not sig_t.contains_module(Jt):
        raise NotContained("J(f_t) is not contained in the deformed singular ideal")
    global_len = module_length(sig_t, Jt)
    if global_len == INFINITE:
        raise IncompletePointList("I_t/J(f_t) has infinite length: the generic fiber has non-isolated support")
    classes = []
    local_total = 0
    for pt in points:
        coords = evaluate_point(fam_ctx, pt, vals)
        cls = classify_singular_point(ft, sig_t, coords)
        classes.append(cls)
        sig_p = translate_module(sig_t, coords).with_context(fib)
        J_p = Submodule.ideal(fib, [g.translate(coords) for g in Jt.polys()])
        local_total += module_length(sig_p, J_p)
    if local_total != global_len:
        raise IncompletePointList(f"declared points carry length {local_total} of {global_len}")
    counts = {"A_1": 0, "D_infinity": 0, "A_infinity": 0, "other": 0}
    for c in classes:
        counts[c.cls] += 1
    checks = {"j_equals_e": j == e, "e_equals_census": e == counts["D_infinity"] + counts["A_1"]}
    return PellikaanReport(j, e, F.fmt(t0), [c.as_dict() for c in classes], counts, global_len, checks)


# ---------------------------------------------------------------------------
# map germs C^2 -> C^3
# ---------------------------------------------------------------------------


class MapGerm:
    """Polynomial map germ from a source ring to the space variables of ``target``."""

    def __init__(self, source: RingContext, target: RingContext, components: Sequence):
        self.source = source
        self.target = target
        self.components = [source._import(c) for c in components]
        if len(self.components) != len(target.space_vars):
            raise ValueError("one component per target variable expected")
        self.source_vars = source.space_vars
        self.target_vars = target.space_vars

    @classmethod
    def from_strings(cls, source_vars: Sequence[str], target: RingContext, comps: Sequence[str],
                     params: Sequence[str] = ()) -> "MapGerm":
        src = RingContext(source_vars, params, target.field)
        return cls(src, target, [src.parse(c) for c in comps])

    @property
    def corank1_witness(self) -> str:
        return self.source_vars[-1]

    def specialize(self, values: Mapping[str, object]) -> "MapGerm":
        """Substitute constants for parameters occurring in the components (source ring params)."""
        src = RingContext(self.source.space_vars, (), self.source.field)
        comps = [_drop_params(c.evaluate(values), src) for c in self.components]
        tgt = RingContext(self.target.space_vars, (), self.target.field, self.target.order)
        return MapGerm(src, tgt, comps)

    def pullback(self, g: Polynomial) -> Polynomial:
        images = {v: c for v, c in zip(self.target_vars, self.components)}
        for v in g.ctx.param_vars:
            images[v] = self.source.var(v) if v in self.source.vars else None
        return self.source.map_poly(g, images)

    def __repr__(self):
        return f"MapGerm({', '.join(str(c) for c in self.components)})"


@dataclass
class Presentation:
    matrix: list
    image_eq: Polynomial
    F0: Submodule
    F1: Submodule
    multiplicity: int
    image_by_elimination: Submodule | None = None
    image_agrees: bool | None = None


def pushforward_presentation(G: MapGerm, check_image: bool = True) -> Presentation:
    """Presentation of O_source over O_target for a corank-1 germ (u, p(u,v), q(u,v)).

    With basis 1, v, ..., v^(m-1) over the first two target coordinates, the
    matrix is z*Id - A where A is multiplication by the last component; F0 is
    its determinant (the image equation) and F1 the ideal of (m-1)-minors.
    """
    if len(G.source_vars) != 2 or len(G.target_vars) != 3:
        raise GermError("pushforward_presentation handles germs C^2 -> C^3")
    u, v = G.source_vars
    X1, X2, X3 = G.target_vars
    if G.components[0] != G.source.var(u):
        raise NotCorank1("first component must equal the first source variable")
    F = G.target.field
    names = (X3, u, v, X1, X2)
    big = RingContext(names, (), F, "global_lex")
    emb = {w: big.var(w) for w in (u, v)}
    graph = [big.var(t) - big.map_poly(c, emb) for t, c in zip(G.target_vars, G.components)]
    eng = Engine(F, MonomialOrder("global_lex"))
    raw = [{(0, e): a for e, a in g.terms.items()} for g in graph]
    B = eng.basis(raw, rank_one=True)
    iv = big.index(v)
    m = None
    for vec in B:
        e = vec.lm[1]
        if e[iv] and sum(e) == e[iv]:
            m = e[iv] if m is None else min(m, e[iv])
    if m is None:
        raise NotFinite("no pure power of the source variable v in the graph ideal")
    ix1, ix2, ix3, iu = big.index(X1), big.index(X2), big.index(X3), big.index(u)
    tgt = G.target
    A = [[tgt.zero() for _ in range(m)] for _ in range(m)]   # A[k][i]: coeff of v^k in X3*v^i
    for i in range(m):
        h = eng.vec({(0, tuple(1 if j == ix3 else (i if j == iv else 0) for j in range(5))): F.one})
        r = eng.full_reduce(h, B)
        for (_, e), a in r.t.items():
            if e[ix3] or e[iu] or e[iv] >= m:
                raise NotFinite("normal form leaves the free basis 1..v^(m-1)")
            mono = [0] * tgt.nvars
            mono[tgt.index(X1)] = e[ix1]
            mono[tgt.index(X2)] = e[ix2]
            A[e[iv]][i] = A[e[iv]][i] + tgt.monomial(mono, a)
    z = tgt.var(X3)
    P = [[(z if k == i else tgt.zero()) - A[k][i] for i in range(m)] for k in range(m)]
    det = determinant(P)
    F0 = Submodule.ideal(tgt, [det])
    F1 = Submodule.ideal(tgt, [tgt.one()]) if m == 1 else minors(P, m - 1, tgt)
    pres = Presentation(P, det, F0, F1, m)
    if check_image:
        extra = tuple(w for w in tgt.param_vars if w not in (u, v))
        gctx = RingContext(G.target_vars, (u, v) + extra, F)
        gemb = {w: gctx.var(w) for w in (u, v)}
        gI = Submodule.ideal(gctx, [gctx.var(t) - gctx.map_poly(c, gemb) for t, c in zip(G.target_vars, G.components)])
        img = eliminate(gI, [u, v])
        img_t = Submodule.ideal(tgt.global_(), [_drop_params(g, tgt.global_()) for g in img.polys()])
        pres.image_by_elimination = img_t
        pres.image_agrees = img_t.equals(F0.with_context(tgt.global_()))
    return pres


@dataclass
class DisentanglementReport:
    image_eq: Polynomial
    conductor: Submodule
    C_P: Submodule
    e_pair: int
    dim_C_over_CP: int
    dim_C_over_Jf: int
    dim_C_over_Jf_pullback: int
    mu_F: int
    identity_checks: dict
    oracle: dict = field(default_factory=dict)


def _ideal_in(ctx: RingContext, polys) -> Submodule:
    return Submodule.ideal(ctx, [ctx._import(p) for p in polys])


def stabilization_census(G_s: MapGerm, stream: GenericScalarStream) -> dict:
    """Counts of cross caps and Morse points of a one-parameter stabilisation at a drawn parameter value.

    Cross caps are the points where the germ is not an immersion; Morse points
    are critical points of the image equation off its zero level.
    """
    params = G_s.source.param_vars
    F = G_s.target.field
    vals = {p: stream.draw(F, 1)[0] for p in params}
    Gs = G_s.specialize(vals)
    src = Gs.source
    jac = [[differentiate(c, w) for w in src.vars] for c in Gs.components]
    umbrellas = colength(minors(jac, 2, src))
    pres = pushforward_presentation(Gs, check_image=False)
    tgt = Gs.target.global_()
    fs = tgt._import(pres.image_eq)
    crit = jacobian_ideal(fs, tgt)
    morse = colength(saturate(crit, Submodule.ideal(tgt, [fs])))
    return {"params": {p: F.fmt(c) for p, c in vals.items()}, "D_infinity": umbrellas, "A_1": morse}


def disentanglement_report(G: MapGerm, stream: GenericScalarStream, n_max: int = 4,
                           stabilization: MapGerm | None = None, method: str = "preimage",
                           retries: int = 4) -> DisentanglementReport:
    """Conductor, C_P, e(J(f), C) and the disentanglement count mu(F) of a corank-1 germ C^2 -> C^3."""
    if G.source.param_vars:
        idx = [G.source.index(p) for p in G.source.param_vars]
        if any(e[i] for c in G.components for e in c.terms for i in idx):
            raise GermError("germ components depend on parameters; specialize first")
        G = G.specialize({})
    elif G.target.param_vars:
        plain = RingContext(G.target.space_vars, (), G.target.field, G.target.order)
        G = MapGerm(G.source, plain, G.components)
    pres = pushforward_presentation(G)
    tgt = G.target
    loc = tgt.local()
    f = loc._import(pres.image_eq)
    C = _ideal_in(loc, pres.F1.polys())
    J = jacobian_ideal(f, loc)
    if not C.contains_module(J):
        raise NotContained("J(f) is not contained in the conductor")
    gens = C.polys()
    F = tgt.field
    if len(gens) <= 3:
        CP = C
        draws = None
    else:
        CP = None
        for attempt in range(retries):
            s = stream if attempt == 0 else stream.spawn(attempt)
            coeffs = [s.draw(F, len(gens)) for _ in range(3)]
            cand = _ideal_in(loc, [sum((loc.const(c) * g for c, g in zip(row, gens)), loc.zero()) for row in coeffs])
            if module_length(C, cand) != INFINITE:
                CP, draws = cand, coeffs
                break
        if CP is None:
            raise GermError("no generic C_P with finite colength in C")
    e = pair_multiplicity(J, C, n_max, method=method).value
    dim_cp = module_length(C, CP)
    dim_cj = module_length(C, J)
    src = G.source.local()
    Cpb = _ideal_in(src, [G.pullback(tgt._import(g)) for g in pres.F1.polys()])
    Jpb = _ideal_in(src, [G.pullback(tgt._import(g)) for g in J.polys()])
    dim_pb = module_length(Cpb, Jpb)
    mu = e + dim_cp - dim_pb
    checks = {
        "cp_is_reduction": True if CP is C else None,
        "pair_plus_index": e + dim_cp == dim_cj,
        "image_by_elimination": pres.image_agrees,
    }
    oracle = {}
    if stabilization is not None:
        census = stabilization_census(stabilization, stream)
        oracle = census
        checks["mu_matches_morse_count"] = census["A_1"] == mu
        checks["census_matches_dim_C_over_J"] = census["A_1"] + census["D_infinity"] == dim_cj
        checks["umbrellas_equal_pullback"] = census["D_infinity"] == dim_pb
    return DisentanglementReport(pres.image_eq, pres.F1, CP, e, dim_cp, dim_cj, dim_pb, mu, checks, oracle)


# ---------------------------------------------------------------------------
# Milnor numbers of ICIS and the 1-form index
# ---------------------------------------------------------------------------


def milnor_icis(equations: Sequence[Polynomial]) -> int:
    """Milnor number of an ICIS by the Le-Greuel recursion, each step a local colength."""
    if not equations:
        raise NotICIS("no equations")
    ctx = equations[0].ctx.free().local()
    eqs = [ctx._import(g) for g in equations]
    for g in eqs:
        if g.constant_coeff() != 0:
            raise NotICIS(f"{g} does not vanish at the origin")
    mu_prev = 0
    for k in range(1, len(eqs) + 1):
        jac = [[differentiate(g, v) for v in ctx.vars] for g in eqs[:k]]
        if k > ctx.nvars:
            raise NotICIS("more equations than variables")
        I = Submodule.ideal(ctx, eqs[:k - 1] + minors(jac, k, ctx).polys())
        c = colength(I)
        if c == INFINITE:
            raise NotICIS(f"truncation to {k} equations is not an isolated complete intersection")
        mu_prev = c - mu_prev
    return mu_prev


def _milnor_any_order(eqs: Sequence[Polynomial]) -> int:
    err = None
    orders = [list(eqs), list(reversed(eqs))]
    for o in orders:
        try:
            return milnor_icis(o)
        except NotICIS as exc:
            err = exc
    raise err


@dataclass
class OneFormIndex:
    index: int
    e_omega: int
    e_dL: int
    slice_mu: int
    d: int
    L: Polynomial
    cancellation: bool | None
    assumptions: list


def _icis_context(ctx: RingContext, eqs: Sequence[Polynomial]) -> RingContext:
    d = ctx.nvars - len(eqs)
    free = RingContext(ctx.vars, (), ctx.field, "local_degrevlex")
    if not eqs:
        return free
    return free.with_quotient([free._import(g) for g in eqs], dim_d=d).local()


def one_form_module(X_eqs: Sequence[Polynomial], omega: Sequence[Polynomial], ctx: RingContext) -> Submodule:
    """JM(X, omega): columns of the Jacobian of X with the 1-form coefficients as last row."""
    rows = [[ctx._import(differentiate(g, v)) for v in ctx.vars] for g in X_eqs]
    rows.append([ctx._import(w) for w in omega])
    return Submodule.from_matrix(ctx, rows)


def one_form_index(X_eqs: Sequence[Polynomial], omega: Sequence[Polynomial] | None, L: Polynomial | None,
                   stream: GenericScalarStream, n_max: int = DEFAULT_NMAX, ctx: RingContext | None = None,
                   omega_is_dL: bool = False) -> OneFormIndex:
    """Index of a 1-form on an ICIS: e_BR(JM(X,w)) - e_BR(JM(X,dL)) + mu(X cap L^-1(0))."""
    if ctx is None:
        src = (list(X_eqs) + list(omega or []) + ([L] if L is not None else []))
        if not src:
            raise ValueError("cannot infer the ring")
        ctx = src[0].ctx
    base = RingContext(ctx.vars, (), ctx.field)
    eqs = [base._import(g) for g in X_eqs]
    n = base.nvars
    d = n - len(eqs)
    assumptions = ["L is not a limit of tangent hyperplanes (not verified)"]
    if eqs:
        try:
            milnor_icis(eqs)
        except NotICIS:
            _milnor_any_order(eqs)
    if L is None:
        coeffs = stream.draw(base.field, n)
        L = sum((base.const(c) * base.var(v) for c, v in zip(coeffs, base.vars)), base.zero())
        assumptions.append("L drawn from the generic stream")
    L = base._import(L)
    if L.degree() != 1 or L.constant_coeff() != 0:
        raise ValueError("L must be a linear form")
    dL = [differentiate(L, v) for v in base.vars]
    if omega is None or omega_is_dL:
        omega = dL
    omega = [base._import(w) for w in omega]
    if len(omega) != n:
        raise ValueError(f"1-form needs {n} coefficients")
    X = _icis_context(base, eqs)
    M_w = one_form_module(eqs, omega, X)
    M_L = one_form_module(eqs, dL, X)
    for name, M in (("omega", M_w), ("dL", M_L)):
        if colength(M) == INFINITE:
            raise NotIsolated(f"JM(X,{name}) does not have finite colength")
    e_w = buchsbaum_rim(M_w, n_max).value
    e_L = e_w if omega == dL else buchsbaum_rim(M_L, n_max).value
    mu = _milnor_any_order(eqs + [L])
    cancel = (e_w == e_L) if omega == dL else None
    return OneFormIndex(e_w - e_L + mu, e_w, e_L, mu, d, L, cancel, assumptions)


# ---------------------------------------------------------------------------
# W_f invariants
# ---------------------------------------------------------------------------


@dataclass
class WfReport:
    samples: list
    independent: bool
    mode: str = "ICIS: free module in place of the H_{d-1} hull"


def _max_ideal_times(M: Submodule) -> Submodule:
    ctx = M.ctx
    gens = []
    for v in ctx.space_vars:
        x = ctx.var(v)
        for g in M.generators:
            gens.append(g * x)
    return Submodule(ctx, gens, rank=M.rank)


def wf_invariant(F_eqs: Sequence[Polynomial], f: Polynomial, l: Polynomial, stream: GenericScalarStream,
                 y_samples: Sequence | None = None, n_max: int = DEFAULT_NMAX) -> WfReport:
    """e_BR(m JM(F_y; f_y)) - e_BR(m JM(F_y; l)) at the origin of each sampled fiber.

    The family parameter is the single parameter variable of the ring; the
    fibers are taken at y = 0 and at a drawn generic value unless ``y_samples``
    is given.
    """
    ctx = f.ctx
    if len(ctx.param_vars) != 1:
        raise GermError("wf_invariant needs exactly one family parameter")
    yv = ctx.param_vars[0]
    F = ctx.field
    if y_samples is None:
        y_samples = [F(0), stream.draw(F, 1)[0]]
    fib_free = RingContext(ctx.space_vars, (), F)
    samples = []
    for y in y_samples:
        vals = {yv: F(y)}
        Fy = [_fiber_poly(g, fib_free, vals) for g in F_eqs]
        fy = _fiber_poly(f, fib_free, vals)
        ly = _fiber_poly(ctx._import(l), fib_free, vals)
        if Fy:
            _milnor_any_order(Fy)
        X = _icis_context(fib_free, Fy)
        vals_out = {}
        for name, g in (("f", fy), ("l", ly)):
            JM = jacobian_module(Fy, g, "all", X) if Fy else jacobian_ideal(X._import(g), X)
            if colength(JM) == INFINITE:
                raise NotIsolated(f"{name}_y has a non-isolated singularity on X_y at y={F.fmt(F(y))}")
            vals_out[name] = buchsbaum_rim(_max_ideal_times(JM), n_max).value
        samples.append({"y": F.fmt(F(y)), "e_f": vals_out["f"], "e_l": vals_out["l"],
                        "difference": vals_out["f"] - vals_out["l"]})
    independent = len({s["difference"] for s in samples}) == 1
    return WfReport(samples, independent)


# ---------------------------------------------------------------------------
# triple-point identity
# ---------------------------------------------------------------------------


def triple_point_identity(ctx: RingContext | None = None) -> tuple[list, list, bool]:
    """Reduced bases of J(xyz) and of (yz, xz, xy); they coincide."""
    ctx = ctx or RingContext(("x", "y", "z"))
    x, y, z = (ctx.var(v) for v in ctx.space_vars[:3])
    J = jacobian_ideal(x * y * z, ctx, ctx.space_vars[:3])
    C = Submodule.ideal(ctx, [y * z, x * z, x * y])
    a = [str(g) for g in reduced_ideal_basis(J)]
    b = [str(g) for g in reduced_ideal_basis(C)]
    return a, b, a == b
