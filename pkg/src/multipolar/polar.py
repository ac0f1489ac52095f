"""Polar varieties of module families and the multiplicity-polar identity check.

Only one-parameter bases are supported.  Fiber points at a generic parameter
value must be declared by the caller; completeness is verified by comparing
the global length of N(y)/M(y) with the sum of local lengths at those points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .gb import INFINITE, Submodule, colength, is_unit_ideal, minors, saturate
from .mult import (
    DEFAULT_NMAX,
    InfiniteLength,
    MultiplicityError,
    module_length,
    pair_multiplicity,
    stabilize,
)
from .gb.ops import power_in_sym
from .symcore import GenericScalarStream, Polynomial, RingContext


class NotFiniteOverBase(MultiplicityError):
    kind = "NotFiniteOverBase"


class FiberPointDiscovery(MultiplicityError):
    kind = "FiberPointDiscovery"


class Unsupported(MultiplicityError):
    kind = "Unsupported"


@dataclass
class FamilySpec:
    """M in N over a base given by the parameter variables of ``ctx``.

    ``points`` lists the fiber points over a generic parameter value that
    specialize to the origin; coordinates may be polynomials in the parameter.
    """

    ctx: RingContext
    M: Submodule
    N: Submodule
    points: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)

    def __post_init__(self):
        if not self.ctx.param_vars:
            raise ValueError("a family needs at least one parameter variable")
        if self.M.rank != self.N.rank:
            raise ValueError("M and N in different free modules")


@dataclass
class PolarReport:
    k: int
    gamma_ideal: Submodule
    submersion_rows: list
    empty: bool
    reason: str = ""
    mult_over_base: int | None = None
    fiber_witness: dict = field(default_factory=dict)

    def generators(self) -> list[str]:
        from .gb import reduced_ideal_basis
        return sorted(str(g) for g in reduced_ideal_basis(self.gamma_ideal))


@dataclass
class FamilyReport:
    lhs: int
    rhs: int
    verdict: str
    e_origin: int
    e_fiber: list
    y0: object
    polar_M: PolarReport
    polar_N: PolarReport
    global_length: object
    assumptions: list


# ---------------------------------------------------------------------------
# polar ideal
# ---------------------------------------------------------------------------


def polar_ideal(M: Submodule, k: int, stream: GenericScalarStream) -> PolarReport:
    """Ideal of the codimension-k polar variety of M on the total space.

    The generator matrix is augmented by p_M-k-e+1 rows of generic constants; the
    polar is the closure of the locus where the augmented matrix has rank below
    p_M-k+1, away from the locus where M itself drops rank (saturation by the
    e x e minors).
    """
    if k < 1:
        raise ValueError("polar codimension must be >= 1")
    ctx = M.ctx.global_() if M.ctx.order.is_local else M.ctx
    M = M.with_context(ctx) if M.ctx is not ctx else M
    unit = Submodule.ideal(ctx, [ctx.one()])
    e = M.generic_rank()
    pM = len(M.generators)
    nrows = pM - k - e + 1
    if e == 0:
        return PolarReport(k, unit, [], True, "generic rank 0")
    if nrows < 1:
        return PolarReport(k, unit, [], True, f"generator count: p_M-k-e+1 = {nrows} < 1")
    F = ctx.field
    rows = [stream.draw(F, pM) for _ in range(nrows)]
    aug = [list(r) for r in M.matrix()] + [[ctx.const(c) for c in r] for r in rows]
    size = pM - k + 1
    degen = minors(aug, size, ctx)
    if not degen.generators:
        raise ValueError("augmented matrix is degenerate everywhere; polar not defined")
    rank_drop = minors(M.matrix(), e, ctx)
    gamma = saturate(degen, rank_drop)
    empty = is_unit_ideal(gamma)
    if empty:
        gamma = unit
    return PolarReport(k, gamma, rows, empty, "saturated degeneracy locus is empty" if empty else "")


# ---------------------------------------------------------------------------
# multiplicity over the base
# ---------------------------------------------------------------------------


def _base_var(ctx: RingContext) -> str:
    if len(ctx.param_vars) != 1:
        raise Unsupported(f"multiplicity over a {len(ctx.param_vars)}-dimensional base is not supported")
    return ctx.param_vars[0]


def local_degree_over_base(gamma: Submodule, n_max: int = DEFAULT_NMAX) -> int:
    """Degree at the origin of the projection of V(gamma) to the one-dimensional base.

    Computed as the Samuel multiplicity of the ideal (y) on the local ring of
    V(gamma) at the origin.
    """
    ctx = gamma.ctx
    y = ctx.var(_base_var(ctx))
    polys = [g for g in gamma.polys() if not g.is_zero()]
    loc = ctx.with_quotient(list(ctx.quotient) + polys, dim_d=0).local() \
        if polys else ctx.local()
    Y = Submodule.ideal(loc, [y])
    if colength(Y) == INFINITE:
        raise NotFiniteOverBase("polar variety has a component inside the special fiber")
    lams = [0]
    for n in range(1, n_max + 1):
        lams.append(colength(power_in_sym(Y, n)))
    return stabilize("polar_degree", lams, 1).value


def polar_mult_over_base(rep: PolarReport, fam: FamilySpec | None, stream: GenericScalarStream,
                         n_max: int = DEFAULT_NMAX) -> int:
    """mult_y of the polar over a one-dimensional base; 0 for an empty polar.

    Also records, as ``fiber_witness``, the global number of points of the polar
    over a drawn parameter value y0; it is an upper bound for the local degree
    and equals it when no point escapes the neighbourhood of the origin.
    """
    ctx = rep.gamma_ideal.ctx
    if fam is not None:
        _base_var(fam.ctx)
    if rep.empty:
        rep.mult_over_base = 0
        rep.fiber_witness = {"global_fiber_count": 0}
        return 0
    yv = _base_var(ctx)
    y0 = stream.draw(ctx.field, 1)[0]
    slice_ = Submodule.ideal(ctx, rep.gamma_ideal.polys() + [ctx.var(yv) - ctx.const(y0)])
    global_count = colength(slice_)
    if global_count == INFINITE:
        raise NotFiniteOverBase(f"polar is not finite over the base at {yv}={y0}")
    deg = local_degree_over_base(rep.gamma_ideal, n_max)
    rep.mult_over_base = deg
    rep.fiber_witness = {"y0": ctx.field.fmt(y0), "global_fiber_count": global_count,
                         "escaping_points": global_count - deg}
    return deg


# ---------------------------------------------------------------------------
# multiplicity-polar identity
# ---------------------------------------------------------------------------


def specialize(S: Submodule, values: Mapping[str, object], fiber_ctx: RingContext) -> Submodule:
    """Evaluate the parameters of S at constants and move the result into ``fiber_ctx``."""
    gens = []
    for g in S.generators:
        comps = []
        for c in g.components:
            ev = c.evaluate(values)
            comps.append(_drop_params(ev, fiber_ctx))
        gens.append(comps)
    return Submodule(fiber_ctx, gens, rank=S.rank)


def _drop_params(f: Polynomial, fiber_ctx: RingContext) -> Polynomial:
    src = f.ctx
    idx = [src.index(v) for v in fiber_ctx.vars]
    out = {}
    for e, c in f.terms.items():
        out[tuple(e[i] for i in idx)] = c
    return Polynomial(fiber_ctx, out)


def translate_module(S: Submodule, point: Mapping[str, object]) -> Submodule:
    ctx = S.ctx
    return Submodule(ctx, [[c.translate(point) for c in g.components] for g in S.generators], rank=S.rank)


def fiber_context(ctx: RingContext) -> RingContext:
    fib = RingContext(ctx.space_vars, (), ctx.field, "local_degrevlex")
    if ctx.quotient:
        raise Unsupported("families over a singular total space are passed as fiber quotients")
    return fib


def evaluate_point(ctx: RingContext, point, values: Mapping[str, object]) -> dict:
    """Point coordinates (constants or polynomials in the parameters) at a parameter value."""
    out = {}
    items = point.items() if isinstance(point, Mapping) else zip(ctx.space_vars, point)
    for v, c in items:
        if isinstance(c, Polynomial):
            ev = c.evaluate(values)
            if not ev.is_constant():
                raise ValueError(f"point coordinate {c} does not specialise to a constant")
            out[v] = ev.constant_coeff()
        else:
            out[v] = ctx.field(c)
    return out


def multiplicity_polar_check(fam: FamilySpec, stream: GenericScalarStream, n_max: int = DEFAULT_NMAX,
                             method: str = "preimage") -> FamilyReport:
    """Both sides of  e(M(0),N(0)) - sum_x e(M(y),N(y),x) = mult_y G_d(M) - mult_y G_d(N)."""
    ctx = fam.ctx
    yv = _base_var(ctx)
    fib = fiber_context(ctx)
    d = fib.ring_dim
    F = ctx.field

    M0 = specialize(fam.M, {yv: 0}, fib)
    N0 = specialize(fam.N, {yv: 0}, fib)
    e0 = pair_multiplicity(M0, N0, n_max, method=method).value

    y0 = stream.draw(F, 1)[0]
    My = specialize(fam.M, {yv: y0}, fib.global_())
    Ny = specialize(fam.N, {yv: y0}, fib.global_())
    global_len = module_length(Ny, My)
    e_fiber = []
    local_sum = 0
    for pt in fam.points:
        coords = evaluate_point(ctx, pt, {yv: y0})
        Mp = translate_module(My, coords).with_context(fib)
        Np = translate_module(Ny, coords).with_context(fib)
        local_sum += module_length(Np, Mp)
        try:
            ep = pair_multiplicity(Mp, Np, n_max, method=method).value
        except InfiniteLength as exc:
            raise FiberPointDiscovery(f"declared point {coords} is not an isolated support point: {exc}")
        e_fiber.append({"point": {k: F.fmt(v) for k, v in coords.items()}, "e": ep})
    if global_len == INFINITE:
        raise FiberPointDiscovery(f"N(y)/M(y) has infinite global length at {yv}={F.fmt(y0)}")
    if global_len != local_sum:
        raise FiberPointDiscovery(f"declared fiber points account for length {local_sum} of {global_len}")
    lhs = e0 - sum(x["e"] for x in e_fiber)

    pol_M = polar_ideal(fam.M, d, stream)
    pol_N = polar_ideal(fam.N, d, stream)
    mM = polar_mult_over_base(pol_M, fam, stream, n_max)
    mN = polar_mult_over_base(pol_N, fam, stream, n_max)
    rhs = mM - mN
    return FamilyReport(lhs, rhs, "equal" if lhs == rhs else "unequal", e0, e_fiber, F.fmt(y0), pol_M, pol_N,
                        global_len, list(fam.assumptions))
