"""Samuel, Buchsbaum-Rim and pair multiplicities from length functions.

Every multiplicity here is the stabilised top finite difference of a length
function n -> lambda(n):

* Samuel:          lambda(n) = dim O/I^n,                    degree d
* Buchsbaum-Rim:   lambda(n) = dim Sym^n(O^p)/M^n,          degree d+p-1
* pair (M in N):   lambda(n) = length N^n/M^n,              degree d+e-1

All lengths are taken in the local ring at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .gb import (
    INFINITE,
    FreeElement,
    Submodule,
    colength,
    leading_monomials,
    minors,
    power_in_sym,
    preimage_submodule,
)
from .gb.ops import count_standard_monomials
from .symcore import GenericScalarStream, RingContext

DEFAULT_NMAX = 6


class MultiplicityError(ValueError):
    kind = "MultiplicityError"


class NotStabilized(MultiplicityError):
    kind = "NotStabilized"


class InfiniteColength(MultiplicityError):
    kind = "InfiniteColength"


class InfiniteLength(MultiplicityError):
    kind = "InfiniteLength"


class RankDeficient(MultiplicityError):
    kind = "RankDeficient"


class RankMismatch(MultiplicityError):
    kind = "RankMismatch"


class NotContained(MultiplicityError):
    kind = "NotContained"


class InfiniteWitness(MultiplicityError):
    kind = "InfiniteWitness"


@dataclass
class MultiplicityResult:
    kind: str
    degree: int
    lambdas: dict            # n -> lambda(n), n = 0..n_max
    differences: list        # differences[k] = k-th finite differences of lambda
    value: int
    stabilized_at: int

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "lambda": [self.lambdas[n] for n in sorted(self.lambdas)],
            "value": self.value,
            "stabilized_at": self.stabilized_at,
        }


def difference_triangle(values: list[int]) -> list[list[int]]:
    rows = [list(values)]
    while len(rows[-1]) > 1:
        prev = rows[-1]
        rows.append([b - a for a, b in zip(prev, prev[1:])])
    return rows


def stabilize(kind: str, lambdas: list[int], degree: int) -> MultiplicityResult:
    """Read off the multiplicity as the stabilised ``degree``-th difference."""
    tri = difference_triangle(lambdas)
    if degree + 2 > len(lambdas):
        raise NotStabilized(f"{kind}: need lambda(0..n) with n >= {degree + 1}, got n_max={len(lambdas) - 1}")
    top = tri[degree]
    value = top[-1]
    if top[-2] != value:
        raise NotStabilized(f"{kind}: last two order-{degree} differences disagree ({top[-2]} vs {value}); "
                            "raise n_max")
    start = len(top) - 1
    while start > 0 and top[start - 1] == value:
        start -= 1
    if value < 0:
        raise NotStabilized(f"{kind}: negative leading difference {value}")
    return MultiplicityResult(kind, degree, dict(enumerate(lambdas)), tri, value, start)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def as_local(S: Submodule) -> Submodule:
    if S.ctx.order.is_local:
        return S
    return S.with_context(S.ctx.local())


def _dim(ctx: RingContext, dim: int | None) -> int:
    return ctx.ring_dim if dim is None else dim


def lead_difference_count(lead_big, lead_small, nvars: int):
    """#(L(N) minus L(M)) for monomial modules L(M) in L(N), given per-component minimal generators."""
    total = 0
    for A, B in zip(lead_big, lead_small):
        c = _diff(tuple(A), tuple(B), nvars)
        if c == INFINITE:
            return INFINITE
        total += c
    return total


def _diff(A: tuple, B: tuple, n: int):
    if n == 0:
        return 1 if (A and not B) else 0
    if not A:
        return 0
    from .gb.ops import _minimal_monomials
    K = max([g[-1] for g in A] + [g[-1] for g in B] + [0])
    total = 0
    last = None
    for k in range(K + 1):
        Ak = _minimal_monomials(g[:-1] for g in A if g[-1] <= k)
        Bk = _minimal_monomials(g[:-1] for g in B if g[-1] <= k)
        c = _diff(Ak, Bk, n - 1)
        if c == INFINITE:
            return INFINITE
        total += c
        last = c
    if last:
        return INFINITE
    return total


def module_length(N: Submodule, M: Submodule, method: str = "preimage"):
    """Length of N/M for M contained in N (both in the same local context)."""
    if method == "preimage":
        cN = colength(N)
        if cN != INFINITE:
            return colength(M) - cN
        U = preimage_submodule(N.generators, M)
        return colength(U, U.ctx.order.with_module("pot"))
    if method == "leading":
        LN = leading_monomials(N.basis())
        LM = leading_monomials(M.basis())
        return lead_difference_count(LN, LM, N.ctx.nvars)
    raise ValueError(f"unknown length method {method!r}")


def check_contained(M: Submodule, N: Submodule) -> None:
    if not N.contains_module(M):
        raise NotContained("M is not contained in N at the origin")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def samuel_multiplicity(I: Submodule, n_max: int = DEFAULT_NMAX, dim: int | None = None) -> MultiplicityResult:
    """e(I) for an ideal of finite colength in the local ring at the origin."""
    if I.rank != 1:
        raise ValueError("samuel_multiplicity expects an ideal")
    I = as_local(I)
    d = _dim(I.ctx, dim)
    if colength(I) == INFINITE:
        raise InfiniteColength("ideal does not have finite colength at the origin")
    lams = [0]
    for n in range(1, n_max + 1):
        lams.append(colength(power_in_sym(I, n)))
    return stabilize("samuel", lams, d)


def buchsbaum_rim(M: Submodule, n_max: int = DEFAULT_NMAX, dim: int | None = None) -> MultiplicityResult:
    """Buchsbaum-Rim multiplicity of a finite-colength submodule of O_X^p."""
    M = as_local(M)
    d = _dim(M.ctx, dim)
    p = M.rank
    if M.generic_rank() < p:
        raise RankDeficient(f"generic rank {M.generic_rank()} < {p}")
    if colength(M) == INFINITE:
        raise InfiniteColength("module does not have finite colength at the origin")
    lams = [0]
    for n in range(1, n_max + 1):
        lams.append(colength(power_in_sym(M, n)))
    return stabilize("buchsbaum_rim", lams, d + p - 1)


def pair_multiplicity(M: Submodule, N: Submodule, n_max: int = DEFAULT_NMAX, dim: int | None = None,
                      method: str = "preimage") -> MultiplicityResult:
    """Multiplicity e(M, N) of a pair M in N of equal generic rank, from length(N^n / M^n)."""
    if M.rank != N.rank:
        raise ValueError("M and N live in free modules of different rank")
    M, N = as_local(M), as_local(N)
    if not M.ctx.same_ring(N.ctx):
        raise ValueError("M and N from different rings")
    check_contained(M, N)
    e = M.generic_rank()
    if N.generic_rank() != e:
        raise RankMismatch(f"generic ranks differ: {e} vs {N.generic_rank()}")
    d = _dim(M.ctx, dim)
    lams = [0]
    for n in range(1, n_max + 1):
        Mn, Nn = power_in_sym(M, n), power_in_sym(N, n)
        length = module_length(Nn, Mn, method)
        if length == INFINITE:
            raise InfiniteLength(f"length of N^{n}/M^{n} is infinite")
        lams.append(length)
    return stabilize("pair", lams, d + e - 1)


def reduction_check(M: Submodule, N: Submodule, n_max: int = DEFAULT_NMAX, dim: int | None = None) -> bool:
    """True iff M (contained in N) is a reduction of N, tested by e(M, N) == 0."""
    return pair_multiplicity(M, N, n_max, dim).value == 0


# ---------------------------------------------------------------------------
# generic perturbation count
# ---------------------------------------------------------------------------


@dataclass
class PerturbationCount:
    seed: int
    combination: list | None       # p_M x (d+p-1) scalars, None if generators used as given
    epsilon_matrix: list           # p x (d+p-1) scalars
    count: int
    witness_ideal: Submodule
    transverse: bool | None = None
    attempts: int = 1
    draws: list = field(default_factory=list)


def _jacobian_minors_ideal(I: Submodule, codim: int) -> Submodule:
    from .symcore import differentiate
    ctx = I.ctx
    gens = I.polys()
    rows = [[differentiate(g, v) for v in ctx.vars] for g in gens]
    if codim > min(len(rows), ctx.nvars):
        return Submodule.ideal(ctx, gens)
    J = minors(rows, codim, ctx)
    return Submodule.ideal(ctx, gens + J.polys())


def generic_perturbation_count(M: Submodule, stream: GenericScalarStream, *, retries: int = 4,
                               check_transverse: bool = True, dim: int | None = None) -> PerturbationCount:
    """Number of points where a generic constant perturbation of a reduction of M drops rank.

    Generators are first replaced by d+p-1 generic combinations when their
    number differs; the perturbed p x (d+p-1) matrix has kernel rank >= 1 exactly
    on the zero set of its maximal minors, whose global colength is the count.
    """
    ML = as_local(M)
    if colength(ML) == INFINITE:
        raise InfiniteColength("module does not have finite colength at the origin")
    ctx = M.ctx.global_()
    F = ctx.field
    d = _dim(M.ctx, dim)
    p = M.rank
    q = d + p - 1
    mat = [[ctx._import(a) for a in row] for row in M.matrix()]
    pM = len(M.generators)
    for attempt in range(1, retries + 1):
        s = stream if attempt == 1 else stream.spawn(attempt)
        combo = None
        K = mat
        if pM != q:
            combo = [s.draw(F, q) for _ in range(pM)]
            K = [[sum((row[i] * ctx.const(combo[i][j]) for i in range(pM)), ctx.zero()) for j in range(q)]
                 for row in mat]
        eps = [s.draw(F, q) for _ in range(p)]
        P = [[K[i][j] + ctx.const(eps[i][j]) for j in range(q)] for i in range(p)]
        W = minors(P, p, ctx)
        W = Submodule.ideal(ctx, W.polys()) if W.generators else Submodule.ideal(ctx, [ctx.zero()])
        count = colength(W)
        if count == INFINITE:
            continue
        transverse = None
        if check_transverse and count:
            transverse = colength(_jacobian_minors_ideal(W, d)) == 0
        return PerturbationCount(stream.seed, combo, eps, count, W, transverse, attempt, list(s.draw_log))
    raise InfiniteWitness(f"perturbed matrix degenerate along a curve after {retries} draws")
