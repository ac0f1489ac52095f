import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multipolar.gb import Submodule, colength, reduced_ideal_basis
from multipolar.germs import (
    IncompletePointList,
    MapGerm,
    NotContained,
    NotCorank1,
    NotCritical,
    NotICIS,
    NotIsolated,
    classify_singular_point,
    disentanglement_report,
    j_invariant,
    jacobian_ideal,
    jacobian_module,
    triple_point_identity,
    milnor_icis,
    one_form_index,
    pellikaan_report,
    pushforward_presentation,
    stabilization_census,
    wf_invariant,
)
from multipolar.symcore import GenericScalarStream, RingContext

R3 = RingContext(("x", "y", "z"), order="local_degrevlex")
T3 = RingContext(("x", "y", "z"), ("t",), order="local_degrevlex")


def _ideal(ctx, text):
    return Submodule.ideal(ctx, [ctx.parse(s) for s in text.split(",")])


def _sorted(S):
    return sorted(str(g) for g in reduced_ideal_basis(S.with_context(S.ctx.global_())))


# -- Jacobian modules -------------------------------------------------------


def test_jacobian_ideal_and_module():
    f = R3.parse("x*y^2 + z^2")
    assert _sorted(jacobian_ideal(f)) == ["x*y", "y^2", "z"]
    M = jacobian_module([R3.parse("x*y")], f)
    assert M.rank == 2 and len(M.generators) == 3


def test_jacobian_module_relative_columns():
    F = T3.parse("x^2 + t*y")
    assert len(jacobian_module([F], relative_to="r_k").generators) == 3
    M = jacobian_module([F], relative_to="r_n")
    assert [str(g) for g in M.polys()] == ["y"]
    with pytest.raises(ValueError):
        jacobian_module([F], relative_to="bogus")
    with pytest.raises(ValueError):
        jacobian_module([R3.parse("x")], relative_to="r_n")


# -- j(f) and classification -----------------------------------------------


@pytest.mark.parametrize("f,I,j", [("x^2 + y^2", "x, y", 0), ("x*y^2 + z^2", "y, z", 1),
                                   ("x^2*y^2 + z^2", "x*y, z", 1)])
def test_j_invariant(f, I, j):
    assert j_invariant(R3.parse(f), _ideal(R3, I)) == j


def test_j_invariant_needs_containment():
    with pytest.raises(NotContained):
        j_invariant(R3.parse("x*y^2 + z^2"), _ideal(R3, "y^2, z"))


def test_classify_examples():
    sig = _ideal(R3, "y, z")
    assert classify_singular_point(R3.parse("x*y^2 + z^2"), sig, {}).cls == "D_infinity"
    assert classify_singular_point(R3.parse("y^2 + z^2"), sig, {"x": 3}).cls == "A_infinity"
    f = R3.parse("(x*y - 2)^2 + z^2")
    sig2 = _ideal(R3, "x*y - 2, z")
    assert classify_singular_point(f, sig2, {}).cls == "A_1"
    assert classify_singular_point(f, sig2, {"x": 1, "y": 2}).cls == "A_infinity"
    with pytest.raises(NotCritical):
        classify_singular_point(R3.parse("x + y^2"), sig, {})


def _elementary(i, j, c):
    m = [[int(a == b) for b in range(3)] for a in range(3)]
    m[i][j] = c
    return m


def _apply(mat, f, ctx):
    images = {v: sum((ctx.const(mat[r][c]) * ctx.var(w) for c, w in enumerate(ctx.vars)), ctx.zero())
              for r, v in enumerate(ctx.vars)}
    return ctx.map_poly(f, images)


ops = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)).filter(lambda t: t[0] != t[1]),
               min_size=1, max_size=3)


@settings(max_examples=15, deadline=None)
@given(ops)
def test_classification_invariant_under_unimodular_change(steps):
    cases = [("x*y^2 + z^2", "y, z", "D_infinity"), ("y^2 + z^2", "y, z", "A_infinity"),
             ("x^2 + y^2 + z^2", "x, y, z", "A_1")]
    for f, I, expected in cases:
        g = R3.parse(f)
        gens = [R3.parse(s) for s in I.split(",")]
        for i, j, c in steps:
            m = _elementary(i, j, c)
            g = _apply(m, g, R3)
            gens = [_apply(m, h, R3) for h in gens]
        sig = Submodule.ideal(R3, gens)
        if expected == "A_1":
            sig = Submodule.ideal(R3, [R3.one()])
        assert classify_singular_point(g, sig, {}).cls == expected


# -- Pellikaan census ------------------------------------------------------


def _pellikaan_family():
    f = T3.parse("x^2*y^2 + z^2")
    I = _ideal(T3, "x*y, z")
    ft = T3.parse("(x*y - t)^2 + z^2")
    It = _ideal(T3, "x*y - t, z")
    return f, I, ft, It


def test_pellikaan_report():
    f, I, ft, It = _pellikaan_family()
    rep = pellikaan_report(f, I, ft, It, [(0, 0, 0)], GenericScalarStream(5))
    assert (rep.j, rep.e_pair) == (1, 1)
    assert rep.counts["A_1"] == 1 and rep.counts["D_infinity"] == 0
    assert rep.holds and rep.global_length == 1


def test_pellikaan_incomplete_points():
    f, I, ft, It = _pellikaan_family()
    with pytest.raises(IncompletePointList):
        pellikaan_report(f, I, ft, It, [], GenericScalarStream(5))


def test_pellikaan_requires_f_in_I_squared():
    f, I, ft, It = _pellikaan_family()
    with pytest.raises(NotContained):
        pellikaan_report(T3.parse("x*y + z^2"), I, ft, It, [(0, 0, 0)], GenericScalarStream(5))


# -- map germs -------------------------------------------------------------

TGT = RingContext(("x", "y", "z"), ("s",), order="local_degrevlex")


def _germ(*comps, params=()):
    return MapGerm.from_strings(("u", "v"), TGT, comps, params=params)


def test_cross_cap_presentation():
    p = pushforward_presentation(_germ("u", "v^2", "u*v"))
    assert p.multiplicity == 2
    assert str(p.image_eq) in ("-x^2*y + z^2", "z^2 - x^2*y")
    assert _sorted(p.F1) == ["x", "z"]
    assert p.image_agrees


def test_s1_presentation():
    p = pushforward_presentation(_germ("u", "v^2", "v^3 + u^2*v"))
    assert p.multiplicity == 2 and p.image_agrees
    assert _sorted(p.F1) == ["x^2 + y", "z"]


def test_immersion_presentation():
    p = pushforward_presentation(_germ("u", "v", "0"))
    assert p.multiplicity == 1
    assert [str(g) for g in p.F1.polys()] == ["1"]
    assert str(p.image_eq) == "z"


def test_presentation_requires_corank1_form():
    with pytest.raises(NotCorank1):
        pushforward_presentation(_germ("v", "u^2", "u*v"))


def test_cross_cap_disentanglement():
    r = disentanglement_report(_germ("u", "v^2", "u*v"), GenericScalarStream(2))
    assert (r.e_pair, r.dim_C_over_Jf, r.dim_C_over_CP, r.mu_F) == (1, 1, 0, 0)
    assert all(v is not False for v in r.identity_checks.values())


def test_s1_disentanglement_with_census():
    G = _germ("u", "v^2", "v^3 + u^2*v")
    Gs = _germ("u", "v^2", "v^3 + u^2*v - s*v", params=("s",))
    census = stabilization_census(Gs, GenericScalarStream(8))
    assert (census["A_1"], census["D_infinity"]) == (1, 2)
    r = disentanglement_report(G, GenericScalarStream(2), stabilization=Gs)
    assert (r.e_pair, r.dim_C_over_Jf, r.dim_C_over_Jf_pullback, r.mu_F) == (3, 3, 2, 1)
    assert all(r.identity_checks.values())


def test_triple_point_identity():
    a, b, equal = triple_point_identity()
    assert equal and a == ["x*y", "x*z", "y*z"]


# -- Milnor numbers and 1-form indices --------------------------------------


@pytest.mark.parametrize("eqs,mu", [(["x^2 + y^2 + z^2"], 1), (["x^2 + y^3 + z^2"], 2), (["x"], 0),
                                    (["x^2 + y^3 + z^5"], 8),
                                    (["x^2 + y^2 + z^2 - z", "x*y"], 1)])
def test_milnor_icis(eqs, mu):
    assert milnor_icis([R3.parse(e) for e in eqs]) == mu


def test_milnor_icis_rejects_non_isolated():
    with pytest.raises(NotICIS):
        milnor_icis([R3.parse("x^2")])
    with pytest.raises(NotICIS):
        milnor_icis([R3.parse("x + 1")])


def test_one_form_index_dL():
    r = one_form_index([R3.parse("x^2 + y^2 + z^2")], None, None, GenericScalarStream(4))
    assert r.index == 1 and r.cancellation and r.e_omega == r.e_dL


def test_one_form_index_radial_like_form():
    X = [R3.parse("x^2 + y^2 + z^2")]
    r = one_form_index(X, [R3.parse(t) for t in ("x", "2*y", "3*z")], None, GenericScalarStream(4))
    assert r.index == 5


def test_one_form_index_smooth_morse():
    r = one_form_index([R3.parse("z")], [R3.parse(t) for t in ("2*x", "2*y", "0")], None, GenericScalarStream(1))
    assert (r.index, r.slice_mu) == (1, 0)


def test_one_form_index_curve_cancellation():
    C = [R3.parse("x^2 + y^2 + z^2 - z"), R3.parse("x*y")]
    r = one_form_index(C, None, None, GenericScalarStream(4))
    assert r.cancellation and r.index == r.slice_mu == 1


def test_one_form_non_isolated():
    with pytest.raises(NotIsolated):
        one_form_index([R3.parse("x^2 + y^2 + z^2")], [R3.parse(t) for t in ("x", "y", "2*z")], None,
                       GenericScalarStream(4))


# -- Wf invariants ----------------------------------------------------------

W = RingContext(("x", "z"), ("y",), order="local_degrevlex")


def test_wf_product_family_constant():
    rep = wf_invariant([], W.parse("x^2 + z^2"), W.parse("x"), GenericScalarStream(9))
    assert rep.independent
    assert [s["e_f"] for s in rep.samples] == [4, 4]


def test_wf_mu_jump():
    rep = wf_invariant([], W.parse("x^3 + z^3 + y*x*z"), W.parse("x"), GenericScalarStream(9))
    assert not rep.independent
    assert [s["e_f"] for s in rep.samples] == [9, 4]


def test_wf_explicit_samples():
    rep = wf_invariant([], W.parse("x^2 + z^2"), W.parse("x"), GenericScalarStream(1), y_samples=[0, 1, 2])
    assert len(rep.samples) == 3 and rep.independent
