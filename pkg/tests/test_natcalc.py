"""Natural equivalences, context weak inverses and division."""

import pytest

from diagkit import context as cx
from diagkit import natcalc as nc
from diagkit.diagset import paste_diagrams
from diagkit.equivcalc import ByDegeneracy, cert_for_degenerate, check_cert
from diagkit.structcells import left_unitor, reverse, right_unitor, unit


def endpoints_ok(theta, a, depth=2):
    d, c = theta.component(a)
    return (d.input == theta.source().apply(a) and d.output == theta.target().apply(a)
            and check_cert(d, c, depth).accepted)


def test_unit_family_component(C):
    th = nc.UnitFamily(C("f"), C("g"))
    d, c = th.component(C("al"))
    assert d == unit(C("al")) and isinstance(c, ByDegeneracy)


def test_unitor_family_components(C):
    d, _ = nc.LeftUnitorFamily(C("f"), C("g")).component(C("al"))
    assert d == left_unitor(C("al"))
    d, _ = nc.RightUnitorFamily(C("f"), C("g")).component(C("al"))
    assert d == right_unitor(C("al"))


def test_component_index_is_checked(C):
    with pytest.raises(cx.TypeMismatch):
        nc.UnitFamily(C("f"), C("g")).component(C("h"))


def test_pushforward_component_type(C):
    ef = unit(C("f"))
    lam = left_unitor(ef)
    ctx = cx.ContextSubdiagram(ef, "left", cx.Identity(C("f"), C("g")), ef.poset.elements())
    th = nc.Pushforward(ctx, lam, cert_for_degenerate(lam))
    assert endpoints_ok(th, C("al"))
    assert th.target().apply(C("al")) == paste_diagrams(lam.output, C("al"))


def test_unit_naturality_is_unitor_pair(C):
    N = nc.naturality_witness(nc.UnitFamily(C("f"), C("g")), C("al"), C("ga"))
    assert isinstance(N, nc.Compose)
    assert isinstance(N.theta, nc.RightUnitorFamily) and isinstance(N.psi, nc.LeftUnitorFamily)


@pytest.mark.parametrize("family", [nc.UnitFamily, nc.LeftUnitorFamily, nc.RightUnitorFamily])
def test_naturality_endpoints(C, family):
    th = family(C("f"), C("g"))
    N = nc.naturality_witness(th, C("al"), C("ga"))
    src, tgt = nc.naturality_endpoints(th, C("al"), C("ga"))
    d, c = N.component(C("m"))
    assert d.input == src.apply(C("m")) and d.output == tgt.apply(C("m"))
    assert check_cert(d, c, 2).accepted


def test_unitor_naturality_uses_higher_unitor(C):
    N = nc.naturality_witness(nc.LeftUnitorFamily(C("f"), C("g")), C("al"), C("ga"))
    kinds = repr(N)
    assert "HigherUnitorFamily" in kinds


def test_base_cases_of_rounding_lemmas(C):
    th = nc.UnitFamily(C("f"), C("g"))
    Cx, th2 = nc.eversion(th, [])
    assert isinstance(Cx, cx.Identity) and th2 is th
    J, eta = nc.rounding_unit(C("f"), C("g"), [])
    assert isinstance(J, cx.Identity) and isinstance(eta, nc.UnitFamily)


def test_one_step_rounding_endpoints(C):
    e = unit(C("f"))
    G = cx.LeftPaste(e, None, C("f"), C("f"))
    F = cx.Identity(C("a"), C("b"))
    th = nc.one_step_rounding(G, F, C("f"), C("f"))
    d, c = th.component(unit(C("f")))
    assert d.dim == 3 and check_cert(d, c, 2).accepted


def test_identity_inverse(C):
    E = cx.Identity(C("f"), C("g"))
    inv = nc.weak_inverse_context(E)
    assert isinstance(inv.context, cx.Identity)
    assert isinstance(inv.theta, nc.UnitFamily)


def test_left_paste_inverse(C):
    ef = unit(C("f"))
    E = cx.LeftPaste(ef, None, C("f"), C("g"), cert_for_degenerate(ef))
    inv = nc.weak_inverse_context(E)
    assert isinstance(inv.context, cx.LeftPaste)
    assert inv.context.u == reverse(ef)
    assert endpoints_ok(inv.theta, C("al"))
    assert endpoints_ok(inv.psi, E.apply(C("al")))


def test_composite_inverse_reverses_order(C):
    ef, eg = unit(C("f")), unit(C("g"))
    L = cx.LeftPaste(ef, None, C("f"), C("g"), cert_for_degenerate(ef))
    R = cx.RightPaste(eg, None, C("f"), C("g"), cert_for_degenerate(eg))
    E = cx.Compose(R, L)
    inv = nc.weak_inverse_context(E)
    assert isinstance(inv.context, cx.Compose)
    assert isinstance(inv.context.outer, cx.LeftPaste) and isinstance(inv.context.inner, cx.RightPaste)
    assert endpoints_ok(inv.theta, C("al"))


def test_uncertified_context_is_not_invertible(C):
    E = cx.LeftPaste(unit(C("f")), None, C("f"), C("g"))
    with pytest.raises(nc.NotWeaklyInvertible):
        nc.weak_inverse_context(E)


def test_divide_by_identity(C):
    r = nc.divide(cx.Identity(C("f"), C("g")), C("al"))
    assert r.solution == C("al")
    assert r.witness == unit(C("al"))
    assert r.verdict.accepted


def test_divide_by_unit_paste(C):
    ef = unit(C("f"))
    E = cx.LeftPaste(ef, None, C("f"), C("g"), cert_for_degenerate(ef))
    b = E.apply(C("al"))
    r = nc.divide(E, b, depth=2)
    assert r.verdict.accepted
    assert r.witness.output == b and r.witness.input == E.apply(r.solution)
    rt = nc.round_trip(E, C("al"), depth=2)
    assert rt.solution == r.solution and rt.verdict.accepted
    assert rt.witness.output == C("al")


def test_division_budget(C):
    ef = unit(C("f"))
    E = cx.LeftPaste(ef, None, C("f"), C("g"), cert_for_degenerate(ef))
    from diagkit.equivcalc import BudgetExhausted

    with pytest.raises(BudgetExhausted):
        nc.divide(E, E.apply(C("al")), depth=2, budget=1)


def test_weak_uniqueness(C):
    ef = unit(C("f"))
    E = cx.LeftPaste(ef, None, C("f"), C("g"), cert_for_degenerate(ef))
    a = C("al")
    e = unit(E.apply(a))
    h, c = nc.weakly_unique(E, a, a, e, cert_for_degenerate(e))
    assert h.input == a and h.output == a
    assert check_cert(h, c, 2).accepted


def test_promoted_inverse_without_round_action_is_refused(C):
    R = cx.RightPaste(unit(C("b")), None, C("a"), C("b"), cert_for_degenerate(unit(C("b"))))
    E = cx.Promote(R, C("f"), C("g"))
    with pytest.raises(nc.UnsupportedConstruction):
        nc.weak_inverse_context(E)
