"""Equivalence certificates: checking, expansion, lax solutions, combinators."""

import json

import pytest

from diagkit.diagset import paste_diagrams
from diagkit.equivcalc import (
    Assumed,
    ByDegeneracy,
    ByWeakInverse,
    Equation,
    IllFormedEquation,
    MissingCellCert,
    cert_depth,
    cert_for_degenerate,
    cert_from_dict,
    cert_to_dict,
    certify_cells,
    check_cert,
    expand,
    refl,
    solve_colax,
    solve_lax,
    subdiag,
    sym,
    trans,
    unrolled,
)
from diagkit.ogp import MINUS, PLUS
from diagkit.structcells import left_invertor, left_unitor, reverse, right_invertor, unit


def test_unit_certificate_accepted(C):
    e = unit(C("f"))
    assert check_cert(e, cert_for_degenerate(e), 1).accepted


def test_wrong_invertor_is_rejected_with_path(C):
    e = unit(C("f"))
    c = expand(e, cert_for_degenerate(e))
    other = left_invertor(unit(C("g")))
    bad = ByWeakInverse(c.inverse, other, ByDegeneracy(other.witness), c.h, c.hcert)
    v = check_cert(e, bad, 3)
    assert v.status == "reject" and v.message


def test_assumed_leaves(C):
    al = C("al")
    assert check_cert(al, Assumed("al"), 2, assume=True).accepted
    v = check_cert(al, Assumed("al"), 2, assume=False)
    assert not v.accepted


def test_expansion_of_point_unit(C):
    e = unit(C("a"))
    c = expand(e, cert_for_degenerate(e))
    assert isinstance(c, ByWeakInverse)
    assert c.inverse == e


def test_expansion_of_unitor_uses_reverse(C):
    lam = left_unitor(C("f"))
    c = expand(lam, cert_for_degenerate(lam))
    assert c.inverse == reverse(lam)
    assert c.z.input == paste_diagrams(lam, c.inverse)
    assert c.h.output == paste_diagrams(c.inverse, lam)
    for form in (cert_for_degenerate(lam), c):
        assert check_cert(lam, form, 2).accepted


def test_depth_is_monotone(C):
    lam = left_unitor(C("al"))
    c = unrolled(lam, cert_for_degenerate(lam), 2)
    assert cert_depth(c) == 2
    assert check_cert(lam, c, 1).status == "exhausted"
    for d in (2, 3, 4):
        assert check_cert(lam, c, d).accepted


def test_lax_solution_for_unit_on_point(C):
    e = unit(C("a"))
    f = C("f")
    j = f.shape.bd(0, MINUS)
    sol = solve_lax(e, cert_for_degenerate(e), Equation("left", f, j))
    assert sol.h.output == f
    assert check_cert(sol.h, sol.hcert, 2).accepted


def test_lax_solution_against_itself(C):
    lam = left_unitor(C("f"))
    e = lam
    target = lam
    sol = solve_lax(e, cert_for_degenerate(e), Equation("left", target, target.shape.bd(1, MINUS)))
    assert sol.solution.dim == 2
    assert sol.h.output == target
    assert check_cert(sol.h, sol.hcert, 2).accepted


def test_colax_variant(C):
    e = unit(C("a"))
    f = C("f")
    sol = solve_colax(e, cert_for_degenerate(e), Equation("left", f, f.shape.bd(0, MINUS)))
    assert sol.colax and sol.h.input == f
    assert check_cert(sol.h, sol.hcert, 2).accepted


def test_ill_formed_equation(C):
    e = unit(C("a"))
    f = C("f")
    with pytest.raises(IllFormedEquation):
        solve_lax(e, cert_for_degenerate(e), Equation("left", f, f.shape.bd(0, PLUS)))


def test_refl_trans_sym(C):
    u, c = refl(C("al"))
    assert u == unit(C("al")) and isinstance(c, ByDegeneracy)
    h, hc = trans(u, c, u, c)
    assert h.input == C("al") and h.output == C("al")
    assert check_cert(h, hc, 2).accepted
    s, sc_ = sym(h, hc)
    assert s.input == h.output and s.output == h.input


def test_subdiagram_replacement(C):
    lam = left_unitor(C("f"))
    d = paste_diagrams(C("f"), C("h"), 0)
    S = [x for x in d.poset.elements() if d.labels[x] in ("a", "b", "f")]
    w, c = subdiag(d, S, lam, cert_for_degenerate(lam))
    assert w.input == d
    assert check_cert(w, c, 2).accepted


def test_cell_certificates(pres, C):
    u = paste_diagrams(unit(C("f")), unit(C("f")))
    assert check_cert(u, certify_cells(u), 2).accepted
    reg = {"al": Assumed("al")}
    assert isinstance(certify_cells(C("al"), reg), Assumed)
    with pytest.raises(MissingCellCert):
        certify_cells(C("al"))


def test_vertical_composite_of_certified_cells(pres, C):
    pres.add("be", C("g"), C("f"))
    al, be = C("al"), C("be")
    u = paste_diagrams(al, be)
    c = certify_cells(u, {"al": Assumed("al"), "be": Assumed("be")})
    v = check_cert(u, c, 2, assume=True)
    assert v.accepted and set(v.assumptions) == {"al", "be"}


def test_certificate_json_round_trip(pres, C):
    lam = left_unitor(C("f"))
    c = expand(lam, cert_for_degenerate(lam))
    text = json.dumps(cert_to_dict(c), sort_keys=True)
    back = cert_from_dict(pres, json.loads(text))
    assert json.dumps(cert_to_dict(back), sort_keys=True) == text
    assert check_cert(lam, back, 2).accepted


def test_invertor_types_from_expansion(C):
    lam = left_unitor(C("al"))
    z, h = left_invertor(lam), right_invertor(lam)
    assert z.output == unit(lam.input)
    assert h.input == unit(lam.output)


@pytest.mark.parametrize("solver", [solve_lax, solve_colax])
def test_solution_picks_the_unit_next_to_e_when_target_is_a_unit(C, solver):
    # the target is itself a unit on f, so its unitor holds two unit copies
    from diagkit.equivcalc import solution_pasting
    from diagkit.structcells import right_unitor

    e = right_unitor(C("f"))
    target = unit(C("f"))
    sol = solver(e, cert_for_degenerate(e), Equation("right", target, target.shape.bd(1, PLUS)))
    start = sol.h.output if sol.colax else sol.h.input
    assert any(start == p for p in solution_pasting(e, sol.solution, "right"))
    assert check_cert(sol.h, sol.hcert, 2).accepted
