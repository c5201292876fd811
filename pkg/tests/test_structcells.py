"""Units, unitors, reverses and invertors."""

import pytest

from diagkit.diagset import paste_diagrams, paste_sub
from diagkit.molecule import globe, isomorphic
from diagkit.ogp import MINUS, PLUS
from diagkit.structcells import (
    BadCodimension,
    NotDegenerate,
    find_degeneracy,
    higher_unitor,
    higher_unitor_type,
    is_degenerate,
    left_invertor,
    left_unitor,
    reverse,
    right_invertor,
    right_unitor,
    unit,
    witness_of,
)


def fvec(d):
    return [len(d.poset.grade(k)) for k in range(d.dim + 1)]


def test_unit_on_point(C):
    e = unit(C("a"))
    assert e.dim == 1 and e.shape.size == 3
    assert set(e.labels) == {"a"}


def test_unit_on_arrow_is_labelled_globe(C):
    e = unit(C("f"))
    assert isomorphic(e.shape, globe(2))
    assert e.input == C("f") and e.output == C("f")
    assert witness_of(e).check()


def test_left_unitor_at_source_vertex(C):
    f = C("f")
    lam = left_unitor(f, f.shape.bd(0, MINUS))
    assert lam.shape.size == 7
    assert lam.input == f
    assert lam.output == paste_diagrams(unit(C("a")), f, 0)


def test_full_left_and_right_unitors(C):
    al = C("al")
    lam = left_unitor(al)
    assert lam.input == al and lam.output == paste_diagrams(unit(C("f")), al)
    rho = right_unitor(al)
    assert rho.output == al and rho.input == paste_diagrams(al, unit(C("g")))


def test_right_unitor_uses_output_boundary(C):
    f = C("f")
    rho = right_unitor(f, f.shape.bd(0, PLUS))
    assert rho.output == f
    assert rho.input == paste_diagrams(f, unit(C("b")), 0)


def test_higher_unitor_reduces_to_unitor(C):
    al = C("al")
    assert higher_unitor(al, 1) == left_unitor(al)


def test_higher_unitor_on_two_cell_at_input_vertex(C):
    al = C("al")
    S = al.shape.bd(0, MINUS)
    cell = higher_unitor(al, 0, S)
    src, tgt = higher_unitor_type(al, 0, S)
    assert cell.dim == 3
    assert cell.input == src and cell.output == tgt
    assert fvec(cell) == [3, 5, 4, 1]


def test_unitor_codimension_checked(C):
    with pytest.raises(BadCodimension):
        higher_unitor(C("al"), 2)


def test_reverse_of_unit_is_unit(C):
    e = unit(C("f"))
    assert reverse(e) == e


def test_reverse_swaps_type_and_is_involutive(C):
    lam = left_unitor(C("al"))
    r = reverse(lam)
    assert r.input == lam.output and r.output == lam.input
    rr = reverse(r)
    assert rr == lam and rr.poset == lam.poset


def test_reverse_needs_degeneracy(C):
    with pytest.raises(NotDegenerate):
        reverse(C("al"))


def test_invertors_on_unit_of_point(C):
    e = unit(C("a"))
    z = left_invertor(e)
    assert z.dim == 2 and set(z.labels) == {"a"}
    assert z.input == paste_diagrams(e, reverse(e)) and z.output == unit(C("a"))
    h = right_invertor(e)
    assert h.input == unit(C("a")) and h.output == paste_diagrams(reverse(e), e)


def test_invertors_on_unitor(C):
    lam = left_unitor(C("f"))
    z = left_invertor(lam)
    assert z.dim == 3
    assert z.input == paste_diagrams(lam, reverse(lam))
    assert z.output == unit(lam.input)


def test_degeneracy_detection(C):
    assert is_degenerate(unit(C("f")))
    assert not is_degenerate(C("al"))
    d = paste_diagrams(unit(C("f")), unit(C("f")))
    w = find_degeneracy(d)
    assert w is not None and w.check() and w.base.dim < d.dim


def test_structure_cells_record_witnesses(C):
    for d in (unit(C("al")), left_unitor(C("al")), right_unitor(C("al")), reverse(unit(C("h")))):
        assert d.witness is not None and d.witness.check()
