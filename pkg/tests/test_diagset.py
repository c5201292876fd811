"""Presentations, diagrams, pasting, substitution and morphisms."""

import json

import pytest

from diagkit.diagset import (
    Diagram,
    DiagramError,
    InvalidDiagram,
    LabelMismatch,
    NotParallel,
    Presentation,
    PresentationMorphism,
    UnmappedGenerator,
    apply_morphism,
    diagram_on,
    find_subdiagram,
    identity_morphism,
    paste_diagrams,
    substitute_diagram,
    validate_diagram,
)
from diagkit.molecule import arrow, globe, point
from diagkit.ogp import MINUS, PLUS
from diagkit.structcells import unit


def test_point_diagram_is_valid(pres):
    assert validate_diagram(Diagram(pres, point(), ["a"]))[0]


def test_arrow_labelled_by_a_point_is_degenerate_and_valid(pres):
    d = Diagram(pres, arrow(), ["a", "a", "a"])
    assert validate_diagram(d)[0]
    assert d.degenerate_at(2)


def test_mismatched_boundary_labels_are_invalid(pres):
    d = Diagram(pres, globe(2), ["a", "c", "f", "g", "al"])
    ok, trace = validate_diagram(d)
    assert not ok and trace
    with pytest.raises(InvalidDiagram):
        diagram_on(pres, globe(2), ["a", "c", "f", "g", "al"])


def test_cell_boundaries(C):
    al = C("al")
    assert al.input == C("f") and al.output == C("g")
    assert al.boundary(0, MINUS) == C("a") and al.boundary(0, PLUS) == C("b")
    assert al.boundary(5, PLUS) == al


def test_whiskered_cell_output_vertex(C):
    d = paste_diagrams(C("al"), C("h"), 0)
    assert d.boundary(0, PLUS) == C("c")
    assert not d.is_round()


def test_paste_of_composable_arrows(C):
    d = paste_diagrams(C("f"), C("h"), 0)
    assert sorted(d.labels) == sorted(["a", "f", "b", "h", "c"])
    assert d.input.labels == ("a",) and d.output.labels == ("c",)


def test_paste_rejects_mismatch(C):
    with pytest.raises(LabelMismatch):
        paste_diagrams(C("h"), C("f"), 0)


def test_pasting_restricts_to_factors(C):
    from diagkit.diagset import paste_with_maps

    d, eu, ev = paste_with_maps(C("al"), C("h"), 0)
    assert d.restrict(eu)[0] == C("al")
    assert d.restrict(ev)[0] == C("h")


def test_substitution_of_a_cell(pres, C):
    pres.add("be", C("g"), C("g"))
    w = paste_diagrams(C("al"), C("be"), 1)
    d = paste_diagrams(C("al"), C("h"), 0)
    S = find_subdiagram(d, C("al"))
    assert len(S) == 1
    out, _, _ = substitute_diagram(d, w, S[0])
    assert validate_diagram(out)[0]
    assert sorted(out.labels).count("be") == 1
    with pytest.raises(NotParallel):
        substitute_diagram(d, C("h"), S[0])


def test_generators_need_parallel_round_boundaries(pres, C):
    with pytest.raises(NotParallel):
        pres.add("bad", C("f"), C("h"))
    with pytest.raises(DiagramError):
        pres.add("f", C("a"), C("b"))


def test_identity_morphism_fixes_diagrams(pres, C):
    d = paste_diagrams(C("al"), C("h"), 0)
    assert apply_morphism(identity_morphism(pres), d) == d


def test_morphism_must_preserve_dimension(pres):
    tgt = Presentation()
    tgt.add("x")
    gmap = {g.name: "x" for g in pres}
    with pytest.raises(DiagramError):
        PresentationMorphism(pres, tgt, gmap)


def test_morphism_must_be_total(pres):
    with pytest.raises(UnmappedGenerator):
        PresentationMorphism(pres, pres, {"a": "a"})


def test_morphism_commutes_with_unit(pres, C):
    gmap = {g.name: g.name for g in pres}
    gmap["ga"] = "al"
    gmap["m"] = "m"
    tgt = Presentation()
    for g in pres:
        if g.name in ("ga",):
            continue
        if g.name == "m":
            tgt.add("m", tgt.cell("al"), tgt.cell("al"))
        elif g.dim == 0:
            tgt.add(g.name)
        else:
            tgt.add(g.name, Diagram(tgt, g.input.shape, g.input.labels), Diagram(tgt, g.output.shape, g.output.labels))
    f = PresentationMorphism(pres, tgt, gmap)
    d = C("ga")
    assert apply_morphism(f, unit(d)) == unit(apply_morphism(f, d))


def test_json_round_trip(pres, C):
    d = paste_diagrams(C("al"), C("h"), 0)
    text = d.to_json()
    back = Diagram.from_dict(pres, json.loads(text))
    assert back == d and back.to_json() == text
    ptext = pres.to_json()
    assert Presentation.from_json(ptext).to_json() == ptext


def test_diagram_json_accepts_shape_expressions(pres):
    d = Diagram.from_dict(pres, {"shape": "arrow", "labels": {"0": "a", "1": "b", "2": "f"}})
    assert d == pres.cell("f")


def test_find_subdiagram_locates_every_copy(C):
    d = paste_diagrams(C("f"), unit(C("b")), 0)
    # the unit on b is an edge from b to b
    assert len(find_subdiagram(d, C("b"))) == 2
    assert find_subdiagram(d, C("c")) == []
