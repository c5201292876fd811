"""Oriented graded posets: closure, boundaries, maps, duals, isomorphism, export."""

import json

import pytest

from diagkit.molecule import arrow, globe, paste, point
from diagkit.ogp import (
    BOTH,
    MINUS,
    PLUS,
    OGP,
    InvalidElement,
    MolMap,
    OGPError,
    automorphisms,
    boundary,
    check_cartesian,
    check_map,
    closure,
    dual,
    find_isomorphism,
    is_globular,
    is_round,
    to_dot,
)


def test_closure_of_arrow_edge_is_everything():
    P = arrow().poset
    assert closure(P, {2}) == {0, 1, 2}


def test_closure_of_empty_set():
    assert closure(arrow().poset, set()) == frozenset()


def test_closure_of_globe_top():
    # frozen from scripts/derive_frozen_values.py
    assert len(closure(globe(2).poset, {4})) == 5


def test_closure_rejects_unknown_ids():
    with pytest.raises(InvalidElement):
        closure(arrow().poset, {7})


def test_boundary_of_arrow():
    P = arrow().poset
    assert boundary(P, 0, MINUS) == {0}
    assert boundary(P, 0, PLUS) == {1}
    assert boundary(P, -1, MINUS) == frozenset()


def test_boundary_of_point_is_point():
    P = point().poset
    for n in (0, 1, 3):
        for a in (MINUS, PLUS):
            assert boundary(P, n, a) == {0}


def test_output_vertex_of_path():
    P = paste(arrow(), arrow(), 0).poset
    # only the final vertex survives; the middle one has cofaces of both kinds
    out = boundary(P, 0, PLUS)
    assert len(out) == 1
    (x,) = out
    assert P.cofaces(x, PLUS) and not P.cofaces(x, MINUS)


def test_both_boundary_is_union():
    P = globe(2).poset
    assert boundary(P, 1, BOTH) == boundary(P, 1, MINUS) | boundary(P, 1, PLUS)


def test_roundness_examples():
    assert is_round(globe(2).poset)
    assert is_round(paste(arrow(), arrow(), 0).poset)
    assert not is_round(paste(globe(2), arrow(), 0).poset)
    assert is_globular(paste(globe(2), arrow(), 0).poset)


def test_identity_is_cartesian_map():
    P = globe(2).poset
    f = MolMap(P, P, tuple(P.elements()))
    assert check_map(f) and check_cartesian(f)


def test_collapse_of_arrow_to_point():
    f = MolMap(arrow().poset, point().poset, (0, 0, 0))
    assert check_map(f) and check_cartesian(f)


def test_orientation_reversing_bijection_is_not_a_map():
    P = arrow().poset
    f = MolMap(P, P, (1, 0, 2))
    assert not check_map(f)


def test_dual_swaps_roles_and_is_involutive():
    P = arrow().poset
    D = dual(P, {1})
    assert D.minus[2] == P.plus[2] and D.plus[2] == P.minus[2]
    assert dual(D, {1}) == P
    G = globe(2).poset
    DG = dual(G, {2})
    assert DG.minus[4] == G.plus[4]
    assert DG.minus[2] == G.minus[2]


def test_isomorphism_examples():
    A = arrow().poset
    f = find_isomorphism(A, A)
    assert f is not None and tuple(f.assignment) == (0, 1, 2)
    assert find_isomorphism(A, point().poset) is None
    assert len(automorphisms(globe(3).poset)) == 1


def test_validation_rejects_bad_grading():
    with pytest.raises(OGPError):
        OGP([0, 0], [[], [0]], [[], []])


def test_json_round_trip_is_identity():
    P = globe(2).poset
    text = P.to_json()
    Q = OGP.from_json(text)
    assert Q == P
    assert Q.to_json() == text
    assert json.loads(text) == P.to_dict()


def test_dot_labels_and_edge_styles():
    text = to_dot(arrow().poset, "arrow")
    assert text.startswith('digraph "arrow" {')
    assert 'n2 [label="2:1"]' in text
    assert "n0 -> n2 [style=dashed]" in text
    assert "n1 -> n2 [style=solid]" in text
    assert text == to_dot(arrow().poset, "arrow")
