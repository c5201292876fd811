"""Molecule constructors, recognition, layerings, Gray products and cylinders."""

import pytest

from diagkit.molecule import (
    BoundaryMismatch,
    KNotInBoundary,
    MoleculeError,
    NotClosed,
    NotRound,
    Point,
    SubmoleculeInclusion,
    arrow,
    boundary_inclusion,
    cell_ext,
    dual,
    evaluate,
    globe,
    gray_product,
    identity_inclusion,
    inverted_cylinder,
    is_molecule,
    isomorphic,
    layering_dimension,
    layerings,
    partial_gray_cylinder,
    paste,
    paste_at_submolecule,
    point,
    subset_inclusion,
    substitute,
)
from diagkit.ogp import BOTH, MINUS, OGP, PLUS, automorphisms, check_cartesian, check_map, closure
from diagkit.ogp import find_isomorphism, is_round


def fvec(U):
    return [len(U.poset.grade(k)) for k in range(U.dim + 1)]


# constructors; element counts frozen from scripts/derive_frozen_values.py


def test_cell_on_points_is_arrow():
    assert cell_ext(point(), point()).size == 3
    assert isomorphic(cell_ext(point(), point()), arrow())


def test_path_has_five_elements():
    assert paste(arrow(), arrow(), 0).size == 5


def test_cell_on_arrows_is_globe():
    G = cell_ext(arrow(), arrow())
    assert fvec(G) == [2, 2, 1]
    top = G.top()
    assert len(G.poset.faces(top, MINUS)) == 1 and len(G.poset.faces(top, PLUS)) == 1
    assert G.is_atom()


def test_cell_ext_needs_round_parallel_inputs():
    whisker = paste(globe(2), arrow(), 0)
    with pytest.raises(NotRound):
        cell_ext(whisker, whisker)
    with pytest.raises(MoleculeError):
        cell_ext(arrow(), globe(2))


def test_paste_needs_matching_boundaries():
    with pytest.raises(MoleculeError):
        paste(globe(2), paste(arrow(), arrow(), 0), 1)


def test_whiskering_at_output_vertex():
    G = globe(2)
    out = G.bd(0, PLUS)
    sub, incl = G.restrict(out)
    iota = SubmoleculeInclusion(sub, G, incl)
    W = paste_at_submolecule(G, arrow(), 0, iota, "right")
    assert W.size == 7
    assert not W.is_round()


def test_pasting_at_an_isomorphism_is_plain_pasting():
    G = globe(2)
    iota = boundary_inclusion(G, 1, PLUS)
    V = cell_ext(iota.sub, iota.sub)
    assert isomorphic(paste_at_submolecule(G, V, 1, iota, "right"), paste(G, V, 1))


def test_substitute_top_cell_by_vertical_composite():
    G = globe(2)
    W = paste(globe(2), globe(2), 1)
    R = substitute(G, W, identity_inclusion(G))
    assert fvec(R) == [2, 3, 2]
    assert isomorphic(R, W)


def test_substitute_by_itself_is_noop():
    G = paste(globe(2), globe(2), 0)
    x = G.poset.grade(2)[0]
    S = closure(G.poset, [x])
    sub, incl = G.restrict(S)
    iota = SubmoleculeInclusion(sub, G, incl)
    assert isomorphic(substitute(G, sub, iota), G)


def test_subset_inclusion_recognises_boundaries_and_rejects_junk():
    G = globe(2)
    assert subset_inclusion(G, G.bd(1, MINUS)).sub.size == 3
    with pytest.raises(NotClosed):
        subset_inclusion(G, {2})


# recognition and layerings


def test_is_molecule_examples():
    assert isinstance(is_molecule(point().poset), Point)
    bad = OGP([0, 0, 1], [[], [], [0, 1]], [[], [], []], check=False)
    assert is_molecule(bad) is None
    assert is_molecule(partial_gray_cylinder(arrow(), set())[0].poset) is not None


def test_layerings_examples():
    assert len(layerings(arrow(), 0)) == 1 and len(layerings(arrow(), 0)[0]) == 1
    path = layerings(paste(arrow(), arrow(), 0), 0)
    assert len(path) == 1 and len(path[0]) == 2
    vert = layerings(paste(globe(2), globe(2), 1), 1)
    assert len(vert) == 1 and len(vert[0]) == 2


def test_layering_dimension():
    assert layering_dimension(globe(2)) == -1
    assert layering_dimension(paste(arrow(), arrow(), 0)) == 0
    assert layering_dimension(paste(globe(2), globe(2), 1)) == 1


def test_expressions_rebuild_the_same_shape():
    U = paste(cell_ext(arrow(), arrow()), globe(2), 1)
    assert evaluate(U.expr) == U
    assert str(U.expr) == "paste(cell(cell(pt,pt),cell(pt,pt)),cell(cell(pt,pt),cell(pt,pt)),1)"


def test_dual_of_molecule():
    G = globe(2)
    D = dual(G, {2})
    assert isomorphic(D, G)
    assert D.poset.minus[4] == G.poset.plus[4]


# Gray products and cylinders


def test_gray_product_with_point_is_identity():
    assert isomorphic(gray_product(point(), globe(2)), globe(2))


def test_gray_square():
    S = gray_product(arrow(), arrow())
    assert S.size == 9 and fvec(S) == [4, 4, 1]
    assert S.is_round()


def test_gray_product_dimension_and_counts():
    P = gray_product(globe(2), globe(2))
    assert P.dim == 4
    assert fvec(P) == [4, 8, 8, 4, 1]


def test_cylinder_relative_to_everything_is_original():
    G = globe(2)
    C, tau = partial_gray_cylinder(G, G.all())
    f = find_isomorphism(C.poset, G.poset)
    assert f is not None
    assert all(tau(x) == f(x) for x in C.poset.elements())


def test_cylinder_relative_to_nothing_is_gray_product():
    G = globe(2)
    C, _ = partial_gray_cylinder(G, set())
    assert fvec(C) == [4, 6, 4, 1]
    assert isomorphic(C, gray_product(arrow(), G))


def test_unit_shapes():
    A = arrow()
    C, tau = partial_gray_cylinder(A, A.bd(None, BOTH))
    assert C.size == 5 and isomorphic(C, globe(2))
    G = globe(2)
    C2, tau2 = partial_gray_cylinder(G, G.bd(None, BOTH))
    assert C2.size == 7 and C2.is_atom() and fvec(C2) == [2, 2, 2, 1]
    assert check_map(tau2) and check_cartesian(tau2)


def test_left_unitor_shape_on_arrow():
    A = arrow()
    C, _ = partial_gray_cylinder(A, A.bd(0, MINUS))
    assert C.size == 7 and fvec(C) == [3, 3, 1]


def test_unitor_on_two_cell_at_input_vertex():
    G = globe(2)
    C, _ = partial_gray_cylinder(G, G.bd(0, MINUS))
    assert fvec(C) == [3, 5, 4, 1]
    assert C.is_round()


def test_cylinder_rejects_open_subsets():
    with pytest.raises(NotClosed):
        partial_gray_cylinder(globe(2), {2})


def test_left_inverted_cylinder_on_arrow():
    A = arrow()
    Z, tau = inverted_cylinder(A, A.bd(None, PLUS), "left")
    assert Z.size == 7 and fvec(Z) == [3, 3, 1]
    assert Z.is_round() and is_molecule(Z.poset) is not None
    # the input is the edge followed by its reverse
    inp = Z.boundary(1, MINUS)
    assert fvec(inp) == [3, 2]
    assert sorted(tau(x) for x in Z.poset.grade(1) if x in Z.bd(1, MINUS)) == [2, 2]


def test_right_inverted_cylinder_on_arrow():
    A = arrow()
    Z, _ = inverted_cylinder(A, A.bd(None, MINUS), "right")
    assert Z.size == 7 and fvec(Z) == [3, 3, 1]
    assert fvec(Z.boundary(1, PLUS)) == [3, 2]


def test_inverted_cylinder_side_conditions():
    A = arrow()
    with pytest.raises(KNotInBoundary):
        inverted_cylinder(A, A.bd(None, MINUS), "left")
    with pytest.raises(KNotInBoundary):
        inverted_cylinder(A, A.bd(None, PLUS), "right")


def test_inverted_cylinder_projection_factors_through_collapse():
    # on a unit shape, the projection composed with the collapse of the unit is
    # a cartesian map although the bare projection reverses the top cells
    A = arrow()
    U, p = partial_gray_cylinder(A, A.bd(None, BOTH))
    for side, a in (("left", PLUS), ("right", MINUS)):
        Z, tau = inverted_cylinder(U, U.bd(None, a), side)
        f = p.compose(tau)
        assert check_map(f) and check_cartesian(f)
        assert not check_map(tau)


def test_molecules_are_rigid():
    for U in (globe(3), gray_product(arrow(), globe(2)), paste(globe(2), globe(2), 0)):
        assert len(automorphisms(U.poset)) == 1
