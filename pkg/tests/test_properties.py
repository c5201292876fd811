"""Property tests over seeded random shapes, diagrams and contexts."""

import json
import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from diagkit import context as cx
from diagkit import corpus
from diagkit import structcells as sc
from diagkit.diagset import Diagram, paste_with_maps, validate_diagram
from diagkit.equivcalc import cert_for_degenerate, check_cert, sym, unrolled
from diagkit.molecule import (
    SubmoleculeInclusion,
    arrow,
    cell_ext,
    gray_product,
    is_molecule,
    isomorphic,
    partial_gray_cylinder,
    substitute,
)
from diagkit.ogp import BOTH, MINUS, PLUS, automorphisms, boundary, check_cartesian, check_map
from diagkit.ogp import closure, dual, is_closed, is_globular, subset_dim

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_of(seed):
    return random.Random(seed)


@SETTINGS
@given(seeds)
def test_boundaries_are_globular(seed):
    U = corpus.random_molecule(rng_of(seed))
    P = U.poset
    for n in range(U.dim + 1):
        for beta in (MINUS, PLUS):
            B = boundary(P, n, beta)
            assert is_closed(P, B) and subset_dim(P, B) <= n
            for k in range(n):
                for alpha in (MINUS, PLUS):
                    assert boundary(P, k, alpha, B) == boundary(P, k, alpha)


@SETTINGS
@given(seeds, st.sets(st.integers(0, 3)))
def test_dual_is_an_involution(seed, dims):
    P = corpus.random_molecule(rng_of(seed)).poset
    D = dual(P, dims)
    assert dual(D, dims) == P
    assert D.dims == P.dims
    assert all(D.faces(x) == P.faces(x) for x in P.elements())


@SETTINGS
@given(seeds)
def test_molecules_are_rigid(seed):
    U = corpus.random_molecule(rng_of(seed))
    assert len(automorphisms(U.poset)) == 1


@SETTINGS
@given(seeds, st.data())
def test_cylinder_projections_are_cartesian(seed, data):
    rng = rng_of(seed)
    U = corpus.random_molecule(rng, max_dim=2)
    pool = sorted(U.all())
    K = closure(U.poset, data.draw(st.sets(st.sampled_from(pool), max_size=3)))
    C, tau = partial_gray_cylinder(U, K)
    assert check_map(tau) and check_cartesian(tau)
    assert is_molecule(C.poset) is not None


@SETTINGS
@given(seeds)
def test_constructors_give_globular_molecules(seed):
    U = corpus.random_molecule(rng_of(seed))
    assert is_molecule(U.poset) is not None and is_globular(U.poset)
    if U.is_round() and U.dim < 3:
        A = cell_ext(U, U)
        assert A.is_atom()


@SETTINGS
@given(seeds)
def test_empty_cylinder_is_gray_product(seed):
    U = corpus.random_molecule(rng_of(seed), max_dim=2, max_size=20)
    assert isomorphic(partial_gray_cylinder(U, set())[0], gray_product(arrow(), U))


@SETTINGS
@given(seeds, st.data())
def test_cylinders_on_round_molecules_are_round(seed, data):
    U = corpus.random_round_molecule(rng_of(seed), max_dim=2, max_size=20)
    pool = sorted(U.bd(None, BOTH)) if U.dim > 0 else []
    K = closure(U.poset, data.draw(st.sets(st.sampled_from(pool), max_size=3))) if pool else set()
    assert partial_gray_cylinder(U, K)[0].is_round()


@SETTINGS
@given(seeds)
def test_substituting_a_cell_by_itself(seed):
    rng = rng_of(seed)
    U = corpus.random_molecule(rng)
    if U.dim == 0:
        return
    x = rng.choice(U.poset.grade(U.dim))
    sub, incl = U.restrict(closure(U.poset, [x]))
    assert isomorphic(substitute(U, sub, SubmoleculeInclusion(sub, U, incl)), U)


@SETTINGS
@given(seeds)
def test_diagram_boundaries_are_valid(seed):
    rng = rng_of(seed)
    d = corpus.random_diagram(rng, corpus.random_presentation(rng))
    assert validate_diagram(d)[0]
    for n in range(d.dim):
        for a in (MINUS, PLUS):
            assert validate_diagram(d.boundary(n, a))[0]


@SETTINGS
@given(seeds)
def test_pasting_restricts_to_its_factors(seed):
    rng = rng_of(seed)
    pres = corpus.random_presentation(rng)
    u = corpus.random_round_diagram(rng, pres, max_dim=2)
    v = sc.unit(u.output)
    d, eu, ev = paste_with_maps(u, v)
    assert d.restrict(eu)[0] == u and d.restrict(ev)[0] == v


@SETTINGS
@given(seeds)
def test_structure_cells_are_degenerate_and_round(seed):
    rng = rng_of(seed)
    pres = corpus.random_presentation(rng)
    u = corpus.random_round_diagram(rng, pres, max_dim=2)
    for d in (sc.unit(u), sc.left_unitor(u), sc.right_unitor(u), sc.reverse(sc.left_unitor(u))):
        assert d.witness is not None and d.witness.check()
        assert d.is_round()


@SETTINGS
@given(seeds)
def test_context_reconstructions(seed):
    rng = rng_of(seed)
    pres = corpus.random_presentation(rng)
    a = corpus.random_round_diagram(rng, pres, max_dim=2, min_dim=1)
    F = corpus.random_context(rng, a.input, a.output)
    for b in corpus.arguments(rng, pres, a.input, a.output, 3, [a]):
        Fb = F.apply(b)
        assert cx.apply_layering(cx.context_layering(F), b) == Fb
        if F.dim >= 2:
            T, G = cx.trim_factorize(F)
            assert cx.Compose(T, cx.Promote(G, a.input, a.output)).apply(b) == Fb


@SETTINGS
@given(seeds)
def test_trim_contexts_preserve_roundness(seed):
    rng = rng_of(seed)
    pres = corpus.random_presentation(rng)
    a = corpus.random_round_diagram(rng, pres, max_dim=2, min_dim=1)
    F = corpus.random_context(rng, a.input, a.output, promote=False)
    assert cx.is_round_context(F)
    assert F.apply(a).is_round()


@SETTINGS
@given(seeds, st.integers(1, 2))
def test_certificate_checking_is_monotone_in_depth(seed, layers):
    rng = rng_of(seed)
    pres = corpus.random_presentation(rng, dim=2)
    u = corpus.random_round_diagram(rng, pres, max_dim=1)
    e = corpus.random_degenerate(rng, u)
    c = unrolled(e, cert_for_degenerate(e), layers)
    accepted = [check_cert(e, c, d).accepted for d in range(layers + 3)]
    first = accepted.index(True)
    assert all(accepted[first:])


@SETTINGS
@given(seeds)
def test_double_symmetry_keeps_boundaries(seed):
    rng = rng_of(seed)
    pres = corpus.random_presentation(rng, dim=2)
    u = corpus.random_round_diagram(rng, pres, max_dim=1)
    e = corpus.random_degenerate(rng, u)
    s, c = sym(e, cert_for_degenerate(e))
    ss, _ = sym(s, c)
    assert ss.input == e.input and ss.output == e.output


@SETTINGS
@given(seeds)
def test_diagram_json_round_trip(seed):
    rng = rng_of(seed)
    pres = corpus.random_presentation(rng)
    d = corpus.random_diagram(rng, pres)
    text = d.to_json()
    back = Diagram.from_dict(pres, json.loads(text))
    assert back == d and back.to_json() == text
