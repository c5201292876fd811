"""Contexts: application, layerings, trim factorization, roundness."""

import json

import pytest

from diagkit import context as cx
from diagkit.diagset import paste_diagrams, paste_sub
from diagkit.molecule import globe, isomorphic
from diagkit.structcells import left_unitor, reverse, unit


def test_identity_acts_trivially(C):
    F = cx.Identity(C("f"), C("g"))
    assert F.apply(C("al")) == C("al")
    assert F.dim == 2 and F.is_trim


def test_left_paste_pastes_into_input(C):
    e = unit(C("f"))
    F = cx.LeftPaste(e, None, C("f"), C("g"))
    assert F.apply(C("al")) == paste_diagrams(e, C("al"))
    assert F.codomain[0] == C("f")


def test_partial_left_paste(C):
    v = paste_diagrams(C("f"), C("h"), 0)
    w = paste_diagrams(C("g"), C("h"), 0)
    iota = [x for x in v.poset.elements() if v.labels[x] in ("a", "f", "b")]
    F = cx.LeftPaste(unit(C("f")), iota, v, w)
    a = paste_diagrams(C("al"), C("h"), 0)
    out = F.apply(a)
    assert out.dim == 2 and out.output == w


def test_argument_type_is_checked(C):
    F = cx.Identity(C("f"), C("g"))
    with pytest.raises(cx.TypeMismatch):
        F.apply(C("h"))


def test_promoted_context_whiskers(C):
    R = cx.RightPaste(C("h"), None, C("a"), C("b"))
    P = cx.Promote(R, C("f"), C("g"))
    out = P.apply(C("al"))
    assert out == paste_diagrams(C("al"), C("h"), 0)
    assert not P.is_trim
    assert not cx.is_round_context(P)


def test_identity_layering(C):
    F = cx.Identity(C("f"), C("g"))
    L = cx.context_layering(F)
    assert L == [(C("a"), C("b")), (C("f"), C("g"))]


def test_left_paste_layering(C):
    e = unit(C("f"))
    F = cx.LeftPaste(e, None, C("f"), C("g"))
    L = cx.context_layering(F)
    assert L[1] == (paste_sub(e, C("f"), 1, F.iota, "left")[0], C("g"))
    assert L[0] == (C("a"), C("b"))
    assert cx.apply_layering(L, C("al")) == F.apply(C("al"))


def test_trim_factorization_cases(C):
    F = cx.LeftPaste(unit(C("f")), None, C("f"), C("g"))
    T, G = cx.trim_factorize(F)
    assert T is F and isinstance(G, cx.Identity)
    R = cx.RightPaste(C("h"), None, C("a"), C("b"))
    P = cx.Promote(R, C("f"), C("g"))
    T, G = cx.trim_factorize(P)
    assert isinstance(T, cx.Identity) and G is R
    with pytest.raises(cx.DimensionTooLow):
        cx.trim_factorize(R)


def test_trim_factorization_of_composite(C):
    R = cx.RightPaste(C("h"), None, C("a"), C("b"))
    P = cx.Promote(R, C("f"), C("g"))
    gf = P.codomain[0]
    e = unit(gf)
    F = cx.Compose(cx.LeftPaste(e, None, *P.codomain), P)
    T, G = cx.trim_factorize(F)
    a = C("al")
    assert cx.Compose(T, cx.Promote(G, C("f"), C("g"))).apply(a) == F.apply(a)


def test_identity_shape_is_globe(C):
    assert isomorphic(cx.shape_of(cx.Identity(C("f"), C("g"))), globe(2))


def test_trim_contexts_are_round(C):
    lam = left_unitor(C("f"))
    F = cx.Compose(cx.LeftPaste(reverse(lam), None, *cx.RightPaste(unit(C("g")), None, C("f"), C("g")).codomain),
                   cx.RightPaste(unit(C("g")), None, C("f"), C("g")))
    assert cx.is_round_context(F)


def test_rounded_context_restores_roundness(C):
    R = cx.RightPaste(C("h"), None, C("a"), C("b"))
    RC = cx.rounded_context(R, [(C("f"), C("g"))])
    assert cx.is_round_context(RC)
    assert RC.apply(C("al")).is_round()
    assert cx.rounded_context(R, []) is R


def test_context_subdiagram_locates_copy(C):
    v = unit(C("f"))
    S = cx.ContextSubdiagram(v, "left", cx.Identity(C("f"), C("g")), v.poset.elements())
    d, sub = S.locate(C("al"))
    assert d.restrict(sub)[0] == v
    assert S.rewritable


def test_context_json_round_trip(pres, C):
    F = cx.Compose(cx.LeftPaste(unit(C("f")), None, C("f"), C("g")), cx.Identity(C("f"), C("g")))
    text = json.dumps(F.to_dict(), sort_keys=True)
    back = cx.context_from_dict(pres, json.loads(text))
    assert json.dumps(back.to_dict(), sort_keys=True) == text
    assert back.apply(C("al")) == F.apply(C("al"))


def test_shape_does_not_depend_on_the_decomposition():
    import random

    from diagkit import corpus

    rng = random.Random(31)
    checked = 0
    while checked < 30:
        pres = corpus.random_presentation(rng)
        a = corpus.random_round_diagram(rng, pres, max_dim=2, min_dim=1)
        F = corpus.random_context(rng, a.input, a.output)
        assert isomorphic(cx.shape_of(F), cx.shape_via_layering(F))
        checked += 1
