"""Natural equivalences between round contexts, context weak inverses, division.

A natural equivalence is a lazy expression tree.  Each node knows its index
pair (v, w), its source and target contexts, how to compute the component
at a round diagram a: v => w together with a certificate, and how to expand
the next level of naturality at a parallel pair (a, b).
"""

from __future__ import annotations

from . import context as cx
from .context import (
    ContextError,
    ContextSubdiagram,
    Identity,
    LeftPaste,
    Promote,
    RightPaste,
    TypeMismatch,
    locate,
    rounded_context,
    trim_factorize,
)
from .diagset import Diagram, paste_diagrams, paste_sub
from .equivcalc import (
    BudgetExhausted,
    ByDegeneracy,
    CertError,
    MissingInverse,
    cert_size,
    certify_cells,
    check_cert,
    compose_cert,
    inverse_data,
    trans,
)
from .ogp import MINUS, PLUS
from .structcells import (
    higher_unitor,
    left_unitor,
    pointwise_reverse,
    reverse,
    right_unitor,
    top_degenerate,
    unit,
    unit_copy,
    witness_of,
)


class NotWeaklyInvertible(ContextError):
    pass


class UnsupportedConstruction(CertError):
    """A construction outside what this implementation can build explicitly."""


def _deg(d: Diagram):
    return ByDegeneracy(witness_of(d))


def _whole(d: Diagram) -> frozenset:
    return frozenset(d.poset.elements())


def _carry(ref: Diagram, S, k: int, alpha: str, x: Diagram) -> frozenset:
    """Carry S from the (k, alpha)-boundary of ref to that of x."""
    region = _whole(ref) if k >= ref.dim else ref.shape.bd(k, alpha)
    sub, incl = ref.restrict(region)
    back = {y: i for i, y in enumerate(incl)}
    return locate(sub, frozenset(back[y] for y in S), x, x.shape.bd(k, alpha))


def _in_boundary(ref: Diagram, S, k: int, alpha: str) -> tuple:
    """The (k, alpha)-boundary of ref and S re-indexed inside it."""
    sub, incl = ref.restrict(ref.shape.bd(k, alpha))
    back = {y: i for i, y in enumerate(incl)}
    return sub, frozenset(back[y] for y in S)


def _pad(d: Diagram) -> Diagram:
    return paste_diagrams(d, unit(d.output))


def _cheap_inverse(d: Diagram, c) -> tuple:
    if isinstance(c, ByDegeneracy):
        r = reverse(c.witness)
        return r, _deg(r)
    if top_degenerate(d):
        r = pointwise_reverse(d)
        return r, certify_cells(r)
    data = inverse_data(d, c)
    return data.inverse, data.inverse_cert


class NatEquivExpr:
    """Base class.  Subclasses set v, w and implement the hooks."""

    v: Diagram
    w: Diagram

    def __init__(self):
        self._memo = {}

    @property
    def index(self) -> tuple:
        return self.v, self.w

    def source(self) -> cx.Context:
        raise NotImplementedError

    def target(self) -> cx.Context:
        raise NotImplementedError

    def check_index(self, a: Diagram) -> None:
        if a.dim != self.v.dim + 1 or a.input != self.v or a.output != self.w:
            raise TypeMismatch("diagram is not typed over the expression's index pair")

    def component(self, a: Diagram, check: bool = True) -> tuple:
        if check:
            self.check_index(a)
        for key, val in self._memo.items():
            if key is a:
                return val
        for key, val in self._memo.items():
            if key == a:
                return val
        val = self._component(a)
        self._memo[a] = val
        return val

    def _component(self, a: Diagram) -> tuple:
        raise NotImplementedError

    def naturality(self, a: Diagram, b: Diagram) -> "NatEquivExpr":
        _check_pair(self, a, b)
        return self._naturality(a, b)

    def _naturality(self, a, b):
        raise UnsupportedConstruction(f"no naturality expansion for {type(self).__name__}")

    def children(self) -> list:
        return []

    def to_dict(self) -> dict:
        out = {"kind": type(self).__name__}
        kids = self.children()
        if kids:
            out["args"] = [k.to_dict() for k in kids]
        return out

    def __repr__(self) -> str:
        kids = ", ".join(repr(k) for k in self.children())
        return f"{type(self).__name__}({kids})"


def _check_pair(theta: NatEquivExpr, a: Diagram, b: Diagram) -> None:
    theta.check_index(a)
    theta.check_index(b)


# basic families


class UnitFamily(NatEquivExpr):
    """The units on F a; F defaults to the identity context."""

    def __init__(self, v: Diagram, w: Diagram, F: cx.Context = None):
        super().__init__()
        self.v, self.w = v, w
        self.F = Identity(v, w) if F is None else F
        if self.F.domain[0] != v or self.F.domain[1] != w:
            raise TypeMismatch("context is not on the index pair")

    def source(self):
        return self.F

    def target(self):
        return self.F

    def _component(self, a):
        e = unit(self.F.apply(a, check=False))
        return e, _deg(e)

    def _naturality(self, a, b):
        if isinstance(self.F, Identity):
            return Compose(RightUnitorFamily(a, b), LeftUnitorFamily(a, b))
        return _unit_swap(Promote(self.F, a, b))


class HigherUnitorFamily(NatEquivExpr):
    """Unitors at a k-dimensional subdiagram iota of the (k, side) boundary.

    iota is a set of ids of v (side left) or of w (side right).
    """

    def __init__(self, v: Diagram, w: Diagram, k: int, iota=None, side: str = "left"):
        super().__init__()
        cx._parallel(v, w)
        if side not in ("left", "right"):
            raise ContextError(f"unknown side {side!r}")
        if not 0 <= k <= v.dim:
            raise TypeMismatch(f"k={k} is outside 0..{v.dim}")
        self.v, self.w, self.k, self.side = v, w, k, side
        self.alpha = MINUS if side == "left" else PLUS
        ref = self.ref
        region = _whole(ref) if k >= ref.dim else ref.shape.bd(k, self.alpha)
        self.iota = frozenset(region if iota is None else iota)
        if not self.iota <= region:
            raise TypeMismatch("subdiagram is not in the required boundary")

    @property
    def ref(self) -> Diagram:
        return self.v if self.side == "left" else self.w

    @property
    def z(self) -> Diagram:
        return self.ref.restrict(self.iota)[0]

    def _component(self, a):
        S = _carry(self.ref, self.iota, self.k, self.alpha, a)
        c = higher_unitor(a, self.k, S, self.side, check=False)
        return c, _deg(c)

    def _endpoints(self):
        m = self.v.dim
        if self.k == m:
            ez = unit(self.z)
            if self.side == "left":
                return Identity(self.v, self.w), LeftPaste(ez, self.iota, self.v, self.w)
            return RightPaste(ez, self.iota, self.v, self.w), Identity(self.v, self.w)
        if self.k != m - 1:
            raise UnsupportedConstruction(
                "endpoint contexts are only built for unitors of codimension one or two")
        ez = unit(self.z)
        v, w = self.v, self.w
        if self.side == "left":
            base, S0 = _in_boundary(v, self.iota, m - 1, MINUS)
            P = Promote(LeftPaste(ez, S0, v.input, v.output), v, w)
            lw = left_unitor(w, _carry(v, self.iota, m - 1, MINUS, w), check=False)
            lv = left_unitor(v, self.iota, check=False)
            src = RightPaste(lw, None, v, w)
            tgt = cx.Compose(LeftPaste(lv, None, *P.codomain), P)
            return src, tgt
        base, S0 = _in_boundary(v, self.iota, m - 1, PLUS)
        P = Promote(RightPaste(ez, S0, v.input, v.output), v, w)
        rw = right_unitor(w, _carry(v, self.iota, m - 1, PLUS, w), check=False)
        rv = right_unitor(v, self.iota, check=False)
        src = cx.Compose(RightPaste(rw, None, *P.codomain), P)
        tgt = LeftPaste(rv, None, v, w)
        return src, tgt

    def source(self):
        return self._endpoints()[0]

    def target(self):
        return self._endpoints()[1]

    def _naturality(self, a, b):
        S = _carry(self.ref, self.iota, self.k, self.alpha, a)
        return HigherUnitorFamily(a, b, self.k, S, self.side)

    def to_dict(self):
        return {"kind": type(self).__name__, "k": self.k, "side": self.side,
                "iota": sorted(self.iota)}


class LeftUnitorFamily(HigherUnitorFamily):
    """lambda_iota a: a => (unit on the subdiagram) pasted into a; iota in v."""

    def __init__(self, v: Diagram, w: Diagram, iota=None):
        super().__init__(v, w, v.dim, iota, "left")


class RightUnitorFamily(HigherUnitorFamily):
    """rho_iota a: a with a unit pasted on its output => a; iota in w."""

    def __init__(self, v: Diagram, w: Diagram, iota=None):
        super().__init__(v, w, v.dim, iota, "right")


class Pushforward(NatEquivExpr):
    """Along h: z => z' at a rewritable context subdiagram."""

    def __init__(self, csub: ContextSubdiagram, h: Diagram, hcert):
        super().__init__()
        if not csub.rewritable:
            raise TypeMismatch("context subdiagram is not rewritable")
        if h.input != csub.z:
            raise TypeMismatch("input of h is not the context subdiagram")
        self.csub, self.h, self.hcert = csub, h, hcert
        self.v, self.w = csub.context.domain

    def source(self):
        return self.csub.context

    def target(self):
        return self.csub.replaced(self.h).context

    def _component(self, a):
        fa, S = self.csub.locate(a)
        e = unit(fa)
        emb = unit_copy(fa, PLUS)
        T = frozenset(emb[x] for x in S)
        return compose_cert(self.h, self.hcert, e, _deg(e), T, form="subcp")

    def _naturality(self, a, b):
        F = self.csub.context
        P = Promote(F, a, b)
        fa, fb = P.codomain
        _, Sb = self.csub.locate(b)
        H = RightPaste(self.h, Sb, fa, fb)
        return LeftContext(H, _unit_swap(P))

    def to_dict(self):
        return {"kind": "Pushforward", "side": self.csub.side, "h": self.h.summary()}


# closure clauses


class Compose(NatEquivExpr):
    """theta then psi, componentwise theta a # psi a."""

    def __init__(self, theta: NatEquivExpr, psi: NatEquivExpr):
        super().__init__()
        if theta.v != psi.v or theta.w != psi.w:
            raise TypeMismatch("composed expressions have different index pairs")
        self.theta, self.psi = theta, psi
        self.v, self.w = theta.v, theta.w

    def children(self):
        return [self.theta, self.psi]

    def source(self):
        return self.theta.source()

    def target(self):
        return self.psi.target()

    def _component(self, a):
        t, tc = self.theta.component(a, check=False)
        p, pc = self.psi.component(a, check=False)
        return trans(t, tc, p, pc)

    def _naturality(self, a, b):
        ta = self.theta.component(a, check=False)[0]
        pb = self.psi.component(b, check=False)[0]
        nt = naturality_witness(self.theta, a, b)
        npsi = naturality_witness(self.psi, a, b)
        first = LeftContext(RightPaste(pb, None, ta.input, pb.input), nt)
        second = LeftContext(LeftPaste(ta, None, ta.output, pb.output), npsi)
        return Compose(first, second)


class LeftContext(NatEquivExpr):
    """H theta: components H(theta a) # unit(H G a)."""

    def __init__(self, H: cx.Context, theta: NatEquivExpr):
        super().__init__()
        self.H, self.theta = H, theta
        self.v, self.w = theta.v, theta.w

    def children(self):
        return [self.theta]

    def source(self):
        return cx.Compose(self.H, self.theta.source())

    def target(self):
        return cx.Compose(self.H, self.theta.target())

    def _component(self, a):
        t, _ = self.theta.component(a, check=False)
        d = _pad(self.H.apply(t, check=False))
        return d, certify_cells(d)

    def _naturality(self, a, b):
        H, theta = self.H, self.theta
        G = theta.target()
        ta = theta.component(a, check=False)[0]
        tb = theta.component(b, check=False)[0]
        fa, gb = ta.input, tb.output
        hg = cx.Compose(H, G)
        PH = Promote(H, fa, gb)
        hfa, hgb = PH.codomain
        K1 = cx.Compose(RightPaste(unit(hgb), None, hfa, hgb), PH)
        step1 = LeftContext(K1, naturality_witness(theta, a, b))
        PHG = Promote(hg, a, b)
        hga = PHG.codomain[0]
        hta = H.apply(ta, check=False)
        K3 = cx.Compose(RightPaste(unit(hgb), None, hga, hgb), PHG)
        step2 = LeftContext(LeftPaste(hta, None, hga, hgb),
                            RightContext(LeftUnitorFamily(hga, hgb), K3))
        K4 = cx.Compose(LeftPaste(unit(hga), None, hga, hgb), PHG)
        step3 = LeftContext(LeftPaste(hta, None, hga, hgb),
                            RightContext(RightUnitorFamily(hga, hgb), K4))
        return Compose(step1, Compose(step2, step3))


class RightContext(NatEquivExpr):
    """theta H: components theta(H a)."""

    def __init__(self, theta: NatEquivExpr, H: cx.Context):
        super().__init__()
        cv, cw = H.codomain
        if cv != theta.v or cw != theta.w:
            raise TypeMismatch("context codomain is not the expression's index pair")
        self.theta, self.H = theta, H
        self.v, self.w = H.domain

    def children(self):
        return [self.theta]

    def source(self):
        return cx.Compose(self.theta.source(), self.H)

    def target(self):
        return cx.Compose(self.theta.target(), self.H)

    def _component(self, a):
        return self.theta.component(self.H.apply(a, check=False), check=False)

    def _naturality(self, a, b):
        P = Promote(self.H, a, b)
        ha, hb = P.codomain
        return RightContext(naturality_witness(self.theta, ha, hb), P)


class WeakInversion(NatEquivExpr):
    """Componentwise weak inverses of theta.

    ``choose(d, cert)`` returns (inverse, certificate); the default reads
    the inverse off the certificate.
    """

    def __init__(self, theta: NatEquivExpr, choose=None):
        super().__init__()
        self.theta = theta
        self.choose = choose
        self.v, self.w = theta.v, theta.w
        self._data = {}

    def children(self):
        return [self.theta]

    def source(self):
        return self.theta.target()

    def target(self):
        return self.theta.source()

    def _component(self, a):
        t, tc = self.theta.component(a, check=False)
        if self.choose is not None:
            return self.choose(t, tc)
        return _cheap_inverse(t, tc)

    def data(self, a: Diagram):
        """Inverse data of theta a matching this expression's component."""
        for key, val in self._data.items():
            if key == a:
                return val
        t, tc = self.theta.component(a, check=False)
        if self.choose is not None:
            raise UnsupportedConstruction("invertors are only available for the default choice")
        val = inverse_data(t, tc)
        self._data[a] = val
        return val

    def _naturality(self, a, b):
        theta = self.theta
        F, G = theta.source(), theta.target()
        ta = theta.component(a, check=False)[0]
        tb = theta.component(b, check=False)[0]
        sa = self.component(a, check=False)[0]
        sb = self.component(b, check=False)[0]
        fa, fb = ta.input, tb.input
        ga, gb = ta.output, tb.output
        PG = Promote(G, a, b)
        PF = Promote(F, a, b)
        K = cx.Compose(RightPaste(sb, None, ga, gb), PG)
        step1 = RightContext(LeftUnitorFamily(ga, fb), K)
        h_a = self.data(a).h
        hcert = self.data(a).hcert
        ega = unit(ga)
        step2 = Pushforward(ContextSubdiagram(ega, "left", K, _whole(ega)), h_a, hcert)
        H3 = cx.Compose(LeftPaste(sa, None, fa, fb), RightPaste(sb, None, fa, gb))
        step3 = LeftContext(H3, WeakInversion(naturality_witness(theta, a, b)))
        z_b = self.data(b).z
        zcert = self.data(b).zcert
        tsb = paste_diagrams(tb, sb)
        inner4 = cx.Compose(LeftPaste(sa, None, fa, fb), PF)
        step4 = Pushforward(ContextSubdiagram(tsb, "right", inner4, _whole(tsb)), z_b, zcert)
        step5 = RightContext(RightUnitorFamily(ga, fb), inner4)
        return Compose(step1, Compose(step2, Compose(step3, Compose(step4, step5))))


class Derived(NatEquivExpr):
    """A named construction that delegates to the expression it builds."""

    def __init__(self, expr: NatEquivExpr, context: cx.Context = None):
        super().__init__()
        self.expr, self.context = expr, context
        self.v, self.w = expr.v, expr.w

    def children(self):
        return [self.expr]

    def source(self):
        return self.expr.source()

    def target(self):
        return self.expr.target()

    def _component(self, a):
        return self.expr.component(a, check=False)

    def _naturality(self, a, b):
        return naturality_witness(self.expr, a, b)


class Eversion(Derived):
    pass


class RoundingUnit(Derived):
    pass


class RoundingFunctor(Derived):
    pass


def naturality_witness(theta: NatEquivExpr, a: Diagram, b: Diagram) -> NatEquivExpr:
    """Expression from F_{a,b}(-) # theta b to theta a # G_{a,b}(-)."""
    return theta.naturality(a, b)


def naturality_endpoints(theta: NatEquivExpr, a: Diagram, b: Diagram) -> tuple:
    """The contexts F_{a,b}(-) # theta b and theta a # G_{a,b}(-)."""
    ta = theta.component(a)[0]
    tb = theta.component(b)[0]
    PF = Promote(theta.source(), a, b)
    PG = Promote(theta.target(), a, b)
    fa, fb = PF.codomain
    ga, gb = PG.codomain
    src = cx.Compose(RightPaste(tb, None, fa, fb), PF)
    tgt = cx.Compose(LeftPaste(ta, None, ga, gb), PG)
    return src, tgt


def _unit_swap(P: cx.Context) -> NatEquivExpr:
    """P(-) # unit to unit # P(-), through the unitors of the padded sides."""
    fa, fb = P.codomain
    RF = cx.Compose(RightPaste(unit(fb), None, fa, fb), P)
    LF = cx.Compose(LeftPaste(unit(fa), None, fa, fb), P)
    return Compose(RightContext(LeftUnitorFamily(fa, fb), RF),
                   RightContext(RightUnitorFamily(fa, fb), LF))


def _image(P: cx.Context, d: Diagram) -> frozenset:
    return frozenset(P.apply_tracked(d, check=False)[1])


def _drop_inner_unit(left: Diagram, K: cx.Context, iota, right: Diagram) -> NatEquivExpr:
    """left # (K(-) with a unit at iota) # right to left # K(-) # right.

    ``K`` is a context whose output contains the unit's boundary at iota;
    the right unitor acts on the round diagram left # K(-).
    """
    kv, kw = K.codomain
    LK = cx.Compose(LeftPaste(left, None, kv, kw), K)
    p = left.input
    return LeftContext(RightPaste(right, None, p, kw),
                       RightContext(RightUnitorFamily(p, kw, iota), LK))


# rounding lemmas


def one_step_rounding(G: cx.Context, F: cx.Context, a: Diagram, b: Diagram) -> NatEquivExpr:
    """G F_{a,b} to G R_{a,b} F.

    G is split as l # G'(-) # r with G' promoted from one dimension down;
    the unit on F b is removed by a right unitor acting on l # G' F_{a,b}(-)
    and the result is inverted.
    """
    P = Promote(F, a, b)
    fa, fb = P.codomain
    if G.dim >= 2 and not G.is_trim:
        T, G1 = trim_factorize(G)
        PG1 = Promote(G1, fa, fb)
        inner = cx.Compose(PG1, P)
        iota = _image(PG1, fb)
    else:
        T, inner, iota = G, P, _whole(fb)
    ell, r = cx.context_layering(T)[-1]
    k = T.dim - 1
    iv, iw = inner.codomain
    K = inner
    if ell.dim > k:
        K = cx.Compose(LeftPaste(ell, None, iv, iw), inner)
    kv, kw = K.codomain
    theta = RightContext(RightUnitorFamily(kv, kw, iota), K)
    if r.dim > k:
        theta = LeftContext(RightPaste(r, None, kv, kw), theta)
    return WeakInversion(theta)


def _check_chain_pair(ctx: cx.Context, a: Diagram, b: Diagram) -> None:
    v, w = ctx.domain
    if a.dim != ctx.dim or a.input != v or a.output != w or b.input != v or b.output != w:
        raise cx.ChainMismatch("pair is not typed over the current context's domain")


def eversion(theta: NatEquivExpr, chain: list) -> tuple:
    """(C, theta_chain) with theta_chain: R F => C R G at the end of the chain."""
    F, G = theta.source(), theta.target()
    C = Identity(*G.codomain)
    th = theta
    for a, b in chain:
        _check_chain_pair(F, a, b)
        star = WeakInversion(th)
        ta = th.component(a, check=False)[0]
        tb = th.component(b, check=False)[0]
        sb = star.component(b, check=False)[0]
        PG = Promote(G, a, b)
        ga, gb = PG.codomain
        PC = Promote(C, ga, gb)
        cga, cgb = PC.codomain
        fa, fb = ta.input, tb.input
        C_new = cx.compose(LeftPaste(ta, None, cga, fb), RightPaste(sb, None, cga, cgb), PC)
        F_new = rounded_context(F, [(a, b)])
        G_new = rounded_context(G, [(a, b)])
        s1 = _drop_inner_unit(ta, cx.Compose(PC, PG), _image(PC, gb), sb)
        s2 = LeftContext(RightPaste(sb, None, fa, cgb), WeakInversion(naturality_witness(th, a, b)))
        data = star.data(b)
        tsb = paste_diagrams(tb, sb)
        s3 = Pushforward(ContextSubdiagram(tsb, "right", Promote(F, a, b), _whole(tsb)),
                         data.z, data.zcert)
        th = Eversion(WeakInversion(Compose(s1, Compose(s2, s3))), C_new)
        C, F, G = C_new, F_new, G_new
    return C, th


def rounding_unit(v: Diagram, w: Diagram, chain: list) -> tuple:
    """(J, eta) with eta: identity => J R I at the end of the chain."""
    eta = UnitFamily(v, w)
    J = Identity(v, w)
    RI = Identity(v, w)
    for a, b in chain:
        _check_chain_pair(RI, a, b)
        star = WeakInversion(eta)
        ea = eta.component(a, check=False)[0]
        eb = eta.component(b, check=False)[0]
        sb = star.component(b, check=False)[0]
        PR = Promote(RI, a, b)
        ra, rb = PR.codomain
        PJ = Promote(J, ra, rb)
        ja, jb = PJ.codomain
        J_new = cx.compose(LeftPaste(ea, None, ja, b), RightPaste(sb, None, ja, jb), PJ)
        RI_new = rounded_context(RI, [(a, b)])
        s1 = _drop_inner_unit(ea, cx.Compose(PJ, PR), _image(PJ, rb), sb)
        s2 = LeftContext(RightPaste(sb, None, a, jb), WeakInversion(naturality_witness(eta, a, b)))
        data = star.data(b)
        esb = paste_diagrams(eb, sb)
        s3 = Pushforward(ContextSubdiagram(esb, "right", Identity(a, b), _whole(esb)),
                         data.z, data.zcert)
        s4 = RightUnitorFamily(a, b)
        eta = RoundingUnit(WeakInversion(Compose(s1, Compose(s2, Compose(s3, s4)))), J_new)
        J, RI = J_new, RI_new
    return J, eta


def rounding_functor(F: cx.Context, G: cx.Context, chain: list) -> tuple:
    """(M, mu) with mu: R(GF) => M (R' G) R F at the end of the chain.

    R' G is rounded along the image of the chain under the rounded F.
    """
    GF = cx.Compose(G, F)
    v, w = F.domain
    mu = UnitFamily(v, w, GF)
    M = Identity(*GF.codomain)
    RF, RG, RGF = F, G, GF
    for a, b in chain:
        _check_chain_pair(RF, a, b)
        star = WeakInversion(mu)
        ma = mu.component(a, check=False)[0]
        mb = mu.component(b, check=False)[0]
        sb = star.component(b, check=False)[0]
        PF = Promote(RF, a, b)
        a2, b2 = PF.codomain
        PG = Promote(RG, a2, b2)
        ga, gb = PG.codomain
        PM = Promote(M, ga, gb)
        mga, mgb = PM.codomain
        gfa, gfb = ma.input, mb.input
        M_new = cx.compose(LeftPaste(ma, None, mga, gfb), RightPaste(sb, None, mga, mgb), PM)
        RF_new = rounded_context(RF, [(a, b)])
        RG_new = rounded_context(RG, [(a2, b2)])
        RGF_new = rounded_context(RGF, [(a, b)])
        s1 = _drop_inner_unit(ma, cx.compose(PM, PG, RF_new), _image(PM, gb), sb)
        _, e1 = PG.apply_tracked(b2, check=False)
        _, e2 = PM.apply_tracked(gb, check=False)
        s2 = _drop_inner_unit(ma, cx.compose(PM, PG, PF), frozenset(e2[e1[x]] for x in b2.poset.elements()), sb)
        s3 = LeftContext(RightPaste(sb, None, gfa, mgb), WeakInversion(naturality_witness(mu, a, b)))
        data = star.data(b)
        msb = paste_diagrams(mb, sb)
        s4 = Pushforward(ContextSubdiagram(msb, "right", Promote(RGF, a, b), _whole(msb)),
                         data.z, data.zcert)
        mu = RoundingFunctor(WeakInversion(Compose(s1, Compose(s2, Compose(s3, s4)))), M_new)
        M, RF, RG, RGF = M_new, RF_new, RG_new, RGF_new
    return M, mu


# weak inverses of contexts


class ContextInverse:
    """E* with theta: E*E => identity and psi: E E* => identity.

    psi is None when the construction for it is not available.
    """

    def __init__(self, E, context, theta, psi, steps):
        self.E, self.context, self.theta, self.psi = E, context, theta, psi
        self.steps = steps

    def to_dict(self):
        return {"inverse": repr(self.context), "theta": self.theta.to_dict(),
                "psi": None if self.psi is None else self.psi.to_dict(), "steps": self.steps}


def _leaf_inverse(E) -> tuple:
    if E.cert is None:
        raise NotWeaklyInvertible(f"{E!r} has no certificate for its pasted diagram")
    return inverse_data(E.u, E.cert)


def _trim_inverse(E: cx.Context, steps: list) -> ContextInverse:
    v, w = E.domain
    k = E.dim - 1
    if isinstance(E, Identity):
        steps.append("identity")
        return ContextInverse(E, Identity(v, w), UnitFamily(v, w), UnitFamily(v, w), steps)
    if isinstance(E, LeftPaste):
        steps.append("left paste")
        e, data = E.u, _leaf_inverse(E)
        v1 = E.codomain[0]
        j = frozenset(E.target_embedding())
        star = LeftPaste(data.inverse, j, v1, w, cert=data.inverse_cert)
        hr, hrc = _cheap_inverse(data.h, data.hcert)
        se = paste_diagrams(data.inverse, e)
        vp, eu, _ = paste_sub(se, v, k, E.iota, "left")
        theta = Compose(Pushforward(ContextSubdiagram(vp, "left", Identity(v, w), eu), hr, hrc),
                        WeakInversion(LeftUnitorFamily(v, w, E.iota)))
        es = paste_diagrams(e, data.inverse)
        vp2, eu2, _ = paste_sub(es, v1, k, j, "left")
        psi = Compose(Pushforward(ContextSubdiagram(vp2, "left", Identity(v1, w), eu2),
                                  data.z, data.zcert),
                      WeakInversion(LeftUnitorFamily(v1, w, j)))
        return ContextInverse(E, star, theta, psi, steps)
    if isinstance(E, RightPaste):
        steps.append("right paste")
        e, data = E.u, _leaf_inverse(E)
        w1 = E.codomain[1]
        j = frozenset(E.target_embedding())
        star = RightPaste(data.inverse, j, v, w1, cert=data.inverse_cert)
        es = paste_diagrams(e, data.inverse)
        vp, _, ev = paste_sub(w, es, k, E.iota, "right")
        theta = Compose(Pushforward(ContextSubdiagram(vp, "right", Identity(v, w), ev),
                                    data.z, data.zcert),
                        RightUnitorFamily(v, w, E.iota))
        hr, hrc = _cheap_inverse(data.h, data.hcert)
        se = paste_diagrams(data.inverse, e)
        vp2, _, ev2 = paste_sub(w1, se, k, j, "right")
        psi = Compose(Pushforward(ContextSubdiagram(vp2, "right", Identity(v, w1), ev2), hr, hrc),
                      RightUnitorFamily(v, w1, j))
        return ContextInverse(E, star, theta, psi, steps)
    if isinstance(E, cx.Compose):
        steps.append("composite")
        Gi = _trim_inverse(E.outer, steps)
        Fi = _trim_inverse(E.inner, steps)
        G, F = E.outer, E.inner
        star = cx.Compose(Fi.context, Gi.context)
        theta = Compose(LeftContext(Fi.context, RightContext(Gi.theta, F)), Fi.theta)
        psi = Compose(LeftContext(G, RightContext(Fi.psi, Gi.context)), Gi.psi)
        return ContextInverse(E, star, theta, psi, steps)
    raise ContextError(f"{E!r} is not trim")


def weak_inverse_context(E: cx.Context) -> ContextInverse:
    """A weak inverse of a weakly invertible round context.

    Trim contexts get both directions.  For contexts with promotions only
    the E*E direction is constructed; psi is None.
    """
    steps = []
    if not E.is_weakly_invertible:
        raise NotWeaklyInvertible("some pasted diagram has no certificate")
    if E.is_trim:
        return _trim_inverse(E, steps)
    return _promoted_inverse(E, steps)


def _promoted_inverse(E: cx.Context, steps: list) -> ContextInverse:
    v, w = E.domain
    T, G = trim_factorize(E)
    steps.append("trim factorization")
    if not cx.is_round_context(Promote(G, v, w)):
        # the rounding steps need unitors on G's promoted action, which only
        # exist when that action stays round
        raise UnsupportedConstruction("the promoted part of the context does not act roundly")
    Ti = _trim_inverse(T, steps)
    Gi = weak_inverse_context(G)
    steps.append("rounding of the lower inverse")
    GR, theta_rg = _rounded_inverse(G, Gi, v, w)
    star = cx.Compose(GR, Ti.context)
    RG = rounded_context(G, [(v, w)])
    stepA = one_step_rounding(cx.compose(GR, Ti.context, T), G, v, w)
    stepB = LeftContext(GR, RightContext(Ti.theta, RG))
    theta = Compose(stepA, Compose(stepB, theta_rg))
    return ContextInverse(E, star, theta, None, steps)


def _rounded_inverse(G: cx.Context, Gi: ContextInverse, a: Diagram, b: Diagram) -> tuple:
    """(G_R, proof G_R R_{a,b} G => identity) from a weak inverse of G."""
    v0, w0 = G.domain
    J, eta = rounding_unit(v0, w0, [(a, b)])
    C, th = eversion(WeakInversion(Gi.theta), [(a, b)])
    M, mu = rounding_functor(G, Gi.context, [(a, b)])
    ga, gb = G.apply(a, check=False), G.apply(b, check=False)
    RGs = rounded_context(Gi.context, [(ga, gb)])
    GR = cx.compose(J, C, M, RGs)
    proof = WeakInversion(Compose(eta, Compose(LeftContext(J, th), LeftContext(cx.Compose(J, C), mu))))
    return GR, proof


# division


class DivisionResult:
    def __init__(self, solution, witness, cert, verdict, trace):
        self.solution, self.witness, self.cert = solution, witness, cert
        self.verdict, self.trace = verdict, trace

    def to_dict(self) -> dict:
        return {"solution": self.solution.to_dict(),
                "witness": None if self.witness is None else self.witness.to_dict(),
                "verdict": None if self.verdict is None else self.verdict.to_dict(),
                "trace": self.trace}


def _checked(d: Diagram, cert, depth: int, budget) -> object:
    if budget is not None and cert_size(cert) > budget:
        raise BudgetExhausted(f"certificate has {cert_size(cert)} nodes, budget is {budget}")
    verdict = check_cert(d, cert, depth)
    if verdict.status == "exhausted":
        raise BudgetExhausted(f"depth {depth} is not enough: {verdict.message}")
    return verdict


def divide(E: cx.Context, b: Diagram, depth: int = 2, budget=None, inverse=None) -> DivisionResult:
    """Solve E x = b up to equivalence; the witness has type E(E* b) => b."""
    if b.dim != E.dim:
        raise TypeMismatch("diagram dimension differs from the context dimension")
    v1, w1 = E.codomain
    if b.input != v1 or b.output != w1:
        raise TypeMismatch("diagram is not typed over the context's codomain")
    inv = weak_inverse_context(E) if inverse is None else inverse
    a = inv.context.apply(b)
    trace = [{"step": s} for s in inv.steps]
    trace.append({"step": "apply inverse", "context": repr(inv.context)})
    if inv.psi is None:
        raise UnsupportedConstruction("no witness for E E* => identity on promoted contexts")
    wit, cert = inv.psi.component(b)
    trace.append({"step": "component", "expr": inv.psi.to_dict()})
    verdict = _checked(wit, cert, depth, budget)
    trace.append({"step": "check", "status": verdict.status, "depth": depth})
    return DivisionResult(a, wit, cert, verdict, trace)


def round_trip(E: cx.Context, a: Diagram, depth: int = 2, budget=None, inverse=None) -> DivisionResult:
    """a' = E*(E a) with a certified equivalence a' => a."""
    inv = weak_inverse_context(E) if inverse is None else inverse
    b = E.apply(a)
    a2 = inv.context.apply(b)
    wit, cert = inv.theta.component(a)
    trace = [{"step": s} for s in inv.steps]
    trace.append({"step": "component", "expr": inv.theta.to_dict()})
    if wit.input != a2 or wit.output != a:
        raise TypeMismatch("round-trip witness has the wrong type")
    verdict = _checked(wit, cert, depth, budget)
    trace.append({"step": "check", "status": verdict.status, "depth": depth})
    return DivisionResult(a2, wit, cert, verdict, trace)


def weakly_unique(E: cx.Context, a1: Diagram, a2: Diagram, e: Diagram, ecert, inverse=None) -> tuple:
    """From e: E a1 => E a2 build a1 => a2 with a certificate."""
    inv = weak_inverse_context(E) if inverse is None else inverse
    if e.input != E.apply(a1) or e.output != E.apply(a2):
        raise TypeMismatch("e does not relate E a1 and E a2")
    t1, c1 = inv.theta.component(a1)
    t2, c2 = inv.theta.component(a2)
    s1, sc1 = _cheap_inverse(t1, c1)
    mid = _pad(inv.context.apply(e, check=False))
    midc = certify_cells(mid)
    x, xc = trans(s1, sc1, mid, midc)
    return trans(x, xc, t2, c2)
