"""One-hole contexts acting on diagrams of a fixed type.

A context is an immutable syntax tree.  Applying it pastes its data around
the argument; promotion lets a context act on diagrams one dimension up.
"""

from __future__ import annotations

from .ogp import MINUS, PLUS, find_isomorphism
from .diagset import (
    Diagram,
    DiagramError,
    NotParallel,
    Presentation,
    paste_diagrams,
    paste_sub,
    substitute_diagram,
)


class ContextError(DiagramError):
    pass


class TypeMismatch(ContextError):
    pass


class DimensionTooLow(ContextError):
    pass


class ChainMismatch(ContextError):
    pass


def locate(src: Diagram, S, target: Diagram, region) -> frozenset:
    """Carry the subset S of src along the isomorphism of src onto target|region."""
    sub, incl = target.restrict(frozenset(region))
    f = find_isomorphism(src.poset, sub.poset, src.labels, sub.labels)
    if f is None:
        raise TypeMismatch("boundary does not match the context type")
    return frozenset(incl[f(x)] for x in S)


def embedding(src: Diagram, target: Diagram, region) -> tuple:
    """The isomorphism of src onto target restricted to region, as a tuple."""
    sub, incl = target.restrict(frozenset(region))
    f = find_isomorphism(src.poset, sub.poset, src.labels, sub.labels)
    if f is None:
        raise TypeMismatch("boundary does not match the context type")
    return tuple(incl[f(x)] for x in src.poset.elements())


def _whole(d: Diagram) -> frozenset:
    return frozenset(d.poset.elements())


class Context:
    """Base class; subclasses fix the clause."""

    v: Diagram
    w: Diagram

    @property
    def dim(self) -> int:
        return self.v.dim + 1

    @property
    def domain(self) -> tuple:
        return self.v, self.w

    @property
    def codomain(self) -> tuple:
        raise NotImplementedError

    @property
    def is_trim(self) -> bool:
        return all(not isinstance(n, Promote) for n in self.nodes())

    @property
    def is_weakly_invertible(self) -> bool:
        return all(n.cert is not None for n in self.nodes() if isinstance(n, (LeftPaste, RightPaste)))

    def nodes(self):
        yield self

    def check_argument(self, a: Diagram) -> None:
        k = self.dim - 1
        if a.dim < self.dim:
            raise TypeMismatch(f"argument has dimension {a.dim}, context needs at least {self.dim}")
        if a.boundary(k, MINUS) != self.v or a.boundary(k, PLUS) != self.w:
            raise TypeMismatch("argument does not have the context's boundary type")

    def apply(self, a: Diagram, check: bool = True) -> Diagram:
        if check:
            self.check_argument(a)
        return self._act(a)[0]

    def apply_tracked(self, a: Diagram, check: bool = True) -> tuple:
        """F a together with the embedding of a into it."""
        if check:
            self.check_argument(a)
        return self._act(a)

    def __call__(self, a: Diagram) -> Diagram:
        return self.apply(a)

    def _act(self, a: Diagram) -> tuple:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


class Identity(Context):
    def __init__(self, v: Diagram, w: Diagram):
        _parallel(v, w)
        self.v, self.w = v, w

    @property
    def codomain(self) -> tuple:
        return self.v, self.w

    def _act(self, a):
        return a, tuple(a.poset.elements())

    def __repr__(self):
        return "id"

    def to_dict(self):
        return {"kind": "id", "v": self.v.to_dict(), "w": self.w.to_dict()}


class LeftPaste(Context):
    """a -> u pasted into the input of a at iota, a subset of v."""

    def __init__(self, u: Diagram, iota, v: Diagram, w: Diagram, cert=None):
        _parallel(v, w)
        self.u, self.v, self.w, self.cert = u, v, w, cert
        self.iota = frozenset(_whole(v) if iota is None else iota)
        if u.dim != v.dim + 1:
            raise TypeMismatch("pasted diagram must be one dimension above the boundary pair")
        if v.restrict(self.iota)[0] != u.output:
            raise TypeMismatch("output of the pasted diagram does not match the subdiagram")
        self._cod = None

    @property
    def codomain(self):
        if self._cod is None:
            self._cod = (substitute_diagram(self.v, self.u.input, self.iota)[0], self.w)
        return self._cod

    def target_embedding(self) -> tuple:
        """Where the input of u sits in the new input boundary."""
        _, _, ew = substitute_diagram(self.v, self.u.input, self.iota)
        return ew

    def _act(self, a):
        d, _, ea = self.act_full(a)
        return d, tuple(ea)

    def act_full(self, a):
        """(u pasted into a, embedding of u, embedding of a)."""
        k = self.dim - 1
        S = locate(self.v, self.iota, a, a.shape.bd(k, MINUS))
        return paste_sub(self.u, a, k, S, "left")

    def __repr__(self):
        return f"lp({self.u.summary()})"

    def to_dict(self):
        return {"kind": "lp", "u": self.u.to_dict(), "iota": sorted(self.iota),
                "v": self.v.to_dict(), "w": self.w.to_dict()}


class RightPaste(Context):
    """a -> u pasted onto the output of a at iota, a subset of w."""

    def __init__(self, u: Diagram, iota, v: Diagram, w: Diagram, cert=None):
        _parallel(v, w)
        self.u, self.v, self.w, self.cert = u, v, w, cert
        self.iota = frozenset(_whole(w) if iota is None else iota)
        if u.dim != w.dim + 1:
            raise TypeMismatch("pasted diagram must be one dimension above the boundary pair")
        if w.restrict(self.iota)[0] != u.input:
            raise TypeMismatch("input of the pasted diagram does not match the subdiagram")
        self._cod = None

    @property
    def codomain(self):
        if self._cod is None:
            self._cod = (self.v, substitute_diagram(self.w, self.u.output, self.iota)[0])
        return self._cod

    def target_embedding(self) -> tuple:
        _, _, ew = substitute_diagram(self.w, self.u.output, self.iota)
        return ew

    def _act(self, a):
        d, _, ea = self.act_full(a)
        return d, tuple(ea)

    def act_full(self, a):
        """(a with u pasted on, embedding of u, embedding of a)."""
        k = self.dim - 1
        S = locate(self.w, self.iota, a, a.shape.bd(k, PLUS))
        d, ea, eu = paste_sub(a, self.u, k, S, "right")
        return d, eu, ea

    def __repr__(self):
        return f"rp({self.u.summary()})"

    def to_dict(self):
        return {"kind": "rp", "u": self.u.to_dict(), "iota": sorted(self.iota),
                "v": self.v.to_dict(), "w": self.w.to_dict()}


class Compose(Context):
    """outer after inner."""

    def __init__(self, outer: Context, inner: Context):
        if outer.dim != inner.dim:
            raise TypeMismatch("composed contexts have different dimensions")
        cv, cw = inner.codomain
        if cv != outer.v or cw != outer.w:
            raise TypeMismatch("codomain of the inner context is not the domain of the outer one")
        self.outer, self.inner = outer, inner
        self.v, self.w = inner.v, inner.w

    @property
    def codomain(self):
        return self.outer.codomain

    def nodes(self):
        yield self
        yield from self.outer.nodes()
        yield from self.inner.nodes()

    def _act(self, a):
        b, e1 = self.inner._act(a)
        c, e2 = self.outer._act(b)
        return c, tuple(e2[x] for x in e1)

    def __repr__(self):
        return f"comp({self.outer!r},{self.inner!r})"

    def to_dict(self):
        return {"kind": "comp", "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}


class Promote(Context):
    """The action of a lower-dimensional context on diagrams of type v => w."""

    def __init__(self, inner: Context, v: Diagram, w: Diagram):
        _parallel(v, w)
        if v.dim != inner.dim:
            raise TypeMismatch("promotion pair must have the dimension of the context")
        if v.input != inner.v or v.output != inner.w:
            raise TypeMismatch("promotion pair is not typed over the context's domain")
        self.inner, self.v, self.w = inner, v, w
        self._cod = None

    @property
    def codomain(self):
        if self._cod is None:
            self._cod = (self.inner.apply(self.v, check=False), self.inner.apply(self.w, check=False))
        return self._cod

    def nodes(self):
        yield self
        yield from self.inner.nodes()

    def _act(self, a):
        return self.inner._act(a)

    def __repr__(self):
        return f"promote({self.inner!r})"

    def to_dict(self):
        return {"kind": "promote", "inner": self.inner.to_dict(),
                "v": self.v.to_dict(), "w": self.w.to_dict()}


def _parallel(v: Diagram, w: Diagram) -> None:
    if v.dim != w.dim:
        raise NotParallel("boundary pair has mixed dimensions")
    n = v.dim
    if n > 0 and (v.input != w.input or v.output != w.output):
        raise NotParallel("boundary pair is not parallel")


def compose(*ctxs: Context) -> Context:
    """compose(F, G, H) acts as F(G(H(-)))."""
    out = ctxs[-1]
    for c in reversed(ctxs[:-1]):
        out = Compose(c, out)
    return out


def context_from_dict(pres: Presentation, data: dict) -> Context:
    kind = data["kind"]
    D = lambda key: Diagram.from_dict(pres, data[key])  # noqa: E731
    if kind == "id":
        return Identity(D("v"), D("w"))
    if kind == "lp":
        return LeftPaste(D("u"), data["iota"], D("v"), D("w"))
    if kind == "rp":
        return RightPaste(D("u"), data["iota"], D("v"), D("w"))
    if kind == "comp":
        return Compose(context_from_dict(pres, data["outer"]), context_from_dict(pres, data["inner"]))
    if kind == "promote":
        return Promote(context_from_dict(pres, data["inner"]), D("v"), D("w"))
    raise ContextError(f"unknown context kind {kind!r}")


# layering


def cp(x: Diagram, y: Diagram, k: int) -> Diagram:
    """Pasting along the full k-boundary, skipping factors of dimension <= k."""
    if x.dim <= k:
        return y
    if y.dim <= k:
        return x
    return paste_diagrams(x, y, k)


def context_layering(F: Context) -> list:
    """Pairs (l_i, r_i), i = 1..dim F, with F a = l_k (... (l_1 a r_1) ...) r_k."""
    k = F.dim
    v, w = F.domain
    if isinstance(F, Identity):
        return [(v.boundary(i - 1, MINUS), w.boundary(i - 1, PLUS)) for i in range(1, k + 1)]
    if isinstance(F, (LeftPaste, RightPaste)):
        out = [(v.boundary(i - 1, MINUS), w.boundary(i - 1, PLUS)) for i in range(1, k)]
        if isinstance(F, LeftPaste):
            ell = paste_sub(F.u, v, k - 1, F.iota, "left")[0]
            out.append((ell, w))
        else:
            r = paste_sub(w, F.u, k - 1, F.iota, "right")[0]
            out.append((v, r))
        return out
    if isinstance(F, Promote):
        gv, gw = F.codomain
        return context_layering(F.inner) + [(gv, gw)]
    if isinstance(F, Compose):
        lo = context_layering(F.inner)
        hi = context_layering(F.outer)
        ls, rs = [], []
        for i in range(k):
            if i == 0:
                ls.append(cp(hi[0][0], lo[0][0], 0))
                rs.append(cp(lo[0][1], hi[0][1], 0))
                continue
            # the inner layer only needs whiskering by the outer lower layers
            mid_l = apply_layering(hi[:i], lo[i][0])
            mid_r = apply_layering(hi[:i], lo[i][1])
            ls.append(cp(hi[i][0], mid_l, i))
            rs.append(cp(mid_r, hi[i][1], i))
        return list(zip(ls, rs))
    raise ContextError(f"unknown context {F!r}")


def apply_layering(layers: list, a: Diagram) -> Diagram:
    x = a
    for i, (ell, r) in enumerate(layers):
        x = cp(cp(ell, x, i), r, i)
    return x


# trim factorization


def _push(G: Context, T: Context) -> Context:
    """T' with Promote(G) after T acting as T' after Promote(G); T trim."""
    if isinstance(T, Identity):
        return Identity(G.apply(T.v, check=False), G.apply(T.w, check=False))
    if isinstance(T, Compose):
        inner = _push(G, T.inner)
        outer = _push(G, T.outer)
        return Compose(outer, inner)
    if isinstance(T, (LeftPaste, RightPaste)):
        gv, gw = G.apply(T.v, check=False), G.apply(T.w, check=False)
        # G whiskers the boundary of the whole hole type, so u is first
        # padded to the whole of v (or w) before it is pushed through G
        k = T.dim
        if isinstance(T, LeftPaste):
            padded = T.u if T.iota == _whole(T.v) else paste_sub(T.u, T.v, k - 1, T.iota, "left")[0]
        else:
            padded = T.u if T.iota == _whole(T.w) else paste_sub(T.w, T.u, k - 1, T.iota, "right")[0]
        gu = G.apply(padded, check=False)
        cert = _pushed_cert(gu, T.cert)
        if isinstance(T, LeftPaste):
            return LeftPaste(gu, None, gv, gw, cert)
        return RightPaste(gu, None, gv, gw, cert)
    raise ContextError(f"{T!r} is not trim")


def _pushed_cert(d: Diagram, cert):
    if cert is None:
        return None
    from .equivcalc import certify_cells

    try:
        return certify_cells(d)
    except DiagramError:
        return None


def trim_factorize(F: Context) -> tuple:
    """(T, G) with T trim and F acting as T after Promote(G) on F's domain."""
    k = F.dim
    if k <= 1:
        raise DimensionTooLow("factorization needs a context of dimension at least 2")
    v, w = F.domain
    if F.is_trim:
        return F, Identity(v.input, v.output)
    if isinstance(F, Promote):
        gv, gw = F.codomain
        return Identity(gv, gw), F.inner
    if isinstance(F, Compose):
        T1, G1 = trim_factorize(F.outer)
        T2, G2 = trim_factorize(F.inner)
        moved = _push(G1, T2)
        return Compose(T1, moved), Compose(G1, G2)
    raise ContextError(f"cannot factorize {F!r}")


def shape_of(F: Context):
    """The molecule obtained by applying F to a freely adjoined cell."""
    hole, _ = hole_cell(F)
    return F.apply(hole, check=False).shape


def hole_cell(F: Context) -> tuple:
    """A fresh cell of F's domain type in an extended presentation."""
    v, w = F.domain
    ext = Presentation.from_dict(v.pres.to_dict())
    name = "_hole"
    while name in ext:
        name += "_"
    ext.add(name, Diagram(ext, v.shape, v.labels), Diagram(ext, w.shape, w.labels))
    return ext.cell(name), ext


def shape_via_layering(F: Context):
    hole, _ = hole_cell(F)
    return apply_layering(context_layering(F), hole).shape


def is_round_context(F: Context) -> bool:
    return shape_of(F).is_round()


# rounded higher contexts


def rounded_context(F: Context, chain: list) -> Context:
    """The unit-padded action of F on round diagrams typed over its domain.

    ``chain`` lists parallel pairs (a_1, b_1), (a_2, b_2), ... with each
    pair typed over the previous one and the first over F's domain.
    """
    from .structcells import unit

    cur = F
    for a, b in chain:
        v, w = cur.domain
        if a.dim != cur.dim or a.input != v or a.output != w or b.input != v or b.output != w:
            raise ChainMismatch("pair is not typed over the current context's domain")
        P = Promote(cur, a, b)
        fa, fb = P.codomain
        e = unit(fb)
        cur = Compose(RightPaste(e, None, fa, fb, cert=_unit_cert(e)), P)
    return cur


def _unit_cert(e: Diagram):
    from .equivcalc import ByDegeneracy
    from .structcells import witness_of

    return ByDegeneracy(witness_of(e))


# context subdiagrams


class ContextSubdiagram:
    """A subdiagram iota of v' where the context is v' # F'(-) or F'(-) # v'."""

    def __init__(self, vprime: Diagram, side: str, inner: Context, iota):
        if side not in ("left", "right"):
            raise ContextError(f"unknown side {side!r}")
        self.vprime, self.side, self.inner = vprime, side, inner
        self.iota = frozenset(iota)
        cv, cw = inner.codomain
        if vprime.dim != inner.dim:
            raise TypeMismatch("only subdiagrams of a top-dimensional flank are supported")
        if side == "left":
            self.context = Compose(LeftPaste(vprime, None, cv, cw), inner)
        else:
            self.context = Compose(RightPaste(vprime, None, cv, cw), inner)

    @property
    def z(self) -> Diagram:
        return self.vprime.restrict(self.iota)[0]

    @property
    def rewritable(self) -> bool:
        from .ogp import is_round, subset_dim

        P = self.vprime.poset
        return subset_dim(P, self.iota) == self.vprime.dim and is_round(P, self.iota)

    def locate(self, a: Diagram) -> tuple:
        """(F a, the subdiagram of F a determined by iota)."""
        b, _ = self.inner.apply_tracked(a)
        d, ev, _ = self.context.outer.act_full(b)
        return d, frozenset(ev[x] for x in self.iota)

    def replaced(self, h: Diagram) -> "ContextSubdiagram":
        """The context subdiagram after substituting the output of h for z."""
        new, ek, ew = substitute_diagram(self.vprime, h.output, self.iota)
        return ContextSubdiagram(new, self.side, self.inner, ew)
