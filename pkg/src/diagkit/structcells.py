"""Degenerate structure cells: units, unitors, reverses and invertors.

Every cell here is a diagram pulled back along a cylinder projection, so the
constructors also record how it factors through a lower-dimensional diagram.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ogp import BOTH, MINUS, PLUS, MolMap, boundary, is_round, subset_dim
from .molecule import (
    NotRewritable,
    SubmoleculeInclusion,
    cylinder_element_names,
    dual,
    inverted_cylinder,
    partial_gray_cylinder,
)
from .diagset import Diagram, DiagramError, paste_diagrams, paste_sub, search_maps


class NotDegenerate(DiagramError):
    pass


class BadCodimension(DiagramError):
    pass


class TypeError_(DiagramError):
    """A constructed cell does not have its declared boundaries."""


@dataclass(frozen=True)
class DegeneracyWitness:
    diagram: Diagram
    projection: MolMap
    base: Diagram

    def check(self) -> bool:
        d, p, b = self.diagram, self.projection, self.base
        if b.dim >= d.dim or not p.is_surjective:
            return False
        return all(d.labels[x] == b.labels[p(x)] for x in d.poset.elements())


def witness_of(d: Diagram):
    """The recorded or recovered degeneracy witness of d, or None."""
    if d.witness is not None:
        return d.witness
    return find_degeneracy(d)


def _record(d: Diagram, proj: MolMap, base: Diagram) -> Diagram:
    d.witness = DegeneracyWitness(d, proj, base)
    return d


# node cap for each map search; past it the diagram is reported as not
# recognised rather than searched exhaustively
SEARCH_BUDGET = 50_000


def find_degeneracy(d: Diagram):
    """Search for a factorization through a boundary of lower dimension."""
    if d.dim <= 0:
        return None
    if any(d.pres.dim_of(lab) >= d.dim for lab in d.labels):
        return None
    seen = []
    for k in range(d.dim - 1, -1, -1):
        for alpha in (MINUS, PLUS):
            base = d.boundary(k, alpha)
            if any(base == s for s in seen):
                continue
            seen.append(base)
            found = search_maps(d.poset, d.labels, base.poset, base.labels, limit=1, budget=SEARCH_BUDGET)
            if found:
                d.witness = DegeneracyWitness(d, MolMap(d.poset, base.poset, found[0]), base)
                return d.witness
    if d.is_cell():
        # a degenerate cell maps onto the cell of its top label
        name = d.labels[d.top_elements()[0]]
        base = d.pres.cell(name)
        found = search_maps(d.poset, d.labels, base.poset, base.labels, limit=1, budget=SEARCH_BUDGET)
        if found:
            d.witness = DegeneracyWitness(d, MolMap(d.poset, base.poset, found[0]), base)
            return d.witness
    return None


def is_degenerate(d: Diagram) -> bool:
    return witness_of(d) is not None


def _pullback(d: Diagram, mol, tau: MolMap) -> Diagram:
    return Diagram(d.pres, mol, [d.labels[tau(y)] for y in mol.poset.elements()])


def _subset(d: Diagram, iota) -> frozenset:
    if isinstance(iota, SubmoleculeInclusion):
        return iota.image
    return frozenset(iota)


def _interior(d: Diagram, S: frozenset) -> frozenset:
    m = subset_dim(d.poset, S)
    return S - boundary(d.poset, m - 1, BOTH, S)


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise TypeError_(what)


# units and unitors


def unit(u: Diagram, check: bool = True) -> Diagram:
    """The unit on u, of type u => u."""
    K = u.shape.bd(None, BOTH)
    mol, tau = partial_gray_cylinder(u.shape, K)
    e = _record(_pullback(u, mol, tau), tau, u)
    if check:
        _require(e.input == u and e.output == u, "unit does not have type u => u")
    return e


def _unitor(u: Diagram, iota, alpha: str, k=None):
    n = u.dim
    if k is None:
        k = n - 1
    if not 0 <= k < n:
        raise BadCodimension(f"k={k} is outside 0..{n - 1}")
    bd = u.shape.bd(k, alpha)
    S = bd if iota is None else _subset(u, iota)
    if not S <= bd:
        raise DiagramError("subdiagram is not in the required boundary")
    if subset_dim(u.poset, S) != k or not is_round(u.poset, S):
        raise NotRewritable("subdiagram is not rewritable in the boundary")
    K = u.shape.bd(k, BOTH) - _interior(u, S)
    mol, tau = partial_gray_cylinder(u.shape, K)
    return _record(_pullback(u, mol, tau), tau, u), S


def left_unitor(u: Diagram, iota=None, check: bool = True) -> Diagram:
    """u => (unit on the subdiagram) pasted into the input of u."""
    lam, S = _unitor(u, iota, MINUS)
    if check:
        _require(lam.input == u, "left unitor input is not u")
        _require(lam.output == left_unitor_target(u, S), "left unitor output mismatch")
    return lam


def right_unitor(u: Diagram, iota=None, check: bool = True) -> Diagram:
    """u with a unit pasted onto part of its output => u.

    The subdiagram is taken in the output boundary, which is what the type
    of the cell requires.
    """
    rho, S = _unitor(u, iota, PLUS)
    if check:
        _require(rho.output == u, "right unitor output is not u")
        _require(rho.input == right_unitor_source(u, S), "right unitor input mismatch")
    return rho


def left_unitor_target(u: Diagram, S) -> Diagram:
    v, _ = u.restrict(S)
    return paste_sub(unit(v, check=False), u, u.dim - 1, S, "left")[0]


def right_unitor_source(u: Diagram, S) -> Diagram:
    v, _ = u.restrict(S)
    return paste_sub(u, unit(v, check=False), u.dim - 1, S, "right")[0]


def higher_unitor(u: Diagram, k: int, iota=None, side: str = "left", check: bool = True) -> Diagram:
    """Unitor at a k-dimensional subdiagram of the k-boundary of u."""
    alpha = MINUS if side == "left" else PLUS
    cell, S = _unitor(u, iota, alpha, k)
    if check:
        src, tgt = higher_unitor_type(u, k, S, side)
        _require(cell.input == src, "higher unitor input mismatch")
        _require(cell.output == tgt, "higher unitor output mismatch")
    return cell


def _layer(base: Diagram, K, layer: str) -> frozenset:
    names = cylinder_element_names(base.shape, K)
    return frozenset(j for j, (i, _) in enumerate(names) if i is None or i == layer)


def higher_unitor_type(u: Diagram, k: int, S, side: str = "left") -> tuple:
    """Declared (input, output) of the higher unitor, built recursively."""
    n = u.dim
    S = frozenset(S)
    if k == n - 1:
        if side == "left":
            return u, left_unitor_target(u, S)
        return right_unitor_source(u, S), u
    out = []
    for a in (PLUS, MINUS):
        B = u.shape.bd(n - 1, a)
        bu, incl = u.restrict(B)
        back = {x: i for i, x in enumerate(incl)}
        Sb = frozenset(back[x] for x in S)
        K = bu.shape.bd(k, BOTH) - _interior(bu, Sb)
        cell = higher_unitor(bu, k, Sb, side, check=False)
        out.append((cell, K, bu))
    (cp, Kp, up), (cm, Km, um) = out
    src = paste_sub(u, cp, n - 1, _layer(up, Kp, MINUS), "left")[0]
    tgt = paste_sub(cm, u, n - 1, _layer(um, Km, PLUS), "right")[0]
    return src, tgt


def unit_copy(d: Diagram, alpha: str) -> tuple:
    """Embedding of d into unit(d) as its input (MINUS) or output (PLUS) copy."""
    K = d.shape.bd(None, BOTH)
    names = cylinder_element_names(d.shape, K)
    idx = {nm: j for j, nm in enumerate(names)}
    return tuple(idx[(None, x)] if x in K else idx[(alpha, x)] for x in d.poset.elements())


# reverses and invertors


def _witness(w) -> DegeneracyWitness:
    if isinstance(w, DegeneracyWitness):
        return w
    found = witness_of(w)
    if found is None:
        raise NotDegenerate("diagram is not degenerate")
    return found


def reverse(w) -> Diagram:
    """Same labels on the shape with top-dimensional orientations swapped."""
    w = _witness(w)
    d = w.diagram
    n = d.dim
    shape = dual(d.shape, {n})
    r = Diagram(d.pres, shape, d.labels)
    proj = MolMap(shape.poset, w.projection.target, w.projection.assignment)
    return _record(r, proj, w.base)


def pointwise_reverse(d: Diagram) -> Diagram:
    """Reverse of a diagram whose top cells are all degenerate."""
    n = d.dim
    if any(d.pres.dim_of(d.labels[x]) >= n for x in d.top_elements()):
        raise NotDegenerate("some top-dimensional cell is not degenerate")
    r = Diagram(d.pres, dual(d.shape, {n}), d.labels)
    w = d.witness
    if w is not None:
        proj = MolMap(r.poset, w.projection.target, w.projection.assignment)
        _record(r, proj, w.base)
    return r


def top_degenerate(d: Diagram) -> bool:
    return d.dim > 0 and all(d.pres.dim_of(d.labels[x]) < d.dim for x in d.top_elements())


def left_invertor(w, check: bool = True) -> Diagram:
    """u # rev u => unit on the input of u."""
    w = _witness(w)
    d = w.diagram
    mol, tau = inverted_cylinder(d.shape, d.shape.bd(None, PLUS), "left")
    z = _pullback(d, mol, tau)
    _record(z, w.projection.compose(tau), w.base)
    if check:
        _require(z.input == paste_diagrams(d, reverse(w)), "left invertor input mismatch")
        _require(z.output == unit(d.input, check=False), "left invertor output mismatch")
    return z


def right_invertor(w, check: bool = True) -> Diagram:
    """unit on the output of u => rev u # u."""
    w = _witness(w)
    d = w.diagram
    mol, tau = inverted_cylinder(d.shape, d.shape.bd(None, MINUS), "right")
    h = _pullback(d, mol, tau)
    _record(h, w.projection.compose(tau), w.base)
    if check:
        _require(h.input == unit(d.output, check=False), "right invertor input mismatch")
        _require(h.output == paste_diagrams(reverse(w), d), "right invertor output mismatch")
    return h


def pointwise_left_invertor(d: Diagram) -> Diagram:
    """Left invertor of a diagram whose top cells are all degenerate."""
    mol, tau = inverted_cylinder(d.shape, d.shape.bd(None, PLUS), "left")
    return _pullback(d, mol, tau)


def pointwise_right_invertor(d: Diagram) -> Diagram:
    mol, tau = inverted_cylinder(d.shape, d.shape.bd(None, MINUS), "right")
    return _pullback(d, mol, tau)
