"""Finite certificates of equivalence and the constructions that produce them.

A certificate is a finite tree.  Degenerate diagrams are accepted outright;
inverse-based nodes spend one unit of depth each, and two-out-of-three nodes
recompute the pasting they rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ogp import MINUS, PLUS, MolMap, check_map
from .molecule import layerings
from .diagset import Diagram, DiagramError, paste_diagrams, paste_sub
from .structcells import (
    DegeneracyWitness,
    NotDegenerate,
    find_degeneracy,
    left_invertor,
    left_unitor,
    pointwise_left_invertor,
    pointwise_reverse,
    pointwise_right_invertor,
    reverse,
    right_invertor,
    right_unitor,
    top_degenerate,
    unit,
    unit_copy,
    witness_of,
)


class CertError(DiagramError):
    pass


class MissingCellCert(CertError):
    pass


class MissingInverse(CertError):
    pass


class IllFormedEquation(CertError):
    pass


class UnsupportedCert(CertError):
    pass


class BudgetExhausted(CertError):
    pass


# certificate syntax


@dataclass(frozen=True, eq=False)
class ByDegeneracy:
    witness: DegeneracyWitness


@dataclass(frozen=True, eq=False)
class ByWeakInverse:
    inverse: Diagram
    z: Diagram
    zcert: object
    h: Diagram
    hcert: object


@dataclass(frozen=True, eq=False)
class ByBiInverse:
    left: Diagram
    right: Diagram
    z: Diagram
    zcert: object
    h: Diagram
    hcert: object


@dataclass(frozen=True, eq=False)
class ByTwoOutOfThree:
    """h: (u pasted at iota with v) => w, with the target read off by rule.

    form "cpsub": u's output sits inside v's input at iota (ids of v).
    form "subcp": u's input sits inside v's output at iota (ids of v).
    rule "compose" certifies w from h, u, v; rule "divide" certifies v
    from h, u, w.
    """

    rule: str
    form: str
    u: Diagram
    ucert: object
    v: Diagram
    vcert: object
    w: Diagram
    wcert: object
    h: Diagram
    hcert: object
    iota: frozenset


@dataclass(frozen=True, eq=False)
class Assumed:
    tag: str


def cert_depth(c) -> int:
    """Nesting depth of inverse-based nodes."""
    if isinstance(c, (ByWeakInverse, ByBiInverse)):
        return 1 + max(cert_depth(c.zcert), cert_depth(c.hcert))
    if isinstance(c, ByTwoOutOfThree):
        parts = [c.hcert, c.ucert, c.vcert if c.rule == "compose" else c.wcert]
        return max(cert_depth(p) for p in parts)
    return 0


def cert_size(c) -> int:
    if isinstance(c, (ByWeakInverse, ByBiInverse)):
        return 1 + cert_size(c.zcert) + cert_size(c.hcert)
    if isinstance(c, ByTwoOutOfThree):
        parts = [c.hcert, c.ucert, c.vcert if c.rule == "compose" else c.wcert]
        return 1 + sum(cert_size(p) for p in parts)
    return 1


def cert_kind(c) -> str:
    return {ByDegeneracy: "degeneracy", ByWeakInverse: "weak-inverse", ByBiInverse: "bi-inverse",
            ByTwoOutOfThree: "two-out-of-three", Assumed: "assumed"}.get(type(c), "unknown")


def cert_to_dict(c) -> dict:
    """JSON form of a certificate tree; diagrams are stored inline."""
    if isinstance(c, ByDegeneracy):
        w = c.witness
        return {"kind": "degeneracy", "diagram": w.diagram.to_dict(), "base": w.base.to_dict(),
                "projection": list(w.projection.assignment)}
    if isinstance(c, Assumed):
        return {"kind": "assumed", "tag": c.tag}
    if isinstance(c, ByWeakInverse):
        return {"kind": "weak-inverse", "inverse": c.inverse.to_dict(), "z": c.z.to_dict(),
                "zcert": cert_to_dict(c.zcert), "h": c.h.to_dict(), "hcert": cert_to_dict(c.hcert)}
    if isinstance(c, ByBiInverse):
        return {"kind": "bi-inverse", "left": c.left.to_dict(), "right": c.right.to_dict(),
                "z": c.z.to_dict(), "zcert": cert_to_dict(c.zcert),
                "h": c.h.to_dict(), "hcert": cert_to_dict(c.hcert)}
    if isinstance(c, ByTwoOutOfThree):
        out = {"kind": "two-out-of-three", "rule": c.rule, "form": c.form, "iota": sorted(c.iota)}
        for part in ("u", "v", "w", "h"):
            d = getattr(c, part)
            sub = getattr(c, part + "cert")
            out[part] = d.to_dict()
            out[part + "cert"] = None if sub is None else cert_to_dict(sub)
        return out
    raise UnsupportedCert(f"cannot serialize {c!r}")


def cert_from_dict(pres, data: dict):
    kind = data.get("kind")

    def dg(key):
        return Diagram.from_dict(pres, data[key], check=False)

    def sub(key):
        return None if data.get(key) is None else cert_from_dict(pres, data[key])

    if kind == "degeneracy":
        d, base = dg("diagram"), dg("base")
        proj = MolMap(d.poset, base.poset, data["projection"])
        return ByDegeneracy(DegeneracyWitness(d, proj, base))
    if kind == "assumed":
        return Assumed(data["tag"])
    if kind == "weak-inverse":
        return ByWeakInverse(dg("inverse"), dg("z"), sub("zcert"), dg("h"), sub("hcert"))
    if kind == "bi-inverse":
        return ByBiInverse(dg("left"), dg("right"), dg("z"), sub("zcert"), dg("h"), sub("hcert"))
    if kind == "two-out-of-three":
        return ByTwoOutOfThree(data["rule"], data["form"], dg("u"), sub("ucert"), dg("v"), sub("vcert"),
                               dg("w"), sub("wcert"), dg("h"), sub("hcert"), frozenset(data["iota"]))
    raise UnsupportedCert(f"unknown certificate kind {kind!r}")


# checking


@dataclass
class Verdict:
    status: str
    path: tuple = ()
    message: str = ""
    assumptions: list = field(default_factory=list)
    nodes: int = 0

    @property
    def accepted(self) -> bool:
        return self.status == "accept"

    def to_dict(self) -> dict:
        return {"status": self.status, "path": list(self.path), "message": self.message,
                "assumptions": sorted(set(self.assumptions)), "nodes": self.nodes}


class _Reject(Exception):
    def __init__(self, path, message):
        super().__init__(message)
        self.path = tuple(path)
        self.message = message


class _Exhausted(Exception):
    def __init__(self, path):
        super().__init__("depth budget exhausted")
        self.path = tuple(path)


def check_cert(e: Diagram, c, depth: int, assume: bool = False) -> Verdict:
    """Check that c certifies e as an equivalence within the depth budget."""
    state = {"assumptions": [], "nodes": 0}
    try:
        _check(e, c, depth, assume, (), state)
    except _Reject as r:
        return Verdict("reject", r.path, r.message, state["assumptions"], state["nodes"])
    except _Exhausted as x:
        return Verdict("exhausted", x.path, "depth budget exhausted", state["assumptions"], state["nodes"])
    return Verdict("accept", (), "ok", state["assumptions"], state["nodes"])


def _need(cond: bool, path, message: str) -> None:
    if not cond:
        raise _Reject(path, message)


_verified_maps: dict = {}


def _projection_ok(w) -> bool:
    key = (w.diagram.poset, w.projection.target, tuple(w.projection.assignment))
    if key not in _verified_maps:
        if len(_verified_maps) > 4096:
            _verified_maps.clear()
        proj = MolMap(w.diagram.poset, w.projection.target, w.projection.assignment)
        _verified_maps[key] = check_map(proj)
    return _verified_maps[key]


def _check(e: Diagram, c, depth: int, assume: bool, path: tuple, state: dict) -> None:
    state["nodes"] += 1
    _need(e.dim > 0, path, "equivalences have positive dimension")
    _need(e.is_round(), path, "diagram is not round")
    if isinstance(c, ByDegeneracy):
        w = c.witness
        _need(w.diagram == e, path + ("witness",), "witness is for another diagram")
        _need(w.check(), path + ("witness",), "labels do not factor through the projection")
        _need(_projection_ok(w), path + ("projection",), "projection is not a map of molecules")
        return
    if isinstance(c, Assumed):
        _need(assume, path, f"assumption {c.tag!r} outside assumption mode")
        state["assumptions"].append(c.tag)
        return
    if isinstance(c, ByWeakInverse):
        _inverse_types(e, c.inverse, c.inverse, c.z, c.h, path)
        if depth <= 0:
            raise _Exhausted(path)
        _check(c.z, c.zcert, depth - 1, assume, path + ("z",), state)
        _check(c.h, c.hcert, depth - 1, assume, path + ("h",), state)
        return
    if isinstance(c, ByBiInverse):
        _inverse_types(e, c.right, c.left, c.z, c.h, path)
        if depth <= 0:
            raise _Exhausted(path)
        _check(c.z, c.zcert, depth - 1, assume, path + ("z",), state)
        _check(c.h, c.hcert, depth - 1, assume, path + ("h",), state)
        return
    if isinstance(c, ByTwoOutOfThree):
        _need(c.rule in ("compose", "divide"), path, f"unknown rule {c.rule!r}")
        n = c.u.dim
        _need(c.v.dim == n and c.w.dim == n and c.h.dim == n + 1, path, "dimensions do not fit")
        try:
            if c.form == "cpsub":
                pasted = paste_sub(c.u, c.v, n - 1, c.iota, "left")[0]
            elif c.form == "subcp":
                pasted = paste_sub(c.v, c.u, n - 1, c.iota, "right")[0]
            else:
                raise _Reject(path, f"unknown form {c.form!r}")
        except DiagramError as exc:
            raise _Reject(path + ("pasting",), str(exc)) from None
        _need(c.h.input == pasted, path + ("h",), "input of the mediator is not the pasting")
        _need(c.h.output == c.w, path + ("h",), "output of the mediator is not w")
        _check(c.h, c.hcert, depth, assume, path + ("h",), state)
        _check(c.u, c.ucert, depth, assume, path + ("u",), state)
        if c.rule == "compose":
            _need(e == c.w, path, "certified diagram is not the composite")
            _check(c.v, c.vcert, depth, assume, path + ("v",), state)
        else:
            _need(e == c.v, path, "certified diagram is not the divided factor")
            _check(c.w, c.wcert, depth, assume, path + ("w",), state)
        return
    raise _Reject(path, f"unknown certificate {type(c).__name__}")


def _inverse_types(e, right, left, z, h, path) -> None:
    for d, name in ((right, "inverse"), (left, "inverse")):
        _need(d.input == e.output and d.output == e.input, path + (name,), "inverse has the wrong type")
    try:
        zin = paste_diagrams(e, right)
        hout = paste_diagrams(left, e)
    except DiagramError as exc:
        raise _Reject(path, str(exc)) from None
    _need(z.input == zin, path + ("z",), "left invertor input is not e # e*")
    _need(z.output == unit(e.input, check=False), path + ("z",), "left invertor output is not a unit")
    _need(h.input == unit(e.output, check=False), path + ("h",), "right invertor input is not a unit")
    _need(h.output == hout, path + ("h",), "right invertor output is not e* # e")


# degenerate diagrams


def cert_for_degenerate(w) -> ByDegeneracy:
    if isinstance(w, Diagram):
        found = witness_of(w)
        if found is None:
            raise NotDegenerate("diagram is not degenerate")
        w = found
    if not w.check():
        raise NotDegenerate("witness does not factor the labels")
    return ByDegeneracy(w)


def expand(e: Diagram, c):
    """One unrolling of a degeneracy certificate into inverse data."""
    if not isinstance(c, ByDegeneracy):
        return c
    r = reverse(c.witness)
    z = left_invertor(c.witness)
    h = right_invertor(c.witness)
    return ByWeakInverse(r, z, ByDegeneracy(witness_of(z)), h, ByDegeneracy(witness_of(h)))


def unrolled(e: Diagram, c, times: int = 1):
    """Wrap a certificate in `times` nested inverse-based layers.

    Only certificates of degenerate or top-degenerate diagrams are wrapped;
    anything else is returned unchanged.
    """
    if times <= 0:
        return c
    if isinstance(c, ByDegeneracy):
        w = c.witness
        r, z, h = reverse(w), left_invertor(w), right_invertor(w)
        zc, hc = ByDegeneracy(witness_of(z)), ByDegeneracy(witness_of(h))
    elif top_degenerate(e):
        r, z, h = pointwise_reverse(e), pointwise_left_invertor(e), pointwise_right_invertor(e)
        zc, hc = certify_cells(z), certify_cells(h)
    else:
        return c
    return ByWeakInverse(r, z, unrolled(z, zc, times - 1), h, unrolled(h, hc, times - 1))


# cell-wise certification


def _cell_cert(d: Diagram, registry):
    if not d.top_elements():
        raise MissingCellCert("no top-dimensional cell")
    x = d.top_elements()[0]
    name = d.labels[x]
    if d.pres.dim_of(name) < d.dim:
        w = find_degeneracy(d)
        if w is None:
            raise MissingCellCert(f"degenerate cell {name!r} has no witness")
        return ByDegeneracy(w)
    if registry and name in registry:
        return registry[name]
    raise MissingCellCert(f"no certificate for the cell {name!r}")


def certify_cells(u: Diagram, registry=None):
    """Certificate from certificates of the top-dimensional cells of u.

    Degenerate cells certify themselves; other cells are looked up by
    generator name in ``registry``.
    """
    certs = {}
    for x in u.top_elements():
        cell, _ = u.restrict(u.poset.down_sets()[x])
        certs[x] = _cell_cert(cell, registry)
    return all_top_equivalence(u, certs)


def all_top_equivalence(u: Diagram, cell_certs: dict):
    """Assemble a certificate for u from certificates of its top cells.

    The unit on the input of u is extended one cell at a time along a
    layering, then divided out again.
    """
    n = u.dim
    tops = u.top_elements()
    missing = [x for x in tops if x not in cell_certs]
    if missing:
        raise MissingCellCert(f"no certificate for top cells {missing}")
    if not u.is_round():
        raise CertError("diagram is not round")
    if u.is_cell():
        return cell_certs[tops[0]]
    lays = layerings(u.shape, n - 1, limit=1)
    if not lays:
        raise CertError("no layering found")
    down = u.poset.down_sets()
    order = []
    for _, incl in lays[0]:
        img = set(incl)
        order.append(next(x for x in tops if x in img))
    inp, inp_incl = u.restrict(u.shape.bd(n - 1, MINUS))
    acc = unit(inp)
    acc_cert = ByDegeneracy(witness_of(acc))
    emb = unit_copy(inp, PLUS)
    pos = {inp_incl[i]: emb[i] for i in range(len(inp_incl))}
    w0, w0_cert = acc, acc_cert
    for x in order:
        cell, cincl = u.restrict(down[x])
        S = frozenset(pos[cincl[i]] for i in cell.shape.bd(n - 1, MINUS))
        new, ea, ec = paste_sub(acc, cell, n - 1, S, "right")
        med = unit(new)
        acc_cert = ByTwoOutOfThree("compose", "subcp", cell, cell_certs[x], acc, acc_cert,
                                   new, None, med, ByDegeneracy(witness_of(med)), S)
        pos = {y: ea[p] for y, p in pos.items()}
        for i, y in enumerate(cincl):
            pos[y] = ec[i]
        acc = new
    med = unit(acc)
    return ByTwoOutOfThree("divide", "cpsub", w0, w0_cert, u, None, acc, acc_cert,
                           med, ByDegeneracy(witness_of(med)), u.shape.bd(n - 1, MINUS))


# weak inverses


@dataclass
class InverseData:
    """e* with z: e # e* => unit and h: unit => e* # e, all certified."""

    inverse: Diagram
    inverse_cert: object
    z: Diagram
    zcert: object
    h: Diagram
    hcert: object


def inverse_data(e: Diagram, c) -> InverseData:
    if isinstance(c, ByDegeneracy):
        w = c.witness
        r = reverse(w)
        z, h = left_invertor(w), right_invertor(w)
        return InverseData(r, ByDegeneracy(witness_of(r)), z, ByDegeneracy(witness_of(z)),
                           h, ByDegeneracy(witness_of(h)))
    if top_degenerate(e):
        r = pointwise_reverse(e)
        z, h = pointwise_left_invertor(e), pointwise_right_invertor(e)
        return InverseData(r, certify_cells(r), z, certify_cells(z), h, certify_cells(h))
    if isinstance(c, ByWeakInverse):
        hi = inverse_data(c.h, c.hcert)
        zi = inverse_data(c.z, c.zcert)
        inv_cert = ByWeakInverse(e, hi.inverse, hi.inverse_cert, zi.inverse, zi.inverse_cert)
        return InverseData(c.inverse, inv_cert, c.z, c.zcert, c.h, c.hcert)
    raise MissingInverse(f"no inverse can be read off a {cert_kind(c)} certificate")


def weak_inverse(e: Diagram, c) -> tuple:
    d = inverse_data(e, c)
    return d.inverse, d.inverse_cert


# two-out-of-three helpers


def compose_cert(u: Diagram, ucert, v: Diagram, vcert, k_sub=None, form: str = "cpsub"):
    """(pasting, certificate) for u pasted with v one dimension down.

    With ``k_sub`` None the pasting is along the full boundary.
    """
    n = u.dim
    if form == "cpsub":
        S = v.shape.bd(n - 1, MINUS) if k_sub is None else frozenset(k_sub)
        w = paste_sub(u, v, n - 1, S, "left")[0]
        med = unit(w)
        return w, ByTwoOutOfThree("compose", "cpsub", u, ucert, v, vcert, w, None,
                                  med, ByDegeneracy(witness_of(med)), S)
    S = v.shape.bd(n - 1, PLUS) if k_sub is None else frozenset(k_sub)
    w = paste_sub(v, u, n - 1, S, "right")[0]
    med = unit(w)
    return w, ByTwoOutOfThree("compose", "subcp", u, ucert, v, vcert, w, None,
                              med, ByDegeneracy(witness_of(med)), S)


# combinators


def refl(u: Diagram) -> tuple:
    e = unit(u)
    return e, ByDegeneracy(witness_of(e))


def trans(h1: Diagram, c1, h2: Diagram, c2) -> tuple:
    """h1 # h2 with its certificate."""
    return compose_cert(h1, c1, h2, c2)


def sym(h: Diagram, c) -> tuple:
    return weak_inverse(h, c)


def subdiag(u: Diagram, S, h: Diagram, c) -> tuple:
    """Witness u => u with the subdiagram at S replaced by the output of h."""
    e = unit(u)
    emb = unit_copy(u, PLUS)
    T = frozenset(emb[x] for x in S)
    return compose_cert(h, c, e, ByDegeneracy(witness_of(e)), T, form="subcp")


def compose2of3(h: Diagram, hcert, u: Diagram, ucert, v: Diagram, vcert, w: Diagram,
                iota, form: str = "cpsub", rule: str = "compose"):
    """Raw two-out-of-three node; for rule divide pass w's certificate as vcert."""
    if rule == "compose":
        return ByTwoOutOfThree("compose", form, u, ucert, v, vcert, w, None, h, hcert, frozenset(iota))
    return ByTwoOutOfThree("divide", form, u, ucert, v, None, w, vcert, h, hcert, frozenset(iota))


# lax and colax solutions


@dataclass
class Equation:
    """e pasted with an unknown equals target.

    side "left": e at j inside the input, j a subset of the target's input
    matching the input of e.  side "right": e at j inside the output, j
    matching the output of e.
    """

    side: str
    target: Diagram
    j: frozenset

    def __post_init__(self):
        self.j = frozenset(self.j)
        if self.side not in ("left", "right"):
            raise IllFormedEquation(f"unknown side {self.side!r}")


def _check_equation(e: Diagram, eq: Equation) -> None:
    u = eq.target
    if u.dim != e.dim:
        raise IllFormedEquation("equation sides have different dimensions")
    alpha = MINUS if eq.side == "left" else PLUS
    if not eq.j <= u.shape.bd(u.dim - 1, alpha):
        raise IllFormedEquation("subdiagram is not in the matching boundary")
    want = e.input if eq.side == "left" else e.output
    if u.restrict(eq.j)[0] != want:
        raise IllFormedEquation("subdiagram does not match the boundary of e")


def _find_unit(d: Diagram, unit_of: Diagram, alpha: str, check) -> frozenset:
    """Locate a copy of the unit on unit_of inside the alpha-boundary of d."""
    from .diagset import find_subdiagram

    e = unit(unit_of, check=False)
    for S in find_subdiagram(d, e, within=d.shape.bd(d.dim - 1, alpha)):
        if check(S):
            return S
    raise CertError("unit not found in the expected boundary")


@dataclass
class LaxSolution:
    solution: Diagram
    h: Diagram
    hcert: object
    colax: bool = False


def solve_lax(e: Diagram, cert, eq: Equation) -> LaxSolution:
    """u' and h: (e pasted with u') => target, certified."""
    _check_equation(e, eq)
    if isinstance(cert, Assumed):
        raise UnsupportedCert("assumed certificates carry no solution data")
    data = inverse_data(e, cert)
    u, n = eq.target, eq.target.dim
    if eq.side == "left":
        sol = paste_sub(data.inverse, u, n - 1, eq.j, "left")[0]
        lam = left_unitor(u, eq.j)
        rl = reverse(lam)
        inner = data.z

        def ok(S):
            return _fits(lambda: paste_sub(inner, rl, n, S, "left")[0], e, sol, u, "left", False)

        S = _find_unit(rl, e.input, MINUS, ok)
        h = paste_sub(inner, rl, n, S, "left")[0]
        hcert = compose_cert(inner, data.zcert, rl, ByDegeneracy(witness_of(rl)), S)[1]
        _require_solution(e, sol, h, u, "left", colax=False)
        return LaxSolution(sol, h, hcert)
    sol = paste_sub(u, data.inverse, n - 1, eq.j, "right")[0]
    inv_h, inv_h_cert = weak_inverse(data.h, data.hcert)
    rho = right_unitor(u, eq.j)

    def ok(S):
        return _fits(lambda: paste_sub(inv_h, rho, n, S, "left")[0], e, sol, u, "right", False)

    S = _find_unit(rho, e.output, MINUS, ok)
    h = paste_sub(inv_h, rho, n, S, "left")[0]
    hcert = compose_cert(inv_h, inv_h_cert, rho, ByDegeneracy(witness_of(rho)), S)[1]
    _require_solution(e, sol, h, u, "right", colax=False)
    return LaxSolution(sol, h, hcert)


def solve_colax(e: Diagram, cert, eq: Equation) -> LaxSolution:
    """u' and h: target => (e pasted with u'), certified."""
    _check_equation(e, eq)
    if isinstance(cert, Assumed):
        raise UnsupportedCert("assumed certificates carry no solution data")
    data = inverse_data(e, cert)
    u, n = eq.target, eq.target.dim
    if eq.side == "left":
        sol = paste_sub(data.inverse, u, n - 1, eq.j, "left")[0]
        lam = left_unitor(u, eq.j)
        zi, zi_cert = weak_inverse(data.z, data.zcert)

        def ok(S):
            return _fits(lambda: paste_sub(lam, zi, n, S, "right")[0], e, sol, u, "left", True)

        S = _find_unit(lam, e.input, PLUS, ok)
        h = paste_sub(lam, zi, n, S, "right")[0]
        hcert = compose_cert(zi, zi_cert, lam, ByDegeneracy(witness_of(lam)), S, form="subcp")[1]
        _require_solution(e, sol, h, u, "left", colax=True)
        return LaxSolution(sol, h, hcert, colax=True)
    sol = paste_sub(u, data.inverse, n - 1, eq.j, "right")[0]
    rho = right_unitor(u, eq.j)
    rr = reverse(rho)

    def ok(S):
        return _fits(lambda: paste_sub(rr, data.h, n, S, "right")[0], e, sol, u, "right", True)

    S = _find_unit(rr, e.output, PLUS, ok)
    h = paste_sub(rr, data.h, n, S, "right")[0]
    hcert = compose_cert(data.h, data.hcert, rr, ByDegeneracy(witness_of(rr)), S, form="subcp")[1]
    _require_solution(e, sol, h, u, "right", colax=True)
    return LaxSolution(sol, h, hcert, colax=True)


def solution_pasting(e: Diagram, sol: Diagram, side: str) -> Diagram:
    """e pasted with a solution of its equation, at the place the solution leaves for it."""
    from .diagset import find_subdiagram

    n = e.dim
    if side == "left":
        cands = find_subdiagram(sol, e.output, within=sol.shape.bd(n - 1, MINUS))
        return [paste_sub(e, sol, n - 1, S, "left")[0] for S in cands]
    cands = find_subdiagram(sol, e.input, within=sol.shape.bd(n - 1, PLUS))
    return [paste_sub(sol, e, n - 1, S, "right")[0] for S in cands]


def _fits(build, e, sol, u, side, colax) -> bool:
    # the target may itself contain copies of the unit being replaced, so a
    # location only counts when the whole witness has the solution's type
    try:
        _require_solution(e, sol, build(), u, side, colax)
    except DiagramError:
        return False
    return True


def _require_solution(e, sol, h, u, side, colax) -> None:
    fixed, other = (h.input, h.output) if colax else (h.output, h.input)
    if fixed != u:
        raise CertError("solution witness does not end at the equation's target")
    if not any(other == p for p in solution_pasting(e, sol, side)):
        raise CertError("solution witness does not start at e pasted with the solution")
