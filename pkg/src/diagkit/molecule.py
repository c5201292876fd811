"""Molecules: constructors, layerings, submolecules, substitution, cylinders."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ogp import (
    BOTH,
    MINUS,
    PLUS,
    OGP,
    MolMap,
    OGPError,
    boundary,
    closure,
    find_isomorphism,
    interior,
    is_closed,
    is_round,
    maximal,
    normalize,
    opposite,
    point_poset,
    restrict,
    subset_dim,
)
from . import ogp as _ogp


class MoleculeError(OGPError):
    pass


class NoBoundaryIso(MoleculeError):
    pass


class NotRound(MoleculeError):
    pass


class DimensionMismatch(MoleculeError):
    pass


class NotSubmolecule(MoleculeError):
    pass


class NotRewritable(MoleculeError):
    pass


class BoundaryMismatch(MoleculeError):
    pass


class NotClosed(MoleculeError):
    pass


class KNotInBoundary(MoleculeError):
    pass


class Undecided(MoleculeError):
    """Search gave up within its node budget."""


# construction expressions


@dataclass(frozen=True)
class Point:
    def __str__(self):
        return "pt"


@dataclass(frozen=True)
class Paste:
    left: object
    right: object
    k: int

    def __str__(self):
        return f"paste({self.left},{self.right},{self.k})"


@dataclass(frozen=True)
class CellExt:
    input: object
    output: object

    def __str__(self):
        return f"cell({self.input},{self.output})"


@dataclass(frozen=True)
class PasteSub:
    left: object
    right: object
    k: int
    iota: tuple
    side: str

    def __str__(self):
        name = "lpastesub" if self.side == "left" else "rpastesub"
        ids = ",".join(map(str, self.iota))
        return f"{name}({self.left},{self.right},{self.k},[{ids}])"


@dataclass(frozen=True)
class Imported:
    poset: OGP

    def __str__(self):
        return f"imported[{self.poset.size}]"


@dataclass(frozen=True)
class Cyl:
    base: object
    K: tuple
    kind: str = "gray"

    def __str__(self):
        name = {"gray": "cyl", "left": "lcyl", "right": "rcyl"}[self.kind]
        return f"{name}({self.base},[{','.join(map(str, self.K))}])"


@dataclass(frozen=True)
class Gray:
    left: object
    right: object

    def __str__(self):
        return f"gray({self.left},{self.right})"


@dataclass(frozen=True)
class Dual:
    base: object
    dims: tuple

    def __str__(self):
        return f"dual({self.base},{{{','.join(map(str, self.dims))}}})"


@dataclass(frozen=True)
class Substitution:
    base: object
    replacement: object
    iota: tuple

    def __str__(self):
        return f"subst({self.base},{self.replacement},[{','.join(map(str, self.iota))}])"


class Molecule:
    """A validated pasting shape with the expression that built it."""

    __slots__ = ("poset", "expr", "_witness")

    def __init__(self, poset: OGP, expr=None):
        self.poset = poset
        self.expr = expr if expr is not None else Imported(poset)
        self._witness = None

    @classmethod
    def from_poset(cls, P: OGP) -> "Molecule":
        w = is_molecule(P)
        if w is None:
            raise MoleculeError("poset is not a molecule")
        m = cls(P, Imported(P))
        m._witness = w
        return m

    @property
    def dim(self) -> int:
        return self.poset.dim

    @property
    def size(self) -> int:
        return self.poset.size

    @property
    def witness(self):
        if self._witness is None:
            self._witness = is_molecule(self.poset)
        return self._witness

    def all(self) -> frozenset:
        return frozenset(self.poset.elements())

    def bd(self, n=None, alpha: str = MINUS) -> frozenset:
        return boundary(self.poset, n, alpha)

    def boundary(self, n=None, alpha: str = MINUS) -> "Molecule":
        return self.restrict(self.bd(n, alpha))[0]

    def restrict(self, S) -> tuple:
        P, incl = restrict(self.poset, S)
        return Molecule(P), incl

    def is_round(self) -> bool:
        return is_round(self.poset)

    def is_atom(self) -> bool:
        return len(maximal(self.poset, self.all())) == 1

    def top(self):
        m = maximal(self.poset, self.all())
        return m[0] if len(m) == 1 else None

    def __eq__(self, other) -> bool:
        return isinstance(other, Molecule) and self.poset == other.poset

    def __hash__(self) -> int:
        return hash(self.poset)

    def __repr__(self) -> str:
        return f"Molecule({self.expr}, size={self.size}, dim={self.dim})"


def isomorphic(U, V) -> bool:
    return find_isomorphism(_p(U), _p(V)) is not None


def _p(U) -> OGP:
    return U.poset if isinstance(U, Molecule) else U


# gluing


def glue(A: OGP, B: OGP, psi: dict) -> tuple:
    """Pushout of A and B along psi, a map from a closed subset of B into A.

    Returns the glued poset and the two embeddings as tuples.
    """
    na = A.size
    bmap = {}
    nxt = na
    for y in B.elements():
        if y in psi:
            bmap[y] = psi[y]
        else:
            bmap[y] = nxt
            nxt += 1
    dims = list(A.dims)
    minus = [list(f) for f in A.minus]
    plus = [list(f) for f in A.plus]
    for y in B.elements():
        if y in psi:
            continue
        dims.append(B.dims[y])
        minus.append([bmap[z] for z in B.minus[y]])
        plus.append([bmap[z] for z in B.plus[y]])
    P, new = normalize(dims, minus, plus)
    P.validate()
    return P, tuple(new[x] for x in range(na)), tuple(new[bmap[y]] for y in B.elements())


def boundary_iso(U: OGP, S, V: OGP, T, ulabels=None, vlabels=None):
    """Isomorphism from the subset S of U onto the subset T of V, as a dict.

    With labellings given, only label-preserving isomorphisms are considered.
    """
    A, ia = restrict(U, S)
    B, ib = restrict(V, T)
    la = lb = None
    if ulabels is not None and vlabels is not None:
        la = [ulabels[x] for x in ia]
        lb = [vlabels[x] for x in ib]
    f = find_isomorphism(A, B, la, lb)
    if f is None:
        return None
    return {ia[x]: ib[f(x)] for x in A.elements()}


def _paste_data(U: OGP, V: OGP, k: int, labels=None) -> tuple:
    if k < 0:
        raise MoleculeError("pasting dimension must be non-negative")
    S = boundary(U, k, PLUS)
    T = boundary(V, k, MINUS)
    lu, lv = labels if labels is not None else (None, None)
    phi = boundary_iso(V, T, U, S, lv, lu)
    if phi is None:
        raise NoBoundaryIso(f"output {k}-boundary of the left factor does not match "
                            f"the input {k}-boundary of the right factor")
    return glue(U, V, phi)


def point() -> Molecule:
    m = Molecule(point_poset(), Point())
    m._witness = Point()
    return m


def paste(U: Molecule, V: Molecule, k: int) -> Molecule:
    return paste_with_embeddings(U, V, k)[0]


def paste_with_embeddings(U: Molecule, V: Molecule, k: int, labels=None) -> tuple:
    P, eu, ev = _paste_data(U.poset, V.poset, k, labels)
    return Molecule(P, Paste(U.expr, V.expr, k)), eu, ev


def _double_boundary_iso(U: OGP, V: OGP, n: int):
    """Isomorphism of the full (n-1)-boundaries respecting orientation."""
    if n <= 0:
        return {}
    parts = {}
    for alpha in (MINUS, PLUS):
        phi = boundary_iso(U, boundary(U, n - 1, alpha), V, boundary(V, n - 1, alpha))
        if phi is None:
            return None
        for x, y in phi.items():
            if parts.setdefault(x, y) != y:
                return None
    return parts


def cell_ext_with_embeddings(U: Molecule, V: Molecule) -> tuple:
    n = U.dim
    if V.dim != n:
        raise DimensionMismatch(f"input has dimension {n}, output has {V.dim}")
    if not (U.is_round() and V.is_round()):
        raise NotRound("cellular extension needs round input and output")
    phi = _double_boundary_iso(V.poset, U.poset, n)
    if phi is None:
        raise NoBoundaryIso("input and output boundaries differ")
    P, eu, ev = glue(U.poset, V.poset, phi)
    dims = list(P.dims) + [n + 1]
    minus = [list(f) for f in P.minus] + [[eu[x] for x in U.poset.grade(n)]]
    plus = [list(f) for f in P.plus] + [[ev[x] for x in V.poset.grade(n)]]
    Q = OGP(dims, minus, plus)
    return Molecule(Q, CellExt(U.expr, V.expr)), eu, ev


def cell_ext(U: Molecule, V: Molecule) -> Molecule:
    return cell_ext_with_embeddings(U, V)[0]


def arrow() -> Molecule:
    return cell_ext(point(), point())


def globe(n: int) -> Molecule:
    """The n-dimensional globe."""
    g = point()
    for _ in range(n):
        g = cell_ext(g, g)
    return g


def dual(U: Molecule, dims) -> Molecule:
    dims = tuple(sorted(set(dims)))
    return Molecule(_ogp.dual(U.poset, dims), Dual(U.expr, dims))


# submolecules


@dataclass(frozen=True)
class SubmoleculeInclusion:
    """Inclusion of a molecule into another, with how it was obtained."""

    sub: Molecule
    target: Molecule
    map: tuple
    witness: tuple = ("given",)

    @property
    def image(self) -> frozenset:
        return frozenset(self.map)

    @property
    def rewritable(self) -> bool:
        return self.sub.dim == self.target.dim and self.sub.is_round()

    @property
    def is_iso(self) -> bool:
        return len(self.map) == self.target.size

    def as_map(self) -> MolMap:
        return MolMap(self.sub.poset, self.target.poset, self.map)

    def compose(self, outer: "SubmoleculeInclusion") -> "SubmoleculeInclusion":
        """outer after self."""
        return SubmoleculeInclusion(self.sub, outer.target, tuple(outer.map[x] for x in self.map),
                                    ("compose", self.witness, outer.witness))


def identity_inclusion(U: Molecule) -> SubmoleculeInclusion:
    return SubmoleculeInclusion(U, U, tuple(U.poset.elements()), ("identity",))


def boundary_inclusion(U: Molecule, n=None, alpha: str = MINUS) -> SubmoleculeInclusion:
    S = U.bd(n, alpha)
    V, incl = U.restrict(S)
    return SubmoleculeInclusion(V, U, incl, ("boundary", n, alpha))


def subset_inclusion(U: Molecule, S, budget: int = 2000) -> SubmoleculeInclusion:
    """Recognize a closed subset as a submolecule, raising if it is not one."""
    S = frozenset(S)
    if not is_closed(U.poset, S):
        raise NotClosed("subset is not closed")
    verdict = _is_submolecule(U.poset, S, frozenset(U.poset.elements()), [budget])
    if verdict is None:
        raise Undecided("submolecule search exhausted its budget")
    if not verdict:
        raise NotSubmolecule("subset is not a submolecule")
    V, incl = U.restrict(S)
    return SubmoleculeInclusion(V, U, incl, ("recognized",))


def _collapse(P: OGP, S: frozenset, T: frozenset):
    """T with int S replaced by a single atom on the boundary of S."""
    n = subset_dim(P, S)
    inner = S - boundary(P, n - 1, BOTH, S)
    keep = sorted(T - inner)
    idx = {x: i for i, x in enumerate(keep)}
    dims = [P.dims[x] for x in keep] + [n]
    minus = [[idx[y] for y in P.minus[x]] for x in keep]
    plus = [[idx[y] for y in P.plus[x]] for x in keep]
    minus.append([idx[y] for y in P.grade(n - 1, boundary(P, n - 1, MINUS, S))])
    plus.append([idx[y] for y in P.grade(n - 1, boundary(P, n - 1, PLUS, S))])
    if any(P.faces(x) & inner for x in keep):
        return None
    try:
        Q = OGP(dims, minus, plus)
    except OGPError:
        return None
    return Q


def _is_submolecule(P: OGP, S: frozenset, T: frozenset, budget: list):
    if budget[0] <= 0:
        return None
    budget[0] -= 1
    if S == T:
        return True
    if not S <= T:
        return False
    if not _is_mol_subset(P, S):
        return False
    n = subset_dim(P, T)
    if subset_dim(P, S) == n and is_round(P, S):
        Q = _collapse(P, S, T)
        return Q is not None and is_molecule(Q) is not None
    undecided = False
    for m in range(n - 1, -1, -1):
        for alpha in (MINUS, PLUS):
            B = boundary(P, m, alpha, T)
            if S <= B and B != T:
                r = _is_submolecule(P, S, B, budget)
                if r:
                    return True
                undecided |= r is None
    for k in range(n):
        lay = _find_layering(P, T, k)
        if lay is None or len(lay) < 2:
            continue
        for i in range(len(lay)):
            acc = frozenset()
            for j in range(i, len(lay)):
                acc = acc | lay[j]
                if S <= acc and acc != T:
                    r = _is_submolecule(P, S, acc, budget)
                    if r:
                        return True
                    undecided |= r is None
                    break
    return None if undecided else False


def paste_at_submolecule(U: Molecule, V: Molecule, k: int, iota: SubmoleculeInclusion,
                         side: str = "left") -> Molecule:
    return paste_at_submolecule_with_embeddings(U, V, k, iota, side)[0]


def paste_at_submolecule_with_embeddings(U: Molecule, V: Molecule, k: int,
                                         iota: SubmoleculeInclusion, side: str = "left",
                                         labels=None) -> tuple:
    """U pasted into part of V (side left) or V pasted into part of U (side right).

    For side left, iota includes the output k-boundary of U into the input
    k-boundary of V; for side right, the input k-boundary of V into the output
    k-boundary of U.  Embeddings of U and V into the result are returned.
    """
    if side == "left":
        small, big, sa, ba = U, V, PLUS, MINUS
    elif side == "right":
        small, big, sa, ba = V, U, MINUS, PLUS
    else:
        raise MoleculeError(f"unknown side {side!r}")
    S = small.bd(k, sa)
    B = big.bd(k, ba)
    if len(iota.map) != len(S):
        raise BoundaryMismatch("inclusion source is not the matching boundary")
    if not iota.image <= B:
        raise NotSubmolecule("inclusion does not land in the matching boundary")
    sm, sincl = small.restrict(S)
    ls = lsub = None
    if labels is not None:
        lsmall, lbig = (labels[0], labels[1]) if side == "left" else (labels[1], labels[0])
        ls = [lsmall[x] for x in sincl]
        lsub = [lbig[x] for x in iota.map]
    f = find_isomorphism(sm.poset, iota.sub.poset, ls, lsub)
    if f is None:
        raise BoundaryMismatch("inclusion source is not isomorphic to the boundary")
    psi = {sincl[x]: iota.map[f(x)] for x in sm.poset.elements()}
    P, eb, es = glue(big.poset, small.poset, psi)
    expr = PasteSub(U.expr, V.expr, k, tuple(iota.map), side)
    if side == "left":
        return Molecule(P, expr), es, eb
    return Molecule(P, expr), eb, es


# substitution


def substitute(U: Molecule, W: Molecule, iota: SubmoleculeInclusion) -> Molecule:
    return substitute_with_embeddings(U, W, iota)[0]


def substitute_with_embeddings(U: Molecule, W: Molecule, iota: SubmoleculeInclusion,
                               labels=None) -> tuple:
    """Replace the interior of iota's image in U by the interior of W.

    Returns the result, the embedding of U minus the excised interior (as a
    dict from old ids), and the embedding of W.
    """
    P = U.poset
    S = iota.image
    n = U.dim
    if subset_dim(P, S) != n or not is_round(P, S):
        raise NotRewritable("image is not a top-dimensional round subset")
    if W.dim != n or not W.is_round():
        raise NotRound("replacement must be round of the same dimension")
    dS = boundary(P, n - 1, BOTH, S)
    parts = {}
    for alpha in (MINUS, PLUS):
        lu, lw = labels if labels is not None else (None, None)
        phi = boundary_iso(W.poset, W.bd(n - 1, alpha), P, boundary(P, n - 1, alpha, S), lw, lu)
        if phi is None:
            raise BoundaryMismatch("replacement is not parallel to the subdiagram")
        for x, y in phi.items():
            if parts.setdefault(x, y) != y:
                raise BoundaryMismatch("boundary isomorphisms disagree")
    keep = frozenset(P.elements()) - (S - dS)
    if not is_closed(P, keep):
        raise NotRewritable("excised interior is not open")
    R, kincl = restrict(P, keep)
    back = {x: i for i, x in enumerate(kincl)}
    psi = {w: back[u] for w, u in parts.items()}
    Q, ek, ew = glue(R, W.poset, psi)
    emb = {kincl[i]: ek[i] for i in range(R.size)}
    return Molecule(Q, Substitution(U.expr, W.expr, tuple(iota.map))), emb, ew


# layerings


def _flow_ok(P: OGP, C: frozenset, V_prev: frozenset, k: int, prev: frozenset):
    if not boundary(P, k, MINUS, C) <= V_prev:
        return None
    if not (C & prev) <= V_prev:
        return None
    L = V_prev | C
    if boundary(P, k, MINUS, L) != V_prev:
        return None
    return L


def _layerings(P: OGP, S: frozenset, k: int, limit: int):
    """All k-layerings of the subset S as lists of subsets, up to limit."""
    down = P.down_sets()
    if k < 0:
        return [[S]] if len(maximal(P, S)) == 1 else []
    tops = [x for x in maximal(P, S) if P.dims[x] > k]
    if not tops:
        return []
    start = boundary(P, k, MINUS, S)
    goal = boundary(P, k, PLUS, S)
    out = []
    dead = set()

    def go(V_prev, used, prev, layers):
        if len(out) >= limit:
            return
        if len(used) == len(tops):
            if V_prev == goal and prev == S:
                out.append(list(layers))
            return
        key = (used, V_prev)
        if key in dead:
            return
        before = len(out)
        for x in tops:
            if x in used:
                continue
            L = _flow_ok(P, down[x], V_prev, k, prev)
            if L is None:
                continue
            V = boundary(P, k, PLUS, L)
            layers.append(L)
            go(V, used | {x}, prev | L, layers)
            layers.pop()
            if len(out) >= limit:
                return
        if len(out) == before:
            dead.add(key)

    go(start, frozenset(), start, [])
    return out


def _find_layering(P: OGP, S: frozenset, k: int):
    res = _layerings(P, S, k, 1)
    return res[0] if res else None


def layerings(U: Molecule, k: int, limit: int = 64) -> list:
    """k-layerings of U, each a list of layer molecules with their inclusions."""
    P = U.poset
    out = []
    for lay in _layerings(P, frozenset(P.elements()), k, limit):
        out.append([U.restrict(L) for L in lay])
    return out


def layering_dimension(U: Molecule) -> int:
    """Least k admitting a k-layering (-1 for atoms)."""
    P = U.poset
    S = frozenset(P.elements())
    for k in range(-1, max(U.dim, 0)):
        if _find_layering(P, S, k) is not None:
            return k
    return max(U.dim - 1, -1)


# recognition


def is_molecule(P: OGP):
    """A construction expression for P if it is a molecule, else None."""
    if P.size == 0:
        return None
    return _mol(P, frozenset(P.elements()))


def _is_mol_subset(P: OGP, S: frozenset) -> bool:
    return bool(S) and _mol(P, S) is not None


@lru_cache(maxsize=200000)
def _mol(P: OGP, S: frozenset):
    tops = maximal(P, S)
    if len(tops) == 1:
        return _atom(P, S, tops[0])
    d = subset_dim(P, S)
    for k in range(0, d):
        for lay in _layerings(P, S, k, 8):
            if len(lay) < 2:
                continue
            parts = [_mol(P, L) for L in lay]
            if any(w is None for w in parts):
                continue
            expr = parts[0]
            for w in parts[1:]:
                expr = Paste(expr, w, k)
            return expr
    return None


def _atom(P: OGP, S: frozenset, top: int):
    n = P.dims[top]
    if n == 0:
        return Point() if len(S) == 1 else None
    Bm = boundary(P, n - 1, MINUS, S)
    Bp = boundary(P, n - 1, PLUS, S)
    if Bm | Bp != S - {top}:
        return None
    if P.minus[top] != frozenset(P.grade(n - 1, Bm)) or P.plus[top] != frozenset(P.grade(n - 1, Bp)):
        return None
    for alpha in (MINUS, PLUS):
        if boundary(P, n - 2, alpha, Bm) != boundary(P, n - 2, alpha, Bp):
            return None
    if Bm & Bp != boundary(P, n - 2, BOTH, Bm):
        return None
    wm = _mol(P, Bm)
    if wm is None or not is_round(P, Bm):
        return None
    wp = _mol(P, Bp)
    if wp is None or not is_round(P, Bp):
        return None
    return CellExt(wm, wp)


def is_regular(P: OGP) -> bool:
    """Every lower set of a single element is an atom."""
    down = P.down_sets()
    return all(_mol(P, down[x]) is not None for x in P.elements())


# evaluation of expressions


def evaluate(expr) -> Molecule:
    if isinstance(expr, Point):
        return point()
    if isinstance(expr, Paste):
        return paste(evaluate(expr.left), evaluate(expr.right), expr.k)
    if isinstance(expr, CellExt):
        return cell_ext(evaluate(expr.input), evaluate(expr.output))
    if isinstance(expr, Imported):
        return Molecule.from_poset(expr.poset)
    if isinstance(expr, Cyl):
        U = evaluate(expr.base)
        fn = {"gray": partial_gray_cylinder, "left": lambda U, K: inverted_cylinder(U, K, "left"),
              "right": lambda U, K: inverted_cylinder(U, K, "right")}[expr.kind]
        return fn(U, expr.K)[0]
    if isinstance(expr, Gray):
        return gray_product(evaluate(expr.left), evaluate(expr.right))
    if isinstance(expr, Dual):
        return dual(evaluate(expr.base), expr.dims)
    if isinstance(expr, PasteSub):
        U, V = evaluate(expr.left), evaluate(expr.right)
        big = V if expr.side == "left" else U
        S = frozenset(expr.iota)
        sub, incl = big.restrict(S)
        iota = SubmoleculeInclusion(sub, big, incl)
        return paste_at_submolecule(U, V, expr.k, iota, expr.side)
    if isinstance(expr, Substitution):
        U, W = evaluate(expr.base), evaluate(expr.replacement)
        sub, incl = U.restrict(frozenset(expr.iota))
        return substitute(U, W, SubmoleculeInclusion(sub, U, incl))
    raise MoleculeError(f"unknown expression {expr!r}")


# Gray products and cylinders


def gray_product(U: Molecule, V: Molecule) -> Molecule:
    P, Q = U.poset, V.poset
    pairs = [(x, y) for x in P.elements() for y in Q.elements()]
    idx = {p: i for i, p in enumerate(pairs)}
    dims, minus, plus = [], [], []
    for x, y in pairs:
        dims.append(P.dims[x] + Q.dims[y])
        faces = {}
        for alpha in (MINUS, PLUS):
            beta = alpha if P.dims[x] % 2 == 0 else opposite(alpha)
            fs = [idx[(x2, y)] for x2 in P.faces(x, alpha)]
            fs += [idx[(x, y2)] for y2 in Q.faces(y, beta)]
            faces[alpha] = fs
        minus.append(faces[MINUS])
        plus.append(faces[PLUS])
    R, _ = normalize(dims, minus, plus)
    R.validate()
    return Molecule(R, Gray(U.expr, V.expr))


_LAYERS = (MINUS, "1", PLUS)


def _cylinder(U: Molecule, K, kind: str) -> tuple:
    P = U.poset
    K = frozenset(K)
    if not is_closed(P, K):
        raise NotClosed("K is not closed")
    n = P.dim
    if kind == "left" and not K <= U.bd(None, PLUS):
        raise KNotInBoundary("K must lie in the output boundary")
    if kind == "right" and not K <= U.bd(None, MINUS):
        raise KNotInBoundary("K must lie in the input boundary")
    names = []
    for x in P.elements():
        if x in K:
            names.append((None, x))
        else:
            names.extend((i, x) for i in _LAYERS)
    idx = {nm: j for j, nm in enumerate(names)}

    def e(i, y):
        return idx[(None, y)] if y in K else idx[(i, y)]

    dims, minus, plus = [], [], []
    for i, x in names:
        if i is None:
            dims.append(P.dims[x])
            minus.append([idx[(None, y)] for y in P.minus[x]])
            plus.append([idx[(None, y)] for y in P.plus[x]])
            continue
        faces = {}
        for alpha in (MINUS, PLUS):
            if i == "1":
                fs = [idx[(alpha, x)]] + [idx[("1", y)] for y in P.faces(x, opposite(alpha)) if y not in K]
            else:
                fs = [e(i, y) for y in P.faces(x, alpha)]
            faces[alpha] = fs
        if P.dims[x] == n and kind != "gray":
            flip = PLUS if kind == "left" else MINUS
            if i == "1":
                inner = [idx[(MINUS, x)], idx[(PLUS, x)]]
                if kind == "left":
                    faces[MINUS] = inner + [idx[("1", y)] for y in P.plus[x] if y not in K]
                    faces[PLUS] = [idx[("1", y)] for y in P.minus[x]]
                else:
                    faces[MINUS] = [idx[("1", y)] for y in P.plus[x]]
                    faces[PLUS] = inner + [idx[("1", y)] for y in P.minus[x] if y not in K]
            elif i == flip:
                faces = {alpha: [e(i, y) for y in P.faces(x, opposite(alpha))] for alpha in (MINUS, PLUS)}
        dims.append(P.dims[x] + (1 if i == "1" else 0))
        minus.append(faces[MINUS])
        plus.append(faces[PLUS])
    R, new = normalize(dims, minus, plus)
    R.validate()
    proj = [0] * R.size
    for j, (i, x) in enumerate(names):
        proj[new[j]] = x
    tau = MolMap(R, P, proj)
    return Molecule(R, Cyl(U.expr, tuple(sorted(K)), kind)), tau


def partial_gray_cylinder(U: Molecule, K) -> tuple:
    """The cylinder on U relative to K, with its projection onto U."""
    return _cylinder(U, K, "gray")


def inverted_cylinder(U: Molecule, K, side: str) -> tuple:
    if side not in ("left", "right"):
        raise MoleculeError(f"unknown side {side!r}")
    return _cylinder(U, K, side)


def cylinder_element_names(U: Molecule, K) -> list:
    """Names (layer, x) of the cylinder elements, in cylinder id order."""
    P = U.poset
    K = frozenset(K)
    names, dims = [], []
    for x in P.elements():
        if x in K:
            names.append((None, x))
            dims.append(P.dims[x])
        else:
            for i in _LAYERS:
                names.append((i, x))
                dims.append(P.dims[x] + (1 if i == "1" else 0))
    order = sorted(range(len(names)), key=lambda j: dims[j])
    return [names[j] for j in order]
