"""Oriented graded posets: closure, boundaries, maps, duals, isomorphisms.

Elements of a poset with N elements are the integers 0..N-1.  Each element
has a dimension and two disjoint face sets, the input faces (``minus``) and
the output faces (``plus``).  Subsets are plain frozensets of ids.
"""

from __future__ import annotations

import json
from collections import deque
from itertools import chain

MINUS, PLUS, BOTH = "-", "+", "both"


class OGPError(Exception):
    """Structural problem with a poset, a subset or a map."""


class InvalidElement(OGPError):
    pass


def opposite(alpha: str) -> str:
    return PLUS if alpha == MINUS else MINUS


class OGP:
    """Finite oriented graded poset with integer element ids."""

    __slots__ = ("dims", "minus", "plus", "_cominus", "_coplus", "_down", "_hash", "_ebd", "_nbrs")

    def __init__(self, dims, minus, plus, check: bool = True):
        self.dims = tuple(int(d) for d in dims)
        self.minus = tuple(frozenset(f) for f in minus)
        self.plus = tuple(frozenset(f) for f in plus)
        if not (len(self.dims) == len(self.minus) == len(self.plus)):
            raise OGPError("dims and face tables have different lengths")
        n = len(self.dims)
        cominus = [[] for _ in range(n)]
        coplus = [[] for _ in range(n)]
        for x in range(n):
            for y in self.minus[x]:
                if not 0 <= y < n:
                    raise InvalidElement(f"face {y} of {x} is not an element")
                cominus[y].append(x)
            for y in self.plus[x]:
                if not 0 <= y < n:
                    raise InvalidElement(f"face {y} of {x} is not an element")
                coplus[y].append(x)
        self._cominus = tuple(frozenset(c) for c in cominus)
        self._coplus = tuple(frozenset(c) for c in coplus)
        self._down = None
        self._hash = None
        self._ebd = {}
        self._nbrs = None
        if check:
            self.validate()

    # basic accessors

    def __len__(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return len(self.dims)

    def elements(self) -> range:
        return range(len(self.dims))

    def faces(self, x: int, alpha: str = BOTH) -> frozenset:
        if alpha == MINUS:
            return self.minus[x]
        if alpha == PLUS:
            return self.plus[x]
        return self.minus[x] | self.plus[x]

    def cofaces(self, x: int, alpha: str = BOTH) -> frozenset:
        if alpha == MINUS:
            return self._cominus[x]
        if alpha == PLUS:
            return self._coplus[x]
        return self._cominus[x] | self._coplus[x]

    def neighbours(self, x: int) -> frozenset:
        if self._nbrs is None:
            self._nbrs = tuple(
                self.minus[y] | self.plus[y] | self._cominus[y] | self._coplus[y] for y in self.elements()
            )
        return self._nbrs[x]

    def element_boundary(self, x: int, n: int, alpha: str) -> frozenset:
        """Cached n-boundary of the closure of x."""
        key = (x, n, alpha)
        hit = self._ebd.get(key)
        if hit is None:
            hit = self._ebd[key] = boundary(self, n, alpha, self.down_sets()[x])
        return hit

    @property
    def dim(self) -> int:
        return max(self.dims, default=-1)

    def grade(self, n: int, subset=None) -> list:
        src = self.elements() if subset is None else subset
        return sorted(x for x in src if self.dims[x] == n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OGP)
            and self.dims == other.dims
            and self.minus == other.minus
            and self.plus == other.plus
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dims, self.minus, self.plus))
        return self._hash

    def __repr__(self) -> str:
        return f"OGP(size={self.size}, dim={self.dim})"

    def validate(self) -> None:
        for x in self.elements():
            if self.minus[x] & self.plus[x]:
                raise OGPError(f"element {x} has a face of both orientations")
            for y in self.faces(x):
                if self.dims[y] != self.dims[x] - 1:
                    raise OGPError(f"face {y} of {x} has the wrong dimension")
            if self.dims[x] < 0:
                raise OGPError(f"element {x} has negative dimension")
            if self.dims[x] > 0 and (not self.minus[x] or not self.plus[x]):
                raise OGPError(f"element {x} lacks an input or an output face")
            if self.dims[x] == 0 and (self.minus[x] or self.plus[x]):
                raise OGPError(f"point {x} has faces")

    def down_sets(self) -> tuple:
        """cl{x} for every x, computed once."""
        if self._down is None:
            order = sorted(self.elements(), key=lambda x: self.dims[x])
            down = [None] * self.size
            for x in order:
                acc = {x}
                for y in self.faces(x):
                    acc |= down[y]
                down[x] = frozenset(acc)
            self._down = tuple(down)
        return self._down

    def leq(self, x: int, y: int) -> bool:
        return x in self.down_sets()[y]

    # serialization

    def to_dict(self) -> dict:
        return {
            "elements": [
                {
                    "id": x,
                    "dim": self.dims[x],
                    "faces_minus": sorted(self.minus[x]),
                    "faces_plus": sorted(self.plus[x]),
                }
                for x in self.elements()
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "OGP":
        elems = sorted(data["elements"], key=lambda e: e["id"])
        ids = [e["id"] for e in elems]
        if ids != list(range(len(ids))):
            raise OGPError("element ids must be 0..N-1")
        return cls(
            [e["dim"] for e in elems],
            [e["faces_minus"] for e in elems],
            [e["faces_plus"] for e in elems],
        )

    @classmethod
    def from_json(cls, text: str) -> "OGP":
        return cls.from_dict(json.loads(text))


def point_poset() -> OGP:
    return OGP([0], [()], [()])


def _check_ids(P: OGP, S) -> None:
    for x in S:
        if not (isinstance(x, int) and 0 <= x < P.size):
            raise InvalidElement(f"{x!r} is not an element")


def closure(P: OGP, S) -> frozenset:
    S = list(S)
    _check_ids(P, S)
    down = P.down_sets()
    return frozenset(chain.from_iterable(down[x] for x in S))


def is_closed(P: OGP, S) -> bool:
    S = frozenset(S)
    return all(P.faces(x) <= S for x in S)


def subset_dim(P: OGP, S) -> int:
    return max((P.dims[x] for x in S), default=-1)


def maximal(P: OGP, S) -> list:
    S = frozenset(S)
    return sorted(x for x in S if not (P.cofaces(x) & S))


def boundary(P: OGP, n=None, alpha: str = MINUS, S=None) -> frozenset:
    """Input/output n-boundary of a closed subset (all of P by default).

    ``n=None`` means one below the dimension of the subset.
    """
    S = frozenset(P.elements()) if S is None else frozenset(S)
    d = subset_dim(P, S)
    if n is None:
        n = d - 1
    if n < 0:
        return frozenset()
    if d <= n:
        return S
    if alpha == BOTH:
        return boundary(P, n, MINUS, S) | boundary(P, n, PLUS, S)
    other = opposite(alpha)
    seeds = []
    for x in S:
        dx = P.dims[x]
        if dx == n:
            if not (P.cofaces(x, other) & S):
                seeds.append(x)
        elif dx < n and not (P.cofaces(x) & S):
            seeds.append(x)
    return closure(P, seeds)


def interior(P: OGP, S) -> frozenset:
    S = frozenset(S)
    return S - boundary(P, None, BOTH, S)


def is_globular(P: OGP, S=None) -> bool:
    S = frozenset(P.elements()) if S is None else frozenset(S)
    d = subset_dim(P, S)
    for n in range(d):
        for beta in (MINUS, PLUS):
            B = boundary(P, n, beta, S)
            for k in range(n):
                for alpha in (MINUS, PLUS):
                    if boundary(P, k, alpha, B) != boundary(P, k, alpha, S):
                        return False
    return True


def is_round(P: OGP, S=None) -> bool:
    S = frozenset(P.elements()) if S is None else frozenset(S)
    if not is_globular(P, S):
        return False
    d = subset_dim(P, S)
    for n in range(d):
        inter = boundary(P, n, MINUS, S) & boundary(P, n, PLUS, S)
        if inter != boundary(P, n - 1, BOTH, S):
            return False
    return True


def restrict(P: OGP, S) -> tuple:
    """Sub-poset on a closed subset, renumbered in increasing id order.

    Returns the new poset and the inclusion as a tuple new id -> old id.
    """
    incl = tuple(sorted(S))
    back = {x: i for i, x in enumerate(incl)}
    try:
        minus = [[back[y] for y in P.minus[x]] for x in incl]
        plus = [[back[y] for y in P.plus[x]] for x in incl]
    except KeyError:
        raise OGPError("subset is not closed") from None
    return OGP([P.dims[x] for x in incl], minus, plus, check=False), incl


def dual(P: OGP, dims) -> OGP:
    dims = set(dims)
    minus, plus = [], []
    for x in P.elements():
        if P.dims[x] in dims:
            minus.append(P.plus[x])
            plus.append(P.minus[x])
        else:
            minus.append(P.minus[x])
            plus.append(P.plus[x])
    return OGP(P.dims, minus, plus, check=False)


def normalize(dims, minus, plus) -> tuple:
    """Stable-sort elements by dimension; returns (poset, old -> new)."""
    order = sorted(range(len(dims)), key=lambda x: dims[x])
    new = {old: i for i, old in enumerate(order)}
    P = OGP(
        [dims[x] for x in order],
        [[new[y] for y in minus[x]] for x in order],
        [[new[y] for y in plus[x]] for x in order],
        check=False,
    )
    return P, tuple(new[x] for x in range(len(dims)))


# maps


class MolMap:
    """A function between the element sets of two posets."""

    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: OGP, target: OGP, assignment):
        self.source = source
        self.target = target
        self.assignment = tuple(assignment)
        if len(self.assignment) != source.size:
            raise OGPError("assignment is not total")

    def __call__(self, x: int) -> int:
        return self.assignment[x]

    def image(self, S=None) -> frozenset:
        src = self.source.elements() if S is None else S
        return frozenset(self.assignment[x] for x in src)

    @property
    def is_inclusion(self) -> bool:
        return len(set(self.assignment)) == len(self.assignment)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.assignment)) == self.target.size

    @property
    def is_dimension_preserving(self) -> bool:
        s, t = self.source, self.target
        return all(t.dims[self.assignment[x]] == s.dims[x] for x in s.elements())

    def compose(self, other: "MolMap") -> "MolMap":
        """self after other."""
        return MolMap(other.source, self.target, [self.assignment[y] for y in other.assignment])

    def __eq__(self, other) -> bool:
        return isinstance(other, MolMap) and self.assignment == other.assignment and (
            self.source == other.source and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash(self.assignment)


def _fibres_connected(P: OGP, A: frozenset, f: MolMap) -> bool:
    tdown = f.target.down_sets()
    g = f.assignment
    if len({g[a] for a in A}) == len(A):
        return True
    fibres = {}
    for a in A:
        for q in tdown[g[a]]:
            fibres.setdefault(q, set()).add(a)
    for fibre in fibres.values():
        if len(fibre) == 1:
            continue
        start = next(iter(fibre))
        seen = {start}
        todo = [start]
        while todo:
            a = todo.pop()
            for b in P.neighbours(a) & fibre:
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        if len(seen) != len(fibre):
            return False
    return True


def check_map(f: MolMap) -> bool:
    """Map of regular directed complexes: boundaries preserved, finality."""
    P, Q = f.source, f.target
    pdown, qdown = P.down_sets(), Q.down_sets()
    g = f.assignment
    for x in P.elements():
        fx = g[x]
        if Q.dims[fx] > P.dims[x]:
            return False
        if {g[z] for z in pdown[x]} != qdown[fx]:
            return False
        for n in range(P.dims[x]):
            for alpha in (MINUS, PLUS):
                A = P.element_boundary(x, n, alpha)
                if {g[z] for z in A} != Q.element_boundary(fx, n, alpha):
                    return False
                if not _fibres_connected(P, A, f):
                    return False
    return True


def check_cartesian(f: MolMap) -> bool:
    """Grothendieck fibration of the underlying posets."""
    P, Q = f.source, f.target
    pdown, qdown = P.down_sets(), Q.down_sets()
    for x in P.elements():
        if not f.image(pdown[x]) <= qdown[f(x)]:
            return False
        for q in qdown[f(x)]:
            under = [z for z in pdown[x] if f(z) in qdown[q]]
            tops = [y for y in under if f(y) == q and all(z in pdown[y] for z in under)]
            if len(tops) != 1:
                return False
    return True


# isomorphism search


def _refine(posets, colours):
    """Joint colour refinement over a list of posets."""
    while True:
        sigs = []
        for P, col in zip(posets, colours):
            sig = []
            for x in P.elements():
                sig.append((
                    col[x],
                    tuple(sorted(col[y] for y in P.minus[x])),
                    tuple(sorted(col[y] for y in P.plus[x])),
                    tuple(sorted(col[y] for y in P.cofaces(x, MINUS))),
                    tuple(sorted(col[y] for y in P.cofaces(x, PLUS))),
                ))
            sigs.append(sig)
        palette = {s: i for i, s in enumerate(sorted(set(chain.from_iterable(sigs))))}
        new = [[palette[s] for s in sig] for sig in sigs]
        before = len(set(chain.from_iterable(colours)))
        after = len(palette)
        colours = new
        if after == before:
            return colours


def _initial_colours(P: OGP, labels):
    return [(P.dims[x], len(P.minus[x]), len(P.plus[x]), labels[x] if labels else 0)
            for x in P.elements()]


def _isos(U: OGP, V: OGP, ucol, vcol, limit):
    found = []

    def search(cu, cv):
        cu, cv = _refine([U, V], [cu, cv])
        hu, hv = {}, {}
        for x, c in enumerate(cu):
            hu.setdefault(c, []).append(x)
        for y, c in enumerate(cv):
            hv.setdefault(c, []).append(y)
        if sorted((c, len(v)) for c, v in hu.items()) != sorted((c, len(v)) for c, v in hv.items()):
            return
        ambiguous = [c for c, xs in hu.items() if len(xs) > 1]
        if not ambiguous:
            m = [0] * U.size
            for c, (x,) in hu.items():
                m[x] = hv[c][0]
            if _is_iso(U, V, m):
                found.append(tuple(m))
            return
        c = min(ambiguous, key=lambda c: (len(hu[c]), c))
        x = hu[c][0]
        fresh = max(max(cu), max(cv)) + 1
        for y in hv[c]:
            if len(found) >= limit:
                return
            nu, nv = list(cu), list(cv)
            nu[x] = fresh
            nv[y] = fresh
            search(nu, nv)

    if U.size != V.size:
        return found
    if U.size == 0:
        return [()]
    palette = {}
    for c in sorted(set(ucol) | set(vcol), key=repr):
        palette[c] = len(palette)
    search([palette[c] for c in ucol], [palette[c] for c in vcol])
    return found


def _is_iso(U: OGP, V: OGP, m) -> bool:
    if len(set(m)) != len(m):
        return False
    for x in U.elements():
        y = m[x]
        if U.dims[x] != V.dims[y]:
            return False
        if frozenset(m[z] for z in U.minus[x]) != V.minus[y]:
            return False
        if frozenset(m[z] for z in U.plus[x]) != V.plus[y]:
            return False
    return True


def find_isomorphism(U: OGP, V: OGP, ulabels=None, vlabels=None):
    """The orientation-preserving isomorphism U -> V, or None.

    Optional labellings restrict the search to label-preserving bijections.
    """
    if U.size != V.size or sorted(U.dims) != sorted(V.dims):
        return None
    res = _isos(U, V, _initial_colours(U, ulabels), _initial_colours(V, vlabels), 1)
    return MolMap(U, V, res[0]) if res else None


def automorphisms(U: OGP, limit: int = 10) -> list:
    col = _initial_colours(U, None)
    return [MolMap(U, U, m) for m in _isos(U, U, col, col, limit)]


def hasse_edges(P: OGP):
    """(face, element, orientation) triples in a fixed order."""
    for x in P.elements():
        for y in sorted(P.minus[x]):
            yield y, x, MINUS
        for y in sorted(P.plus[x]):
            yield y, x, PLUS


def to_dot(P: OGP, name: str = "P", labels=None) -> str:
    lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
    for x in P.elements():
        extra = ""
        if labels is not None:
            name_ = str(labels[x]).replace('"', '\\"')
            extra = f', xlabel="{name_}"'
        lines.append(f'  n{x} [label="{x}:{P.dims[x]}"{extra}];')
    for y, x, sign in hasse_edges(P):
        style = "dashed" if sign == MINUS else "solid"
        lines.append(f"  n{y} -> n{x} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def bfs_order(P: OGP, start) -> list:
    seen, out, todo = set(start), [], deque(start)
    while todo:
        x = todo.popleft()
        out.append(x)
        for y in chain(sorted(P.faces(x)), sorted(P.cofaces(x))):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return out
