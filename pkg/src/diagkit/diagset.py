"""Finitely presented diagrammatic sets and diagrams as labelled molecules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .ogp import (
    BOTH,
    MINUS,
    PLUS,
    OGP,
    MolMap,
    OGPError,
    boundary,
    check_cartesian,
    check_map,
    find_isomorphism,
    restrict,
)
from .molecule import (
    Molecule,
    SubmoleculeInclusion,
    cell_ext_with_embeddings,
    paste_at_submolecule_with_embeddings,
    paste_with_embeddings,
    point,
    substitute_with_embeddings,
)


class DiagramError(OGPError):
    pass


class LabelMismatch(DiagramError):
    pass


class NotParallel(DiagramError):
    pass


class UnmappedGenerator(DiagramError):
    pass


class InvalidDiagram(DiagramError):
    pass


@dataclass
class Generator:
    name: str
    dim: int
    input: "Diagram | None" = None
    output: "Diagram | None" = None
    shape: Molecule = None
    labels: tuple = ()


class Presentation:
    """Generators listed so that each one only refers to earlier ones."""

    def __init__(self):
        self.generators = {}
        self._order = []
        self._cell_memo = {}

    def __contains__(self, name) -> bool:
        return name in self.generators

    def __getitem__(self, name) -> Generator:
        return self.generators[name]

    def __iter__(self):
        return (self.generators[n] for n in self._order)

    def __len__(self) -> int:
        return len(self._order)

    def dim_of(self, name) -> int:
        try:
            return self.generators[name].dim
        except KeyError:
            raise UnmappedGenerator(f"unknown generator {name!r}") from None

    def add(self, name: str, input: "Diagram | None" = None, output: "Diagram | None" = None) -> Generator:
        if name in self.generators:
            raise DiagramError(f"generator {name!r} already defined")
        if input is None and output is None:
            gen = Generator(name, 0, shape=point(), labels=(name,))
        else:
            if input is None or output is None:
                raise DiagramError("a generator needs both an input and an output")
            for d in (input, output):
                if d.pres is not self:
                    raise DiagramError("boundary diagrams belong to another presentation")
            if input.dim != output.dim:
                raise NotParallel("input and output have different dimensions")
            if not (input.is_round() and output.is_round()):
                raise NotParallel("input and output must be round")
            n = input.dim
            if n > 0:
                for alpha in (MINUS, PLUS):
                    if input.boundary(n - 1, alpha) != output.boundary(n - 1, alpha):
                        raise NotParallel(f"boundaries of {name!r} do not match")
            shape, ei, eo = cell_ext_with_embeddings(input.shape, output.shape)
            labels = [None] * shape.size
            for x, y in enumerate(ei):
                labels[y] = input.labels[x]
            for x, y in enumerate(eo):
                if labels[y] is not None and labels[y] != output.labels[x]:
                    raise NotParallel(f"boundaries of {name!r} do not match")
                labels[y] = output.labels[x]
            labels[-1] = name
            gen = Generator(name, n + 1, input, output, shape, tuple(labels))
        self.generators[name] = gen
        self._order.append(name)
        return gen

    def cell(self, name: str) -> "Diagram":
        g = self[name]
        return Diagram(self, g.shape, g.labels)

    def names(self) -> list:
        return list(self._order)

    # JSON

    def to_dict(self) -> dict:
        out = []
        for g in self:
            entry = {"name": g.name, "dim": g.dim}
            if g.dim > 0:
                entry["input"] = g.input.to_dict()
                entry["output"] = g.output.to_dict()
            out.append(entry)
        return {"generators": out}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Presentation":
        pres = cls()
        for entry in data["generators"]:
            if entry.get("dim", 0) == 0 and "input" not in entry:
                pres.add(entry["name"])
                continue
            i = Diagram.from_dict(pres, entry["input"])
            o = Diagram.from_dict(pres, entry["output"])
            g = pres.add(entry["name"], i, o)
            if "dim" in entry and entry["dim"] != g.dim:
                raise DiagramError(f"generator {g.name!r} declared with the wrong dimension")
        return pres

    @classmethod
    def from_json(cls, text: str) -> "Presentation":
        return cls.from_dict(json.loads(text))


class Diagram:
    """A molecule with every element labelled by a generator name."""

    __slots__ = ("pres", "shape", "labels", "_hash", "witness")

    def __init__(self, pres: Presentation, shape: Molecule, labels):
        self.pres = pres
        self.shape = shape
        self.labels = tuple(labels)
        self._hash = None
        self.witness = None
        if len(self.labels) != shape.size:
            raise DiagramError("labelling is not total")

    @property
    def dim(self) -> int:
        return self.shape.dim

    @property
    def poset(self) -> OGP:
        return self.shape.poset

    def is_round(self) -> bool:
        return self.shape.is_round()

    def is_cell(self) -> bool:
        return self.shape.is_atom()

    def restrict(self, S) -> tuple:
        sub, incl = self.shape.restrict(S)
        return Diagram(self.pres, sub, [self.labels[x] for x in incl]), incl

    def boundary(self, n=None, alpha: str = MINUS) -> "Diagram":
        return self.restrict(self.shape.bd(n, alpha))[0]

    @property
    def input(self) -> "Diagram":
        return self.boundary(None, MINUS)

    @property
    def output(self) -> "Diagram":
        return self.boundary(None, PLUS)

    def type_str(self) -> str:
        return f"{self.input.summary()} => {self.output.summary()}"

    def label_dim(self, x: int) -> int:
        return self.pres.dim_of(self.labels[x])

    def degenerate_at(self, x: int) -> bool:
        return self.label_dim(x) < self.poset.dims[x]

    def top_elements(self) -> list:
        return self.poset.grade(self.dim)

    def summary(self) -> str:
        tops = [self.labels[x] for x in self.top_elements()]
        return f"<{self.dim}:{'|'.join(tops)}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return False
        if self is other:
            return True
        if self.shape.size != other.shape.size or sorted(self.labels) != sorted(other.labels):
            return False
        if self.shape.poset == other.shape.poset and self.labels == other.labels:
            return True
        return find_isomorphism(self.poset, other.poset, self.labels, other.labels) is not None

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape.size, tuple(sorted(zip(self.poset.dims, self.labels)))))
        return self._hash

    def __repr__(self) -> str:
        return f"Diagram({self.summary()}, size={self.shape.size})"

    def iso_to(self, other: "Diagram"):
        return find_isomorphism(self.poset, other.poset, self.labels, other.labels)

    # JSON

    def to_dict(self) -> dict:
        return {
            "shape": self.shape.poset.to_dict(),
            "labels": {str(x): self.labels[x] for x in self.shape.poset.elements()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, pres: Presentation, data: dict, check: bool = True) -> "Diagram":
        shape = data["shape"]
        if isinstance(shape, str):
            from .syntax import parse_molecule

            mol = parse_molecule(shape)
        else:
            mol = Molecule.from_poset(OGP.from_dict(shape))
        labels = [None] * mol.size
        for key, name in data["labels"].items():
            labels[int(key)] = name
        if None in labels:
            raise DiagramError("labelling is not total")
        d = cls(pres, mol, labels)
        if check:
            ok, trace = validate_diagram(d)
            if not ok:
                raise InvalidDiagram(trace)
        return d


def diagram_on(pres: Presentation, shape: Molecule, labels, check: bool = True) -> Diagram:
    d = Diagram(pres, shape, labels)
    if check:
        ok, trace = validate_diagram(d)
        if not ok:
            raise InvalidDiagram(trace)
    return d


# map search


def _labels_cover(la, lb) -> bool:
    have = {}
    for lab in la:
        have[lab] = have.get(lab, 0) + 1
    need = {}
    for lab in lb:
        need[lab] = need.get(lab, 0) + 1
    return all(have.get(lab, 0) >= k for lab, k in need.items())


def _closure_order(A: OGP) -> list:
    """Elements ordered so each one follows its faces and neighbours stay close."""
    seen = set()
    order = []

    def visit(x):
        if x in seen:
            return
        seen.add(x)
        for z in sorted(A.faces(x), key=lambda z: A.dims[z]):
            visit(z)
        order.append(x)

    for x in sorted(A.elements(), key=lambda x: (-A.dims[x], x)):
        visit(x)
    return order


def search_maps(A: OGP, la, B: OGP, lb, limit: int = 1, surjective: bool = True,
                require_map: bool = True, require_cartesian: bool = True, budget: int | None = None) -> list:
    """Label-respecting maps A -> B satisfying the closure condition.

    Elements are assigned bottom-up, and each one is checked against the
    boundary condition on its closure as soon as it is placed, so bad
    partial maps are cut early.  With a node ``budget`` the search stops
    quietly once that many partial maps have been tried.
    """
    adown, bdown = A.down_sets(), B.down_sets()
    if surjective and not _labels_cover(la, lb):
        return []
    order = _closure_order(A)
    by_label = {}
    for c in B.elements():
        by_label.setdefault(lb[c], []).append(c)
    assign = [None] * A.size
    found = []

    def local_ok(y, c) -> bool:
        if {assign[z] for z in adown[y]} != bdown[c]:
            return False
        for n in range(A.dims[y]):
            for alpha in (MINUS, PLUS):
                if {assign[z] for z in A.element_boundary(y, n, alpha)} != B.element_boundary(c, n, alpha):
                    return False
        return True

    nodes = [0]

    def go(i):
        if len(found) >= limit:
            return
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise _OutOfNodes
        if i == len(order):
            if surjective and len(set(assign)) != B.size:
                return
            f = MolMap(A, B, assign)
            if require_map and not check_map(f):
                return
            if require_cartesian and not check_cartesian(f):
                return
            found.append(tuple(assign))
            return
        y = order[i]
        for c in by_label.get(la[y], ()):
            if B.dims[c] > A.dims[y]:
                continue
            assign[y] = c
            if local_ok(y, c):
                go(i + 1)
        assign[y] = None

    try:
        go(0)
    except _OutOfNodes:
        pass
    return found


class _OutOfNodes(Exception):
    pass


def _cell_check(pres: Presentation, d: Diagram, x: int):
    P = d.poset
    S = P.down_sets()[x]
    A, incl = restrict(P, S)
    la = tuple(d.labels[y] for y in incl)
    name = d.labels[x]
    key = (A, la)
    memo = pres._cell_memo
    if key in memo:
        return memo[key]
    if name not in pres:
        memo[key] = f"unknown generator {name!r}"
        return memo[key]
    g = pres[name]
    if g.dim > P.dims[x]:
        result = f"label {name!r} has dimension above element {x}"
    elif g.dim == P.dims[x]:
        ok = find_isomorphism(A, g.shape.poset, la, g.labels) is not None
        result = None if ok else f"element {x} does not match the cell {name!r}"
    else:
        ok = bool(search_maps(A, la, g.shape.poset, g.labels))
        result = None if ok else f"no degeneracy of {name!r} fits element {x}"
    memo[key] = result
    return result


def validate_diagram(d: Diagram) -> tuple:
    """(ok, trace); the trace names the first failing element."""
    P = d.poset
    for x in sorted(P.elements(), key=lambda y: (P.dims[y], y)):
        msg = _cell_check(d.pres, d, x)
        if msg is not None:
            return False, msg
    return True, "ok"


def is_valid(d: Diagram) -> bool:
    return validate_diagram(d)[0]


# pasting and substitution


def _combine(pres, shape, parts) -> Diagram:
    labels = [None] * shape.size
    for d, emb in parts:
        for x, y in (emb.items() if isinstance(emb, dict) else enumerate(emb)):
            lab = d.labels[x]
            if labels[y] is not None and labels[y] != lab:
                raise LabelMismatch(f"labels {labels[y]!r} and {lab!r} meet at element {y}")
            labels[y] = lab
    return Diagram(pres, shape, labels)


def paste_diagrams(u: Diagram, v: Diagram, k: int = None) -> Diagram:
    if k is None:
        k = min(u.dim, v.dim) - 1
    if u.boundary(k, PLUS) != v.boundary(k, MINUS):
        raise LabelMismatch(f"the {k}-boundaries do not agree")
    shape, eu, ev = paste_with_embeddings(u.shape, v.shape, k, (u.labels, v.labels))
    return _combine(u.pres, shape, [(u, eu), (v, ev)])


def paste_with_maps(u: Diagram, v: Diagram, k: int = None) -> tuple:
    if k is None:
        k = min(u.dim, v.dim) - 1
    if u.boundary(k, PLUS) != v.boundary(k, MINUS):
        raise LabelMismatch(f"the {k}-boundaries do not agree")
    shape, eu, ev = paste_with_embeddings(u.shape, v.shape, k, (u.labels, v.labels))
    return _combine(u.pres, shape, [(u, eu), (v, ev)]), eu, ev


def paste_sub(u: Diagram, v: Diagram, k: int, iota, side: str = "left") -> tuple:
    """Pasting at a subdiagram; returns the diagram and both embeddings.

    ``iota`` is the set of element ids (or a submolecule inclusion) in the
    larger factor: v for side left, u for side right.
    """
    big = v if side == "left" else u
    small = u if side == "left" else v
    inc = _as_inclusion(big, iota)
    sub = Diagram(u.pres, inc.sub, [big.labels[x] for x in inc.map])
    bd = small.boundary(k, PLUS if side == "left" else MINUS)
    if bd != sub:
        raise LabelMismatch("subdiagram does not match the pasted boundary")
    shape, eu, ev = paste_at_submolecule_with_embeddings(u.shape, v.shape, k, inc, side,
                                                          (u.labels, v.labels))
    return _combine(u.pres, shape, [(u, eu), (v, ev)]), eu, ev


def _as_inclusion(d: Diagram, iota) -> SubmoleculeInclusion:
    if isinstance(iota, SubmoleculeInclusion):
        return iota
    S = frozenset(iota)
    sub, incl = d.shape.restrict(S)
    return SubmoleculeInclusion(sub, d.shape, incl, ("subset",))


def substitute_diagram(u: Diagram, w: Diagram, iota) -> tuple:
    """u with the subdiagram at iota replaced by w; also the embeddings."""
    inc = _as_inclusion(u, iota)
    sub = Diagram(u.pres, inc.sub, [u.labels[x] for x in inc.map])
    n = sub.dim
    if w.dim != n:
        raise NotParallel("replacement has the wrong dimension")
    for alpha in (MINUS, PLUS):
        if w.boundary(n - 1, alpha) != sub.boundary(n - 1, alpha):
            raise NotParallel("replacement is not parallel to the subdiagram")
    shape, ek, ew = substitute_with_embeddings(u.shape, w.shape, inc, (u.labels, w.labels))
    return _combine(u.pres, shape, [(u, ek), (w, ew)]), ek, ew


def subdiagram_of(d: Diagram, S) -> Diagram:
    return d.restrict(frozenset(S))[0]


def find_subdiagram(big: Diagram, small: Diagram, within=None, limit: int = 50) -> list:
    """Element-id subsets of big (inside ``within``) on which big restricts to small."""
    P = big.poset
    region = frozenset(P.elements()) if within is None else frozenset(within)
    Q = small.poset
    order = sorted(Q.elements(), key=lambda x: Q.dims[x])
    cand = {}
    for y in region:
        cand.setdefault((P.dims[y], big.labels[y]), []).append(y)
    out = []
    assign = {}
    used = set()

    def go(i):
        if len(out) >= limit:
            return
        if i == len(order):
            img = frozenset(assign.values())
            if img not in out:
                out.append(img)
            return
        x = order[i]
        for y in cand.get((Q.dims[x], small.labels[x]), ()):
            if y in used:
                continue
            if frozenset(assign[z] for z in Q.minus[x]) != P.minus[y]:
                continue
            if frozenset(assign[z] for z in Q.plus[x]) != P.plus[y]:
                continue
            assign[x] = y
            used.add(y)
            go(i + 1)
            used.discard(y)
            del assign[x]

    go(0)
    return out


# morphisms


@dataclass
class PresentationMorphism:
    source: Presentation
    target: Presentation
    generator_map: dict = field(default_factory=dict)

    def __post_init__(self):
        for g in self.source:
            if g.name not in self.generator_map:
                raise UnmappedGenerator(f"generator {g.name!r} is not mapped")
            img = self.generator_map[g.name]
            if img not in self.target:
                raise UnmappedGenerator(f"target has no generator {img!r}")
            if self.target[img].dim != g.dim:
                raise DiagramError(f"{g.name!r} and {img!r} have different dimensions")
            if g.dim > 0:
                t = self.target[img]
                if apply_morphism(self, g.input) != t.input or apply_morphism(self, g.output) != t.output:
                    raise DiagramError(f"boundaries of {g.name!r} are not preserved")


def apply_morphism(f: PresentationMorphism, d: Diagram) -> Diagram:
    try:
        labels = [f.generator_map[lab] for lab in d.labels]
    except KeyError as exc:
        raise UnmappedGenerator(f"generator {exc.args[0]!r} is not mapped") from None
    return Diagram(f.target, d.shape, labels)


def identity_morphism(pres: Presentation) -> PresentationMorphism:
    return PresentationMorphism(pres, pres, {g.name: g.name for g in pres})
