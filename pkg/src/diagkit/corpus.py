"""Seeded random generators for shapes, presentations, diagrams and contexts.

Everything takes a ``random.Random`` so a corpus is reproducible from its
seed.  Generators retry internally and skip constructions that the kernel
rejects, so they only ever return validated objects.
"""

from __future__ import annotations

import random

from .ogp import BOTH, MINUS, PLUS, OGPError, closure, maximal
from .molecule import (
    Molecule,
    MoleculeError,
    SubmoleculeInclusion,
    arrow,
    cell_ext,
    dual,
    globe,
    gray_product,
    inverted_cylinder,
    partial_gray_cylinder,
    paste,
    paste_at_submolecule,
    point,
    substitute,
)
from .diagset import (
    Diagram,
    DiagramError,
    Presentation,
    PresentationMorphism,
    find_subdiagram,
    paste_diagrams,
    paste_sub,
)
from . import context as cx
from . import structcells as sc
from .equivcalc import cert_for_degenerate


# shapes


def _closed_subset(rng: random.Random, U: Molecule, within) -> frozenset:
    pool = sorted(within)
    if not pool:
        return frozenset()
    pick = rng.sample(pool, rng.randint(0, min(3, len(pool))))
    return closure(U.poset, pick)


def _atom_at(U: Molecule, x: int) -> SubmoleculeInclusion:
    S = closure(U.poset, [x])
    sub, incl = U.restrict(S)
    return SubmoleculeInclusion(sub, U, incl)


def _step(rng: random.Random, U: Molecule, max_dim: int) -> Molecule:
    n = U.dim
    op = rng.choice(["cell", "paste", "paste", "gray", "cyl", "lcyl", "rcyl", "sub", "subst", "dual"])
    if op == "cell":
        if n >= max_dim:
            return None
        return cell_ext(U, U)
    if op == "paste":
        if n == 0:
            return None
        k = rng.randrange(n)
        if rng.random() < 0.5:
            B = U.boundary(k, PLUS)
            V = cell_ext(B, B) if rng.random() < 0.5 else partial_gray_cylinder(B, B.bd(None, BOTH))[0]
            return paste(U, V, k)
        B = U.boundary(k, MINUS)
        V = cell_ext(B, B)
        return paste(V, U, k)
    if op == "gray":
        if n + 1 > max_dim:
            return None
        return gray_product(arrow(), U) if rng.random() < 0.5 else gray_product(U, arrow())
    if op == "cyl":
        if n + 1 > max_dim:
            return None
        K = _closed_subset(rng, U, U.bd(None, BOTH)) if n > 0 else frozenset()
        return partial_gray_cylinder(U, K)[0]
    if op in ("lcyl", "rcyl"):
        if n + 1 > max_dim or n == 0:
            return None
        alpha = PLUS if op == "lcyl" else MINUS
        K = U.bd(None, alpha) if rng.random() < 0.5 else _closed_subset(rng, U, U.bd(None, alpha))
        return inverted_cylinder(U, K, "left" if op == "lcyl" else "right")[0]
    if op == "sub":
        if n == 0:
            return None
        alpha = rng.choice([MINUS, PLUS])
        B = U.bd(n - 1, alpha)
        tops = [x for x in maximal(U.poset, B) if U.poset.dims[x] == n - 1]
        if not tops:
            return None
        iota = _atom_at(U, rng.choice(tops))
        V = cell_ext(iota.sub, iota.sub)
        return paste_at_submolecule(V, U, n - 1, iota, "left") if alpha == MINUS \
            else paste_at_submolecule(U, V, n - 1, iota, "right")
    if op == "subst":
        if n < 2:
            return None
        iota = _atom_at(U, rng.choice(U.poset.grade(n)))
        A = iota.sub
        B = A.boundary(None, PLUS)
        return substitute(U, paste(A, cell_ext(B, B), n - 1), iota)
    dims = {d for d in range(n + 1) if rng.random() < 0.5}
    return dual(U, dims)


def random_molecule(rng: random.Random, max_dim: int = 3, max_size: int = 40, steps: int = 3) -> Molecule:
    U = rng.choice([point(), arrow(), arrow(), globe(2), globe(min(3, max_dim))])
    if U.dim > max_dim:
        U = arrow()
    for _ in range(rng.randint(1, steps)):
        try:
            V = _step(rng, U, max_dim)
        except (MoleculeError, OGPError):
            V = None
        if V is not None and V.size <= max_size and V.dim <= max_dim:
            U = V
    return U


def random_round_molecule(rng: random.Random, max_dim: int = 3, max_size: int = 40, tries: int = 50) -> Molecule:
    for _ in range(tries):
        U = random_molecule(rng, max_dim, max_size)
        if U.is_round():
            return U
    return globe(max_dim)


# presentations


def _paths(pres: Presentation, points: list, arrows: dict, max_len: int = 2) -> list:
    """Round 1-diagrams made of up to max_len consecutive arrows."""
    out = [pres.cell(a) for arrs in arrows.values() for a in arrs]
    frontier = list(out)
    for _ in range(max_len - 1):
        nxt = []
        for p in frontier:
            for q in out:
                if q.dim == 1 and p.boundary(0, PLUS) == q.boundary(0, MINUS):
                    nxt.append(paste_diagrams(p, q, 0))
        out.extend(nxt)
        frontier = nxt
    return out


def _parallel_pairs(ds: list) -> list:
    pairs = []
    for i, a in enumerate(ds):
        for b in ds[i:]:
            if a.input == b.input and a.output == b.output:
                pairs.append((a, b))
                if a is not b:
                    pairs.append((b, a))
    return pairs


def random_presentation(rng: random.Random, dim: int = 3) -> Presentation:
    """Points in a row, parallel arrows between neighbours, then higher cells
    between randomly chosen parallel round composites."""
    pres = Presentation()
    npts = rng.randint(2, 3)
    points = [f"p{i}" for i in range(npts)]
    for p in points:
        pres.add(p)
    arrows = {}
    for i in range(npts - 1):
        for j in range(rng.randint(1, 2)):
            name = f"f{i}{j}"
            pres.add(name, pres.cell(points[i]), pres.cell(points[i + 1]))
            arrows.setdefault(i, []).append(name)
    if dim >= 2:
        pairs = _parallel_pairs(_paths(pres, points, arrows))
        rng.shuffle(pairs)
        for j, (a, b) in enumerate(pairs[: rng.randint(2, 4)]):
            pres.add(f"a{j}", a, b)
    if dim >= 3:
        twos = [pres.cell(g.name) for g in pres if g.dim == 2]
        extra = []
        for x in twos:
            for y in twos:
                if x.output == y.input and x is not y:
                    extra.append(paste_diagrams(x, y, 1))
        pairs = _parallel_pairs(twos + extra[:4])
        rng.shuffle(pairs)
        for j, (a, b) in enumerate(pairs[: rng.randint(1, 3)]):
            pres.add(f"m{j}", a, b)
    return pres


def cells_of_dim(pres: Presentation, n: int) -> list:
    return [pres.cell(g.name) for g in pres if g.dim == n]


# diagrams


def _extend(rng: random.Random, d: Diagram, max_dim: int) -> Diagram:
    pres = d.pres
    n = d.dim
    op = rng.choice(["after", "before", "into", "onto", "unit"])
    cells = [pres.cell(g.name) for g in pres if 0 < g.dim <= n]
    if op == "unit":
        return sc.unit(d, check=False) if n < max_dim else None
    if op in ("after", "before") and n > 0:
        k = rng.randrange(n)
        alpha = PLUS if op == "after" else MINUS
        B = d.boundary(k, alpha)
        cands = [c for c in cells if c.dim > k and c.boundary(k, MINUS if op == "after" else PLUS) == B]
        if not cands or rng.random() < 0.2:
            cands = [sc.unit(B, check=False)]
        c = rng.choice(cands)
        return paste_diagrams(d, c, k) if op == "after" else paste_diagrams(c, d, k)
    if op in ("into", "onto") and n > 0:
        cands = [c for c in cells if c.dim <= n]
        rng.shuffle(cands)
        for c in cands[:4]:
            k = c.dim - 1
            if op == "into":
                spots = find_subdiagram(d, c.output, within=d.shape.bd(k, MINUS), limit=4)
                if spots:
                    return paste_sub(c, d, k, rng.choice(spots), "left")[0]
            else:
                spots = find_subdiagram(d, c.input, within=d.shape.bd(k, PLUS), limit=4)
                if spots:
                    return paste_sub(d, c, k, rng.choice(spots), "right")[0]
    return None


def random_diagram(rng: random.Random, pres: Presentation, max_dim: int = 3, steps: int = 2,
                   max_size: int = 60, min_dim: int = 0) -> Diagram:
    gens = [g.name for g in pres if min_dim <= g.dim <= max_dim]
    d = pres.cell(rng.choice(gens))
    for _ in range(rng.randint(0, steps)):
        try:
            e = _extend(rng, d, max_dim)
        except (DiagramError, MoleculeError, OGPError):
            e = None
        if e is not None and e.shape.size <= max_size:
            d = e
    return d


def random_round_diagram(rng: random.Random, pres: Presentation, max_dim: int = 3, min_dim: int = 1,
                         tries: int = 40, **kw) -> Diagram:
    for _ in range(tries):
        d = random_diagram(rng, pres, max_dim, min_dim=min_dim, **kw)
        if d.dim >= min_dim and d.is_round():
            return d
    return pres.cell(next(g.name for g in pres if g.dim >= min_dim))


def random_degenerate(rng: random.Random, u: Diagram) -> Diagram:
    """A degenerate diagram over u with a recorded witness."""
    choice = rng.choice(["unit", "lunitor", "runitor", "reverse"] if u.dim > 0 else ["unit"])
    if choice == "unit":
        return sc.unit(u)
    if choice == "lunitor":
        return sc.left_unitor(u)
    if choice == "runitor":
        return sc.right_unitor(u)
    return sc.reverse(sc.unit(u))


# arguments for contexts


def arguments(rng: random.Random, pres: Presentation, v: Diagram, w: Diagram, count: int = 10,
              seed_cells=None, exact_dim: bool = False) -> list:
    """Up to ``count`` distinct round diagrams whose boundary pair is (v, w).

    Starts from the given seeds, or from the cells of that type, and
    whiskers them with units, unitors and endo-cells of v and w.
    """
    n = v.dim + 1
    seeds = list(seed_cells or [])
    seeds += [c for c in cells_of_dim(pres, n) if c.input == v and c.output == w]
    if not seeds:
        return []
    endo_v = [c for c in cells_of_dim(pres, n) if c.input == v and c.output == v] + [sc.unit(v)]
    endo_w = [c for c in cells_of_dim(pres, n) if c.input == w and c.output == w] + [sc.unit(w)]
    out = list(seeds)
    for _ in range(count * 6):
        if len(out) >= count:
            break
        a = rng.choice(out)
        how = rng.randrange(3 if exact_dim else 5)
        try:
            if how == 0:
                b = paste_diagrams(rng.choice(endo_v), a, n - 1)
            elif how == 1:
                b = paste_diagrams(a, rng.choice(endo_w), n - 1)
            elif how == 2:
                b = sc.pointwise_reverse(a) if sc.top_degenerate(a) and a.input == a.output else \
                    paste_diagrams(a, sc.unit(w), n - 1)
            elif how == 3:
                b = sc.unit(a) if a.dim == n else a
            else:
                b = sc.left_unitor(a) if a.dim == n else a
        except (DiagramError, MoleculeError):
            continue
        if b.is_round() and b.boundary(n - 1, MINUS) == v and b.boundary(n - 1, PLUS) == w \
                and not any(b == o for o in out):
            out.append(b)
    return out[:count]


# contexts


def _round_pieces(d: Diagram) -> list:
    """Subsets of d that a pasted diagram may attach to: d itself and its cells."""
    out = [None]
    if d.dim > 0:
        for x in d.poset.grade(d.dim):
            S = closure(d.poset, [x])
            if len(d.poset.grade(d.dim)) > 1:
                out.append(S)
    return out


def _pasteable(rng: random.Random, piece: Diagram, side: str, degenerate_only: bool) -> tuple:
    """(u, cert) with u's output (side left) or input (side right) equal to piece."""
    opts = [sc.unit(piece)]
    # unitors need a round piece; intermediate codomains need not be round
    if piece.dim > 0 and piece.is_round():
        if side == "left":
            opts += [sc.reverse(sc.left_unitor(piece)), sc.right_unitor(piece)]
        else:
            opts += [sc.left_unitor(piece), sc.reverse(sc.right_unitor(piece))]
    degenerate = list(opts)
    if not degenerate_only:
        key = "output" if side == "left" else "input"
        opts += [c for c in cells_of_dim(piece.pres, piece.dim + 1) if getattr(c, key) == piece]
    u = rng.choice(opts)
    cert = cert_for_degenerate(u) if any(u is o for o in degenerate) else None
    return u, cert


def random_context(rng: random.Random, v: Diagram, w: Diagram, depth: int = 2, promote: bool = True,
                   degenerate_only: bool = False) -> cx.Context:
    """A random context with domain (v, w)."""
    choices = ["lp", "rp", "comp"]
    if depth <= 0:
        choices = ["lp", "rp", "id"]
    if promote and v.dim >= 1:
        choices.append("promote")
    op = rng.choice(choices)
    if op == "id":
        return cx.Identity(v, w)
    if op in ("lp", "rp"):
        base = v if op == "lp" else w
        S = rng.choice(_round_pieces(base))
        piece = base if S is None else base.restrict(S)[0]
        u, cert = _pasteable(rng, piece, "left" if op == "lp" else "right", degenerate_only)
        cls = cx.LeftPaste if op == "lp" else cx.RightPaste
        return cls(u, S, v, w, cert)
    if op == "comp":
        F = random_context(rng, v, w, depth - 1, promote, degenerate_only)
        G = random_context(rng, *F.codomain, depth - 1, promote, degenerate_only)
        return cx.Compose(G, F)
    inner = random_context(rng, v.input, v.output, depth - 1, promote, degenerate_only)
    return cx.Promote(inner, v, w)


def random_morphism(rng: random.Random, pres: Presentation, merge: float = 0.4) -> PresentationMorphism:
    """A morphism onto a quotient presentation that identifies some parallel generators."""
    target = Presentation()
    gmap = {}

    def image(d: Diagram) -> Diagram:
        return Diagram(target, d.shape, [gmap[lab] for lab in d.labels])

    for g in pres:
        if g.dim == 0:
            ins = outs = None
        else:
            ins, outs = image(g.input), image(g.output)
        same = [t.name for t in target if t.dim == g.dim
                and (g.dim == 0 or (t.input == ins and t.output == outs))]
        if same and rng.random() < merge:
            gmap[g.name] = rng.choice(same)
        else:
            name = "t_" + g.name
            target.add(name, ins, outs)
            gmap[g.name] = name
    return PresentationMorphism(pres, target, gmap)
