"""Line-oriented command interpreter over a workspace of named objects.

Every binding verb takes the new name first, optionally followed by ``=``::

    load pres.json
    shape g2 = cell(cell(pt,pt),cell(pt,pt))
    unit u1 --of f
    check-equiv u1 cert:degeneracy --depth 1

Exit codes: 0 success, 1 parse error, 2 validation error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys

from . import context as cx
from . import natcalc as nc
from . import structcells as sc
from .diagset import Diagram, DiagramError, Presentation, paste_diagrams, paste_sub, search_maps, substitute_diagram
from .equivcalc import (
    BudgetExhausted,
    cert_for_degenerate,
    cert_from_dict,
    cert_size,
    cert_to_dict,
    certify_cells,
    check_cert,
)
from .molecule import Molecule, Undecided, is_molecule
from .ogp import MINUS, PLUS, OGP, MolMap, OGPError, check_cartesian, check_map, is_globular
from .syntax import ParseError, parse_context, parse_molecule, parse_term, to_dot

EXIT_PARSE, EXIT_INVALID, EXIT_BUDGET = 1, 2, 3


class CommandFailed(Exception):
    """A check that ran to completion with a negative answer."""

    def __init__(self, message: str, code: int = EXIT_INVALID, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


class _Args(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _parser(verb: str, *specs) -> _Args:
    p = _Args(prog=verb, add_help=False)
    for names, kw in specs:
        p.add_argument(*names, **kw)
    return p


def _ids(text: str) -> frozenset:
    if text in ("*", ""):
        return None
    t = parse_term(text if text[0] in "[{∅" else f"[{text}]")
    if t.head == "∅":
        return frozenset()
    if t.head != "set":
        raise ParseError(f"expected an id list, found {text!r}")
    return frozenset(t.args)


def _side(text: str) -> str:
    table = {"in": MINUS, "input": MINUS, "-": MINUS, "out": PLUS, "output": PLUS, "+": PLUS}
    if text not in table:
        raise ParseError(f"side must be in or out, not {text!r}")
    return table[text]


def _diagram_info(d: Diagram) -> dict:
    return {"summary": d.summary(), "dim": d.dim, "size": d.shape.size, "round": d.is_round()}


class Workspace:
    """Named shapes, diagrams, contexts, natural equivalences and certificates."""

    def __init__(self, base_dir: str = "."):
        self.pres = Presentation()
        self.shapes: dict = {}
        self.diagrams: dict = {}
        self.contexts: dict = {}
        self.nats: dict = {}
        self.certs: dict = {}
        self.base_dir = base_dir

    # name handling

    def _fresh(self, name: str) -> str:
        if not name or not (name[0].isalpha() or name[0] == "_"):
            raise ParseError(f"bad name {name!r}")
        for table in (self.shapes, self.diagrams, self.contexts, self.nats, self.certs):
            if name in table:
                raise DiagramError(f"name {name!r} is already bound")
        return name

    def diagram(self, name: str) -> Diagram:
        if name in self.diagrams:
            return self.diagrams[name]
        if name in self.pres:
            return self.pres.cell(name)
        raise ParseError(f"unknown diagram {name!r}")

    def shape(self, name: str) -> Molecule:
        if name in self.shapes:
            return self.shapes[name]
        if name in self.diagrams or name in self.pres:
            return self.diagram(name).shape
        return parse_molecule(name, self.shapes)

    def context(self, name: str) -> cx.Context:
        if name in self.contexts:
            return self.contexts[name]
        return parse_context(name, self._diagram_env(), self.contexts, certify=_certify_quietly)

    def _diagram_env(self) -> dict:
        env = {g.name: self.pres.cell(g.name) for g in self.pres}
        env.update(self.diagrams)
        return env

    def path(self, name: str) -> str:
        return name if os.path.isabs(name) else os.path.join(self.base_dir, name)

    # running

    def run_line(self, line: str) -> dict:
        words = shlex.split(line, comments=True)
        if not words:
            return {}
        verb, rest = words[0], words[1:]
        handler = VERBS.get(verb)
        if handler is None:
            raise ParseError(f"unknown command {verb!r}")
        out = handler(self, rest)
        out.setdefault("command", verb)
        return out


def _certify_quietly(u: Diagram):
    if sc.top_degenerate(u) and u.is_round():
        try:
            return cert_for_degenerate(u)
        except DiagramError:
            pass
    try:
        return certify_cells(u)
    except DiagramError:
        return None


def _split_binding(rest: list) -> tuple:
    if not rest:
        raise ParseError("missing result name")
    name, tail = rest[0], rest[1:]
    if tail and tail[0] == "=":
        tail = tail[1:]
    return name, tail


def _bind_diagram(ws: Workspace, name: str, d: Diagram, verb: str) -> dict:
    ws.diagrams[ws._fresh(name)] = d
    info = _diagram_info(d)
    return {"command": verb, "name": name, **info, "text": f"{name}: {info['summary']} size {info['size']}"}


# verbs


def do_load(ws: Workspace, rest: list) -> dict:
    p = _parser("load", (("file",), {}), (("--as",), {"dest": "name"}))
    a = p.parse_args(rest)
    try:
        with open(ws.path(a.file), encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{a.file}: {exc}") from None
    except OSError as exc:
        raise ParseError(f"{a.file}: {exc.strerror}") from None
    if "generators" in data:
        if len(ws.pres):
            raise DiagramError("a presentation is already loaded")
        ws.pres = Presentation.from_dict(data)
        names = ws.pres.names()
        return {"generators": names, "text": f"loaded {len(names)} generators"}
    if "shape" in data:
        if not a.name:
            raise ParseError("load of a diagram needs --as NAME")
        return _bind_diagram(ws, a.name, Diagram.from_dict(ws.pres, data), "load")
    if "elements" in data:
        if not a.name:
            raise ParseError("load of a shape needs --as NAME")
        m = Molecule.from_poset(OGP.from_dict(data))
        ws.shapes[ws._fresh(a.name)] = m
        return {"name": a.name, "size": m.size, "text": f"{a.name}: shape of size {m.size}"}
    if "kind" in data:
        if not a.name:
            raise ParseError("load of a context or certificate needs --as NAME")
        if data["kind"] not in ("id", "lp", "rp", "comp", "promote"):
            ws.certs[ws._fresh(a.name)] = cert_from_dict(ws.pres, data)
            return {"name": a.name, "text": f"{a.name}: certificate"}
        F = cx.context_from_dict(ws.pres, data)
        ws.contexts[ws._fresh(a.name)] = F
        return {"name": a.name, "context": repr(F), "text": f"{a.name}: {F!r}"}
    raise ParseError(f"{a.file}: unrecognised JSON object")


def do_shape(ws: Workspace, rest: list) -> dict:
    name, tail = _split_binding(rest)
    if not tail:
        raise ParseError("shape needs an expression")
    m = parse_molecule(" ".join(tail), ws.shapes)
    ws.shapes[ws._fresh(name)] = m
    return {"name": name, "size": m.size, "dim": m.dim, "text": f"{name}: dim {m.dim} size {m.size}"}


def do_diagram(ws: Workspace, rest: list) -> dict:
    name, tail = _split_binding(rest)
    text = " ".join(tail)
    if not text:
        raise ParseError("diagram needs a generator, a diagram or 'shape : labels'")
    if ":" in text:
        expr, labels = text.split(":", 1)
        shape = ws.shape(expr.strip())
        labs = labels.split()
        if len(labs) != shape.size:
            raise DiagramError(f"shape has {shape.size} elements but {len(labs)} labels were given")
        d = Diagram.from_dict(ws.pres, {"shape": shape.poset.to_dict(),
                                        "labels": {str(i): lab for i, lab in enumerate(labs)}})
    else:
        d = ws.diagram(text.strip())
    return _bind_diagram(ws, name, d, "diagram")


def do_boundary(ws: Workspace, rest: list) -> dict:
    name, tail = _split_binding(rest)
    p = _parser("boundary", (("of",), {}), (("--dim",), {"type": int}), (("--side",), {"default": "in"}))
    a = p.parse_args(tail)
    d = ws.diagram(a.of)
    return _bind_diagram(ws, name, d.boundary(a.dim, _side(a.side)), "boundary")


def do_paste(ws: Workspace, rest: list) -> dict:
    name, tail = _split_binding(rest)
    p = _parser("paste", (("left",), {}), (("right",), {}), (("--dim",), {"type": int}),
                (("--at",), {}), (("--side",), {"default": "left", "choices": ["left", "right"]}))
    a = p.parse_args(tail)
    x, y = ws.diagram(a.left), ws.diagram(a.right)
    if a.at is None:
        d = paste_diagrams(x, y, a.dim)
    else:
        k = a.dim if a.dim is not None else min(x.dim, y.dim) - 1
        d = paste_sub(x, y, k, _ids(a.at), a.side)[0]
    return _bind_diagram(ws, name, d, "paste")


def do_subst(ws: Workspace, rest: list) -> dict:
    name, tail = _split_binding(rest)
    p = _parser("subst", (("base",), {}), (("replacement",), {}), (("--at",), {"required": True}))
    a = p.parse_args(tail)
    d = substitute_diagram(ws.diagram(a.base), ws.diagram(a.replacement), _ids(a.at))[0]
    return _bind_diagram(ws, name, d, "subst")


def _cell_verb(verb: str, build):
    def run(ws: Workspace, rest: list) -> dict:
        name, tail = _split_binding(rest)
        p = _parser(verb, (("--of",), {"required": True}), (("--at",), {}), (("--k",), {"type": int}),
                    (("--side",), {"default": "left", "choices": ["left", "right"]}))
        a = p.parse_args(tail)
        d = ws.diagram(a.of)
        iota = None if a.at is None else _ids(a.at)
        return _bind_diagram(ws, name, build(d, iota, a), verb)
    return run


def _hunitor(d, iota, a):
    if a.k is None:
        raise ParseError("hunitor needs --k")
    return sc.higher_unitor(d, a.k, iota, a.side)


def do_context(ws: Workspace, rest: list) -> dict:
    name, tail = _split_binding(rest)
    domain = None
    if "--domain" in tail:
        i = tail.index("--domain")
        if len(tail) < i + 3:
            raise ParseError("--domain needs two diagrams")
        domain = (ws.diagram(tail[i + 1]), ws.diagram(tail[i + 2]))
        tail = tail[:i] + tail[i + 3:]
    F = parse_context(" ".join(tail), ws._diagram_env(), ws.contexts, domain, certify=_certify_quietly)
    ws.contexts[ws._fresh(name)] = F
    return {"name": name, "context": repr(F), "dim": F.dim, "trim": F.is_trim,
            "round": cx.is_round_context(F), "text": f"{name}: {F!r} (dim {F.dim})"}


def do_apply(ws: Workspace, rest: list) -> dict:
    name, tail = _split_binding(rest)
    p = _parser("apply", (("context",), {}), (("diagram",), {}))
    a = p.parse_args(tail)
    return _bind_diagram(ws, name, ws.context(a.context).apply(ws.diagram(a.diagram)), "apply")


def do_layering(ws: Workspace, rest: list) -> dict:
    p = _parser("layering", (("context",), {}))
    a = p.parse_args(rest)
    layers = cx.context_layering(ws.context(a.context))
    rows = [{"left": ell.summary(), "right": r.summary()} for ell, r in layers]
    text = "\n".join(f"layer {i + 1}: {row['left']} | {row['right']}" for i, row in enumerate(rows))
    return {"layers": rows, "text": text}


def do_trim_factor(ws: Workspace, rest: list) -> dict:
    p = _parser("trim-factor", (("context",), {}), (("--as",), {"nargs": 2, "dest": "names"}))
    a = p.parse_args(rest)
    T, G = cx.trim_factorize(ws.context(a.context))
    if a.names:
        ws.contexts[ws._fresh(a.names[0])] = T
        ws.contexts[ws._fresh(a.names[1])] = G
    return {"trim": repr(T), "lower": repr(G), "text": f"trim: {T!r}\nlower: {G!r}"}


def _yes(flag: bool) -> str:
    return "true" if flag else "false"


def do_check_molecule(ws: Workspace, rest: list) -> dict:
    p = _parser("check-molecule", (("shape",), {}))
    a = p.parse_args(rest)
    P = ws.shape(a.shape).poset
    ok = is_molecule(P) is not None and is_globular(P)
    if not ok:
        raise CommandFailed("molecule: false", payload={"molecule": False})
    return {"molecule": True, "text": "molecule: true"}


def do_check_round(ws: Workspace, rest: list) -> dict:
    p = _parser("check-round", (("shape",), {}))
    a = p.parse_args(rest)
    ok = ws.shape(a.shape).is_round()
    if not ok:
        raise CommandFailed("round: false", payload={"round": False})
    return {"round": True, "text": "round: true"}


def do_check_map(ws: Workspace, rest: list) -> dict:
    p = _parser("check-map", (("source",), {}), (("target",), {}), (("--assign",), {}))
    a = p.parse_args(rest)
    src, tgt = a.source, a.target
    if src in ws.diagrams or src in ws.pres:
        da, db = ws.diagram(src), ws.diagram(tgt)
        A, la, B, lb = da.poset, da.labels, db.poset, db.labels
    else:
        A, B = ws.shape(src).poset, ws.shape(tgt).poset
        la, lb = [None] * A.size, [None] * B.size
    if a.assign is not None:
        ids = [int(x) for x in a.assign.replace("[", "").replace("]", "").split(",") if x.strip()]
        if len(ids) != A.size or any(not 0 <= y < B.size for y in ids):
            raise DiagramError("assignment does not fit the shapes")
        f = MolMap(A, B, ids)
        ok = check_map(f) and check_cartesian(f) and all(la[x] == lb[f(x)] for x in A.elements())
        found = ids if ok else None
    else:
        hits = search_maps(A, la, B, lb, limit=1, surjective=False, budget=sc.SEARCH_BUDGET)
        found = list(hits[0]) if hits else None
    if found is None:
        raise CommandFailed("map: false", payload={"map": False})
    return {"map": True, "assignment": found, "text": f"map: true {found}"}


def _resolve_cert(ws: Workspace, d: Diagram, ref: str):
    if ref == "cert:degeneracy":
        return cert_for_degenerate(d)
    if ref == "cert:cells":
        return certify_cells(d)
    if ref.startswith("@"):
        try:
            with open(ws.path(ref[1:]), encoding="utf-8") as fh:
                return cert_from_dict(ws.pres, json.load(fh))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{ref[1:]}: {exc}") from None
        except OSError as exc:
            raise ParseError(f"{ref[1:]}: {exc.strerror}") from None
    if ref in ws.certs:
        return ws.certs[ref]
    raise ParseError(f"unknown certificate {ref!r}")


def _verdict(v, extra: dict) -> dict:
    out = {"verdict": v.to_dict(), **extra}
    if v.status == "reject":
        where = "/".join(map(str, v.path)) or "root"
        raise CommandFailed(f"reject at {where}: {v.message}", EXIT_INVALID, out)
    if v.status == "exhausted":
        raise CommandFailed(f"exhausted at {'/'.join(map(str, v.path))}", EXIT_BUDGET, out)
    out["text"] = "accept" if not v.assumptions else f"accept assuming {sorted(set(v.assumptions))}"
    return out


def do_check_equiv(ws: Workspace, rest: list) -> dict:
    p = _parser("check-equiv", (("diagram",), {}), (("cert",), {}), (("--depth",), {"type": int, "default": 2}),
                (("--assume",), {"action": "store_true"}))
    a = p.parse_args(rest)
    d = ws.diagram(a.diagram)
    c = _resolve_cert(ws, d, a.cert)
    return _verdict(check_cert(d, c, a.depth, a.assume), {"size": cert_size(c)})


def _nat_expr(ws: Workspace, t, inverses: dict):
    h = t.head
    if not t.is_call:
        if h in ws.nats:
            return ws.nats[h]
        raise ParseError(f"unknown natural equivalence {h!r}", t.pos)
    names = [x.head for x in t.args]
    if h in ("unit", "lunitor", "runitor"):
        if len(names) != 2:
            raise ParseError(f"{h} takes two diagrams", t.pos)
        v, w = ws.diagram(names[0]), ws.diagram(names[1])
        return {"unit": nc.UnitFamily, "lunitor": nc.LeftUnitorFamily, "runitor": nc.RightUnitorFamily}[h](v, w)
    if h in ("theta", "psi"):
        if len(names) != 1:
            raise ParseError(f"{h} takes one context", t.pos)
        if names[0] not in inverses:
            inverses[names[0]] = nc.weak_inverse_context(ws.context(names[0]))
        inv = inverses[names[0]]
        expr = inv.theta if h == "theta" else inv.psi
        if expr is None:
            raise nc.UnsupportedConstruction(f"no {h} for {names[0]}")
        return expr
    if h == "nat":
        if len(t.args) != 3:
            raise ParseError("nat takes an expression and two diagrams", t.pos)
        inner = _nat_expr(ws, t.args[0], inverses)
        return nc.naturality_witness(inner, ws.diagram(names[1]), ws.diagram(names[2]))
    if h == "inv":
        if len(t.args) != 1:
            raise ParseError("inv takes one expression", t.pos)
        return nc.WeakInversion(_nat_expr(ws, t.args[0], inverses))
    raise ParseError(f"unknown natural equivalence constructor {h!r}", t.pos)


def do_nat_component(ws: Workspace, rest: list) -> dict:
    p = _parser("nat-component", (("expr",), {}), (("diagram",), {}),
                (("--depth",), {"type": int, "default": 2}), (("--as",), {"dest": "name"}))
    a = p.parse_args(rest)
    theta = _nat_expr(ws, parse_term(a.expr), {})
    d, c = theta.component(ws.diagram(a.diagram))
    extra = {"component": _diagram_info(d), "size": cert_size(c)}
    if a.name:
        ws.diagrams[ws._fresh(a.name)] = d
        ws.certs[ws._fresh(a.name + ".cert")] = c
    out = _verdict(check_cert(d, c, a.depth), extra)
    out["text"] = f"component {d.summary()} size {d.shape.size}: {out['text']}"
    return out


def do_divide(ws: Workspace, rest: list) -> dict:
    p = _parser("divide", (("context",), {}), (("diagram",), {}), (("--depth",), {"type": int, "default": 2}),
                (("--budget",), {"type": int}), (("--as",), {"dest": "name"}))
    a = p.parse_args(rest)
    E = ws.context(a.context)
    res = nc.divide(E, ws.diagram(a.diagram), a.depth, a.budget)
    if a.name:
        ws.diagrams[ws._fresh(a.name)] = res.solution
        ws.diagrams[ws._fresh(a.name + ".witness")] = res.witness
        ws.certs[ws._fresh(a.name + ".cert")] = res.cert
    extra = {"solution": _diagram_info(res.solution), "witness": _diagram_info(res.witness),
             "size": cert_size(res.cert), "trace": res.trace}
    out = _verdict(res.verdict, extra)
    out["text"] = (f"solution {res.solution.summary()} size {res.solution.shape.size}\n"
                   f"witness {res.witness.summary()} size {res.witness.shape.size}: {out['text']}")
    return out


def _lookup_any(ws: Workspace, name: str):
    for table in (ws.diagrams, ws.shapes, ws.contexts, ws.certs):
        if name in table:
            return table[name]
    if name in ws.pres:
        return ws.pres.cell(name)
    raise ParseError(f"unknown object {name!r}")


def _write(ws: Workspace, text: str, out) -> dict:
    if out:
        with open(ws.path(out), "w", encoding="utf-8") as fh:
            fh.write(text)
        return {"file": out, "text": f"wrote {out}"}
    return {"text": text.rstrip("\n")}


def do_export_dot(ws: Workspace, rest: list) -> dict:
    p = _parser("export-dot", (("object",), {}), (("--out",), {}))
    a = p.parse_args(rest)
    obj = _lookup_any(ws, a.object)
    if not isinstance(obj, (Diagram, Molecule)):
        raise DiagramError("only shapes and diagrams have a DOT form")
    return _write(ws, to_dot(obj, a.object), a.out)


def object_json(obj) -> dict:
    if isinstance(obj, (Diagram, cx.Context, Presentation)):
        return obj.to_dict()
    if isinstance(obj, Molecule):
        return obj.poset.to_dict()
    return cert_to_dict(obj)


def do_export_json(ws: Workspace, rest: list) -> dict:
    p = _parser("export-json", (("object",), {"nargs": "?"}), (("--out",), {}))
    a = p.parse_args(rest)
    obj = ws.pres if a.object is None else _lookup_any(ws, a.object)
    text = json.dumps(object_json(obj), sort_keys=True, indent=1) + "\n"
    return _write(ws, text, a.out)


VERBS = {
    "load": do_load,
    "shape": do_shape,
    "diagram": do_diagram,
    "boundary": do_boundary,
    "paste": do_paste,
    "subst": do_subst,
    "unit": _cell_verb("unit", lambda d, i, a: sc.unit(d)),
    "lunitor": _cell_verb("lunitor", lambda d, i, a: sc.left_unitor(d, i)),
    "runitor": _cell_verb("runitor", lambda d, i, a: sc.right_unitor(d, i)),
    "hunitor": _cell_verb("hunitor", _hunitor),
    "reverse": _cell_verb("reverse", lambda d, i, a: sc.reverse(d)),
    "linvertor": _cell_verb("linvertor", lambda d, i, a: sc.left_invertor(d)),
    "rinvertor": _cell_verb("rinvertor", lambda d, i, a: sc.right_invertor(d)),
    "context": do_context,
    "apply": do_apply,
    "layering": do_layering,
    "trim-factor": do_trim_factor,
    "check-molecule": do_check_molecule,
    "check-round": do_check_round,
    "check-map": do_check_map,
    "check-equiv": do_check_equiv,
    "nat-component": do_nat_component,
    "divide": do_divide,
    "export-dot": do_export_dot,
    "export-json": do_export_json,
}


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, CommandFailed):
        return exc.code
    if isinstance(exc, (ParseError, json.JSONDecodeError)):
        return EXIT_PARSE
    if isinstance(exc, (BudgetExhausted, Undecided, RecursionError)):
        return EXIT_BUDGET
    return EXIT_INVALID


def run_lines(ws: Workspace, lines, as_json: bool = False, out=None, err=None) -> int:
    """Run commands in order; stop at the first failure and return its code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    for lineno, line in enumerate(lines, 1):
        try:
            result = ws.run_line(line)
        except (ParseError, OGPError, CommandFailed, ValueError, RecursionError) as exc:
            code = exit_code(exc)
            message = str(exc) or type(exc).__name__
            if as_json:
                payload = getattr(exc, "payload", {})
                print(json.dumps({"ok": False, "line": lineno, "error": type(exc).__name__,
                                  "message": message, "exit": code, **payload}, sort_keys=True), file=out)
            else:
                out.flush()
                print(f"line {lineno}: {message}", file=err)
            return code
        if not result:
            continue
        if as_json:
            body = {k: v for k, v in result.items() if k != "text"}
            print(json.dumps({"ok": True, "line": lineno, **body}, sort_keys=True), file=out)
        elif result.get("text"):
            print(result["text"], file=out)
    return 0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="diagkit", description=__doc__.split("\n")[0])
    p.add_argument("--json", action="store_true", help="one JSON object per command")
    p.add_argument("--script", help="workspace script to run before the command")
    p.add_argument("--node-budget", type=int, help="node cap for map and degeneracy searches")
    p.add_argument("command", nargs=argparse.REMAINDER, help="a single command; omit to read stdin")
    a = p.parse_args(argv)
    if a.node_budget is not None:
        sc.SEARCH_BUDGET = a.node_budget
    lines = []
    base = "."
    if a.script:
        try:
            with open(a.script, encoding="utf-8") as fh:
                lines.extend(fh.read().splitlines())
        except OSError as exc:
            print(f"{a.script}: {exc.strerror}", file=sys.stderr)
            return EXIT_PARSE
        base = os.path.dirname(os.path.abspath(a.script))
    if a.command:
        lines.append(shlex.join(a.command))
    elif not a.script:
        lines.extend(sys.stdin.read().splitlines())
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    return run_lines(Workspace(base), lines, a.json)


if __name__ == "__main__":
    sys.exit(main())
