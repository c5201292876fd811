"""Text syntax for molecules and contexts, plus DOT export.

Molecule expressions::

    pt | arrow | globe(n) | paste(e1,e2,k) | cell(e1,e2) | gray(e1,e2)
    cyl(e,K) | lcyl(e,K) | rcyl(e,K) | dual(e,{n,...})
    lpastesub(e1,e2,k,[ids]) | rpastesub(e1,e2,k,[ids]) | subst(e1,e2,[ids])

K and the id lists are element ids written as ``[1,2]`` or ``{1,2}``; an
empty set may also be written ``{}`` or ``∅``.  A bare name is looked up in
the environment passed to the parser.

Context expressions::

    id(v,w) | lp(u,I) | rp(u,I) | comp(F,G) | promote(F,v,w)

where u, v, w name diagrams, F and G are contexts or names of contexts and
I is an id list or ``*`` for the whole boundary.  ``lp`` and ``rp`` also take
an optional explicit hole type ``lp(u,I,v,w)``; otherwise the hole type comes
from the enclosing expression or from ``domain``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ogp import to_dot as ogp_to_dot
from .molecule import (
    CellExt,
    Cyl,
    Dual,
    Gray,
    Molecule,
    Paste,
    PasteSub,
    Point,
    Substitution,
    evaluate,
    globe,
)
from .diagset import Diagram
from . import context as cx


class ParseError(ValueError):
    """Malformed expression text; ``pos`` is the character offset."""

    def __init__(self, message: str, pos: int = -1):
        super().__init__(message if pos < 0 else f"{message} at offset {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<num>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_'.-]*)|(?P<sym>[(),\[\]{}*∅]))")


def tokenize(text: str) -> list:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


@dataclass
class Call:
    """A parsed term: a name applied to arguments, or a literal."""

    head: str
    args: tuple = ()
    pos: int = 0
    is_call: bool = False


class _Reader:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, -1)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of input")
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def term(self):
        kind, val, pos = self.peek()
        if kind is None:
            raise ParseError("unexpected end of input")
        if kind == "num":
            self.take()
            return Call(val, (), pos)
        if val in ("[", "{"):
            close = "]" if val == "[" else "}"
            self.take()
            items = []
            while self.peek()[1] != close:
                k, v, p = self.take()
                if k != "num":
                    raise ParseError("id lists hold integers only", p)
                items.append(int(v))
                if self.peek()[1] == ",":
                    self.take()
            self.take(close)
            return Call("set", tuple(items), pos)
        if val in ("∅", "*"):
            self.take()
            return Call(val, (), pos)
        if kind != "name":
            raise ParseError(f"unexpected {val!r}", pos)
        self.take()
        if self.peek()[1] != "(":
            return Call(val, (), pos)
        self.take("(")
        args = []
        while self.peek()[1] != ")":
            args.append(self.term())
            if self.peek()[1] == ",":
                self.take()
            elif self.peek()[1] != ")":
                k, v, p = self.peek()
                if k is None:
                    raise ParseError("unexpected end of input")
                raise ParseError(f"expected ',' or ')', found {v!r}", p)
        self.take(")")
        return Call(val, tuple(args), pos, True)

    def parse(self):
        t = self.term()
        if self.i != len(self.toks):
            raise ParseError("trailing input", self.toks[self.i][2])
        return t


def parse_term(text: str) -> Call:
    return _Reader(text).parse()


# molecules


def _ids(t: Call) -> tuple:
    if t.head == "∅":
        return ()
    if t.head != "set":
        raise ParseError("expected an id list", t.pos)
    return tuple(t.args)


def _int(t: Call) -> int:
    try:
        return int(t.head)
    except ValueError:
        raise ParseError(f"expected an integer, found {t.head!r}", t.pos) from None


def _arity(t: Call, *counts) -> None:
    if len(t.args) not in counts:
        raise ParseError(f"{t.head} takes {' or '.join(map(str, counts))} arguments", t.pos)


def _mol_expr(t: Call, env: dict):
    h = t.head
    if not t.is_call:
        if h == "pt":
            return Point()
        if h == "arrow":
            return CellExt(Point(), Point())
        if h in env:
            return env[h].expr
        raise ParseError(f"unknown shape {h!r}", t.pos)
    if h == "globe":
        _arity(t, 1)
        return globe(_int(t.args[0])).expr
    if h == "paste":
        _arity(t, 3)
        return Paste(_mol_expr(t.args[0], env), _mol_expr(t.args[1], env), _int(t.args[2]))
    if h == "cell":
        _arity(t, 2)
        return CellExt(_mol_expr(t.args[0], env), _mol_expr(t.args[1], env))
    if h == "gray":
        _arity(t, 2)
        return Gray(_mol_expr(t.args[0], env), _mol_expr(t.args[1], env))
    if h in ("cyl", "lcyl", "rcyl"):
        _arity(t, 2)
        kind = {"cyl": "gray", "lcyl": "left", "rcyl": "right"}[h]
        return Cyl(_mol_expr(t.args[0], env), tuple(sorted(_ids(t.args[1]))), kind)
    if h == "dual":
        _arity(t, 2)
        return Dual(_mol_expr(t.args[0], env), tuple(sorted(_ids(t.args[1]))))
    if h in ("lpastesub", "rpastesub"):
        _arity(t, 4)
        side = "left" if h == "lpastesub" else "right"
        return PasteSub(_mol_expr(t.args[0], env), _mol_expr(t.args[1], env), _int(t.args[2]),
                        tuple(sorted(_ids(t.args[3]))), side)
    if h == "subst":
        _arity(t, 3)
        return Substitution(_mol_expr(t.args[0], env), _mol_expr(t.args[1], env), tuple(sorted(_ids(t.args[2]))))
    raise ParseError(f"unknown shape constructor {h!r}", t.pos)


def parse_molecule(text: str, env: dict | None = None) -> Molecule:
    """Parse and build a molecule; construction errors propagate unchanged."""
    expr = _mol_expr(parse_term(text), env or {})
    return evaluate(expr)


# contexts


def _iota(t: Call):
    if t.head == "*":
        return None
    return frozenset(_ids(t))


def parse_context(text: str, diagrams: dict, contexts: dict | None = None, domain=None,
                  certify=None) -> cx.Context:
    """Build a context from text.

    ``diagrams`` and ``contexts`` resolve names.  ``domain`` is the hole type
    (v, w) for the innermost context when it cannot be read off the text.
    ``certify`` maps a pasted diagram to its certificate, if any.
    """
    contexts = contexts or {}

    def diag(t: Call) -> Diagram:
        if t.is_call or t.head not in diagrams:
            raise ParseError(f"unknown diagram {t.head!r}", t.pos)
        return diagrams[t.head]

    def build(t: Call, dom):
        h = t.head
        if not t.is_call:
            if h in contexts:
                return contexts[h]
            raise ParseError(f"unknown context {h!r}", t.pos)
        if h == "id":
            _arity(t, 2)
            return cx.Identity(diag(t.args[0]), diag(t.args[1]))
        if h in ("lp", "rp"):
            _arity(t, 1, 2, 4)
            u = diag(t.args[0])
            iota = _iota(t.args[1]) if len(t.args) > 1 else None
            if len(t.args) == 4:
                v, w = diag(t.args[2]), diag(t.args[3])
            elif dom is not None:
                v, w = dom
            else:
                # without a stated hole type, take the side that u touches
                # as both ends
                side = u.output if h == "lp" else u.input
                if iota is not None:
                    raise ParseError(f"{h} with a partial subdiagram needs a hole type", t.pos)
                v = w = side
            cert = certify(u) if certify else None
            cls = cx.LeftPaste if h == "lp" else cx.RightPaste
            return cls(u, iota, v, w, cert)
        if h == "comp":
            _arity(t, 2)
            inner = build(t.args[1], dom)
            outer = build(t.args[0], inner.codomain)
            return cx.Compose(outer, inner)
        if h == "promote":
            _arity(t, 3)
            v, w = diag(t.args[1]), diag(t.args[2])
            inner = build(t.args[0], (v.input, v.output))
            return cx.Promote(inner, v, w)
        raise ParseError(f"unknown context constructor {h!r}", t.pos)

    return build(parse_term(text), domain)


# DOT


def to_dot(d, name: str = "shape") -> str:
    """DOT Hasse diagram of a Diagram, Molecule or OGP."""
    if isinstance(d, Diagram):
        return ogp_to_dot(d.poset, name, d.labels)
    if isinstance(d, Molecule):
        return ogp_to_dot(d.poset, name)
    return ogp_to_dot(d, name)
