"""Independent oracle for the literal values frozen into the test suite.

It does not import diagkit.  Shapes are plain dicts name -> (dim, inputs,
outputs) written out by hand or built with small local helpers, and the
boundary and roundness checks are re-implemented from their set-theoretic
definitions.  Run it and compare with the constants in tests/.
"""

from itertools import product


def closure(P, S):
    out, stack = set(), list(S)
    while stack:
        x = stack.pop()
        if x not in out:
            out.add(x)
            stack.extend(P[x][1] | P[x][2])
    return out


def dim(P, S):
    return max((P[x][0] for x in S), default=-1)


def boundary(P, n, alpha, S=None):
    S = set(P) if S is None else set(S)
    if n >= dim(P, S):
        return S
    side = 1 if alpha == "-" else 2
    low = set()
    for x in S:
        cof = [y for y in S if x in P[y][1] | P[y][2]]
        if P[x][0] < n and not cof:
            low.add(x)
    top = {x for x in S if P[x][0] == n
           and all(x in P[y][side] for y in S if x in P[y][1] | P[y][2])}
    return closure(P, top | low)


def is_round(P):
    d = dim(P, P)
    for n in range(d):
        if boundary(P, n, "-") & boundary(P, n, "+") != (boundary(P, n - 1, "-") | boundary(P, n - 1, "+")
                                                        if n > 0 else set()):
            return False
    return True


def fvec(P):
    d = dim(P, P)
    return [sum(1 for x in P if P[x][0] == k) for k in range(d + 1)]


def el(d, minus=(), plus=()):
    return (d, frozenset(minus), frozenset(plus))


ARROW = {"a": el(0), "b": el(0), "f": el(1, "a", "b")}
GLOBE2 = {"a": el(0), "b": el(0), "f": el(1, "a", "b"), "g": el(1, "a", "b"), "t": el(2, "f", "g")}
PATH = {"a": el(0), "b": el(0), "c": el(0), "f": el(1, "a", "b"), "g": el(1, "b", "c")}
WHISKERED = dict(GLOBE2, c=el(0), h=el(1, "b", "c"))


def flip(alpha):
    return "+" if alpha == "-" else "-"


def cylinder(P, K, kind="gray"):
    """Cylinder face tables written out per element and layer."""
    n = dim(P, P)
    Q = {}

    def name(i, y):
        return y if y in K else (i, y)

    for x, (d, mi, pl) in P.items():
        if x in K:
            Q[x] = el(d, mi, pl)
            continue
        faces = {"-": mi, "+": pl}
        for i in ("0-", "0+"):
            Q[(i, x)] = el(d, [name(i, y) for y in mi], [name(i, y) for y in pl])
        cyl = {}
        for alpha in ("-", "+"):
            cyl[alpha] = {("0" + alpha, x)} | {("1", y) for y in faces[flip(alpha)] if y not in K}
        if d == n and kind != "gray":
            if kind == "left":
                cyl["-"] = {("0-", x), ("0+", x)} | {("1", y) for y in pl if y not in K}
                cyl["+"] = {("1", y) for y in mi}
                Q[("0+", x)] = el(d, [name("0+", y) for y in pl], [name("0+", y) for y in mi])
            else:
                cyl["-"] = {("1", y) for y in pl}
                cyl["+"] = {("0-", x), ("0+", x)} | {("1", y) for y in mi if y not in K}
                Q[("0-", x)] = el(d, [name("0-", y) for y in pl], [name("0-", y) for y in mi])
        Q[("1", x)] = el(d + 1, cyl["-"], cyl["+"])
    return Q


def gray(P, Q):
    R = {}
    for (x, (dx, mx, px)), (y, (dy, my, py)) in product(P.items(), Q.items()):
        sign = dx % 2 == 0
        faces = {}
        for alpha, (xa, ya_same, ya_opp) in (("-", (mx, my, py)), ("+", (px, py, my))):
            faces[alpha] = {(x2, y) for x2 in xa} | {(x, y2) for y2 in (ya_same if sign else ya_opp)}
        R[(x, y)] = el(dx + dy, faces["-"], faces["+"])
    return R


def main():
    print("closure(2-globe, {top}) size:", len(closure(GLOBE2, {"t"})))
    print("boundary(path, 0, +):", sorted(boundary(PATH, 0, "+")))
    print("path round:", is_round(PATH))
    print("whiskered 2-globe round:", is_round(WHISKERED), "size", len(WHISKERED))
    print("cell_ext(arrow, arrow) f-vector:", fvec(GLOBE2))
    u1 = cylinder(ARROW, {"a", "b"})
    print("unit shape on arrow:", len(u1), fvec(u1), "round", is_round(u1))
    u2 = cylinder(GLOBE2, set(GLOBE2) - {"t"})
    print("unit shape on 2-globe:", len(u2), fvec(u2), "round", is_round(u2))
    lam = cylinder(ARROW, {"a"})
    print("left unitor shape on arrow at its source:", len(lam), fvec(lam))
    zl = cylinder(ARROW, {"b"}, "left")
    print("left inverted cylinder on arrow:", len(zl), fvec(zl), "round", is_round(zl))
    print("   its input 1-cells:", sorted(x for x in boundary(zl, 1, "-") if zl[x][0] == 1))
    zr = cylinder(ARROW, {"a"}, "right")
    print("right inverted cylinder on arrow:", len(zr), fvec(zr), "round", is_round(zr))
    sq = gray(ARROW, ARROW)
    print("gray(arrow, arrow):", len(sq), fvec(sq))
    print("gray(2-globe, 2-globe) f-vector:", fvec(gray(GLOBE2, GLOBE2)))
    c0 = cylinder(GLOBE2, set())
    print("cylinder on 2-globe rel. empty set f-vector:", fvec(c0))
    vert = {"a": el(0), "b": el(0), "f": el(1, "a", "b"), "g": el(1, "a", "b"), "h": el(1, "a", "b"),
            "s": el(2, "f", "g"), "t": el(2, "g", "h")}
    print("vertical composite of 2-globes f-vector:", fvec(vert))
    # 2-cell on a composable pair: unitor at the source vertex, k = 0
    print("left unitor on a 2-cell at its input vertex:", fvec(cylinder(GLOBE2, {"a"})))


if __name__ == "__main__":
    main()
