"""Time weak division on random trim contexts built from degenerate cells.

Prints one row per context: context dimension, certificate size, the time
for divide and round_trip, and whether both verdicts were accepted.
"""

import argparse
import random
import statistics
import sys
import time

from diagkit import context as cx
from diagkit import corpus
from diagkit.equivcalc import cert_size
from diagkit.natcalc import divide, round_trip


def sample(rng, want_dim):
    while True:
        pres = corpus.random_presentation(rng)
        a = corpus.random_round_diagram(rng, pres, max_dim=want_dim, min_dim=want_dim, steps=1)
        if a.dim != want_dim:
            continue
        E = corpus.random_context(rng, a.input, a.output, promote=False, degenerate_only=True)
        if E.is_weakly_invertible and cx.is_round_context(E):
            return E, a


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="division timing")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--depth", type=int, default=2)
    args = ap.parse_args(argv)
    sys.setrecursionlimit(20000)
    rng = random.Random(args.seed)
    times = []
    print("dim  cert_nodes  divide_s  round_trip_s  accepted")
    for i in range(args.count):
        E, a = sample(rng, 2 + i % 2)
        t0 = time.perf_counter()
        d = divide(E, E.apply(a), depth=args.depth)
        t1 = time.perf_counter()
        r = round_trip(E, a, depth=args.depth)
        t2 = time.perf_counter()
        ok = d.verdict.accepted and r.verdict.accepted
        times.append(t2 - t0)
        print(f"{E.dim:>3}  {cert_size(r.cert):>10}  {t1 - t0:>8.2f}  {t2 - t1:>12.2f}  {ok}")
    print(f"median {statistics.median(times):.2f}s, max {max(times):.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
