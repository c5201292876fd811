"""Census of a random molecule corpus: sizes, dimensions, roundness and
which constructors appear, with the time spent recognising each shape."""

import argparse
import collections
import random
import time

from diagkit import corpus
from diagkit.molecule import is_molecule
from diagkit.ogp import is_globular


def constructors(expr, acc):
    acc[type(expr).__name__] += 1
    for v in vars(expr).values():
        if hasattr(v, "__dataclass_fields__") and not hasattr(v, "dims"):
            constructors(v, acc)
    return acc


def main(argv=None):
    ap = argparse.ArgumentParser(description="molecule corpus census")
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-dim", type=int, default=3)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    dims, ops = collections.Counter(), collections.Counter()
    sizes, rounds, bad, spent = [], 0, 0, 0.0
    for _ in range(args.count):
        U = corpus.random_molecule(rng, max_dim=args.max_dim)
        t0 = time.perf_counter()
        ok = is_molecule(U.poset) is not None and is_globular(U.poset)
        spent += time.perf_counter() - t0
        bad += not ok
        rounds += U.is_round()
        dims[U.dim] += 1
        sizes.append(U.size)
        constructors(U.expr, ops)
    print(f"shapes {args.count}, rejected {bad}, round {rounds}, recognition {spent:.2f}s")
    print(f"size mean {sum(sizes) / len(sizes):.1f}, max {max(sizes)}")
    print("dimensions", dict(sorted(dims.items())))
    print("constructor uses", dict(ops.most_common()))


if __name__ == "__main__":
    main()
