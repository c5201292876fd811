"""Run the acceptance criteria and print one line per criterion with its wall time.

    python3 scripts/run_acceptance.py            # all criteria
    python3 scripts/run_acceptance.py C3 C8      # a subset
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "tests"))
sys.setrecursionlimit(20000)

import test_acceptance as acc  # noqa: E402


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("tags", nargs="*", help="criterion tags such as C1; default all")
    args = ap.parse_args(argv)
    failed = 0
    for tag, title, check in acc.CRITERIA:
        if args.tags and tag not in args.tags:
            continue
        t0 = time.perf_counter()
        ok, detail = check()
        acc.report(tag, title, ok, f"{detail} [{time.perf_counter() - t0:.1f}s]")
        failed += not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
