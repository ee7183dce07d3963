"""Run every verification suite and write one JSON report per suite.

    python scripts/run_all_suites.py --out reports --n 3 --ballN 32
"""
import argparse
import os
import sys
import time

from minkval.suites import SUITES, RunConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="reports")
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--ballN", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--arith", choices=("exact", "float"), default="exact")
    ap.add_argument("--pairs", type=int, default=None, help="override each suite's default count")
    ap.add_argument("--triples", type=int, default=10000)
    ap.add_argument("--suites", default=",".join(SUITES))
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    cfg = RunConfig(n=args.n, arith=args.arith, ballN=args.ballN, seed=args.seed,
                    pairs=args.pairs, triples=args.triples)
    all_ok = True
    for name in args.suites.split(","):
        t = time.time()
        rep = run_suite(name, cfg)
        with open(os.path.join(args.out, f"{name}.json"), "w") as fh:
            fh.write(rep.to_json() + "\n")
        all_ok &= rep.passed
        print(f"{name:20s} {'PASS' if rep.passed else 'FAIL'}  {len(rep.cases):5d} cases  "
              f"{time.time() - t:6.1f}s")
    sys.exit(0 if all_ok else 1)


if __name__ == "__main__":
    main()
