"""Convergence of the ball approximant B_N as N doubles.

Prints the unit-cube quermassintegrals against (2, pi, 4 pi / 3) and the
relative error of the projection-body mixed identity for i = 1, 2, 3.

    python scripts/ball_convergence.py --max-ballN 256
"""
import argparse
import math
import random
import time

from minkval.bodies import Polytope, random_polytope
from minkval.inequalities import check_durch_identity
from minkval.mixed import quermassintegral
from minkval.valuations import projection_body_operator


def cube_table(sizes):
    cube = Polytope(tuple((a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)))
    targets = (2.0, math.pi, 4 * math.pi / 3)
    print("ballN      W1        W2        W3     max rel.err")
    for N in sizes:
        W = [float(quermassintegral(cube, i, N)) for i in (1, 2, 3)]
        err = max(abs(w - t) / t for w, t in zip(W, targets))
        print(f"{N:5d}  {W[0]:8.5f}  {W[1]:8.5f}  {W[2]:8.5f}  {err:10.2e}")


def identity_table(sizes, seed):
    rng = random.Random(seed)
    K, L = random_polytope(rng, 3), random_polytope(rng, 3)
    Phi = projection_body_operator(3)
    print("\nballN   i   relative error   seconds")
    for N in sizes:
        for i in (1, 2, 3):
            t = time.time()
            case = check_durch_identity(Phi, K, L, i, N).cases[0]
            print(f"{N:5d}  {i:2d}   {abs(case.relative_slack):14.3e}   {time.time() - t:7.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-ballN", type=int, default=16)
    ap.add_argument("--max-ballN", type=int, default=256)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--skip-identity", action="store_true")
    args = ap.parse_args()
    sizes = []
    N = args.min_ballN
    while N <= args.max_ballN:
        sizes.append(N)
        N *= 2
    cube_table(sizes)
    if not args.skip_identity:
        identity_table(sizes, args.seed)


if __name__ == "__main__":
    main()
