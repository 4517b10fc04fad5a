"""Tabulate ||h_n||_q against its two-sided bounds for large n.

The normalized ratio ||h_n||_q (2 pi n)^{1/4} / (q-1)^{n/2} should level off,
which shows the lower bound captures the exact growth.

    python scripts/hermite_norm_table.py --q 4 --n-max 200
"""
import argparse
import math

from subordlab.norm_bounds import eigen_norm, hermite_bounds
from subordlab.orthopoly import PolyFamily


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--q", type=float, default=4.0)
    parser.add_argument("--n-max", type=int, default=200)
    parser.add_argument("--step", type=int, default=20)
    args = parser.parse_args()

    fam = PolyFamily.hermite()
    print(f"{'n':>5} {'log lower':>12} {'log measured':>13} {'log upper':>12} {'plateau':>9}")
    for n in [1, *range(args.step, args.n_max + 1, args.step)]:
        lower, upper = hermite_bounds(n, args.q)
        measured = eigen_norm(fam, n, args.q)
        plateau = math.exp(measured.logmag + 0.25 * math.log(2 * math.pi * n) - 0.5 * n * math.log(args.q - 1))
        print(f"{n:5d} {lower.logmag:12.4f} {measured.logmag:13.4f} {upper.logmag:12.4f} {plateau:9.5f}")


if __name__ == "__main__":
    main()
