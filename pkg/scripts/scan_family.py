"""Float scan of the family f = diag(r, 1/r), g = [[1, w0], [1, 1 + w0]].

Prints how many grid points fall on each side of J = 1 and in each
certificate outcome.  Exact J = 1 points are rare on a float grid, so most
rows are NotCandidate; use equality_sweep.py for the J = 1 family itself.
"""
import argparse
import statistics
from collections import Counter

from vahlen.cli import parse_range
from vahlen.jorgensen import scan_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-range", default="1.05:1.6:0.05")
    ap.add_argument("--w0-range", default="-2:2:0.1")
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    rows = scan_grid(parse_range(args.r_range, "float"), parse_range(args.w0_range, "float"),
                     args.steps, workers=args.workers)
    def side(J):
        return "J < 1" if J < 1 - 1e-12 else "J > 1" if J > 1 + 1e-12 else "J = 1"

    counts = Counter((side(row["J"]), row["outcome"]) for row in rows)
    for (j, name), n in sorted(counts.items()):
        print(f"{j}  {name:20s} {n}")
    steps = [row["steps_to_contraction"] for row in rows if row["steps_to_contraction"] is not None]
    if steps:
        print(f"median steps to contraction: {statistics.median(steps)}")


if __name__ == "__main__":
    main()
