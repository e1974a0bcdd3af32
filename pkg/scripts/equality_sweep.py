"""Sweep the J = 1 family w0 = 1/K - 1 over rationals r in (1, golden ratio)."""
import argparse
from fractions import Fraction

from vahlen import K_of, exact_equality_pair, jorgensen_value, strictness_certificate

GOLDEN = (1 + 5 ** 0.5) / 2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-denominator", type=int, default=12)
    args = ap.parse_args()
    rs = sorted({Fraction(p, q) for q in range(1, args.max_denominator + 1)
                 for p in range(q + 1, 2 * q) if p / q < GOLDEN})
    print("r,K,J,outcome,m")
    for r in rs:
        f, g = exact_equality_pair(r)
        out = strictness_certificate(f, g).outcome
        print(f"{r},{K_of(f)},{jorgensen_value(f, g).J},{out.name},{getattr(out, 'm', '')}")


if __name__ == "__main__":
    main()
