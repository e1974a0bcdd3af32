"""Replay the exact J = 1 demo pair and print every quantity along the way."""
from fractions import Fraction as F

from vahlen import diag, iterate, jorgensen_value, strictness_certificate, validate
from vahlen.clifford import format_scalar


def main():
    f = validate(diag(F(3, 2), F(2, 3)))
    g = validate([[1, F(11, 25)], [1, F(36, 25)]])
    rep = jorgensen_value(f, g)
    print(f"K = {format_scalar(rep.K)}  w0 = {rep.w0}  J = {format_scalar(rep.J)}")
    for s in iterate(f, g, 4).states:
        print(f"m={s.m}  w={s.w}  alpha={format_scalar(s.alpha)}")
    print(strictness_certificate(f, g).to_record())


if __name__ == "__main__":
    main()
