"""Dense brute-force Clifford algebra on at most 12 generators.

Used only to cross-check the sparse kernel.  Blades are bitmasks (bit k set
means generator i_{k+1} is present) and product signs come from literally
bubble-sorting the concatenated generator word, sharing no code with
:mod:`vahlen.clifford`'s merge count.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .clifford import RATIONAL, CliffordNumber

MAX_N = 12


class DimensionMismatch(ValueError):
    pass


class SupportExceedsN(ValueError):
    pass


def _word(mask: int) -> list[int]:
    return [k + 1 for k in range(mask.bit_length()) if mask >> k & 1]


def reduce_word(word) -> tuple[int, list[int]]:
    """Bubble-sort a generator word, then cancel equal neighbours.

    Every adjacent swap of distinct generators flips the sign; every
    cancelled pair ``i_k i_k`` contributes ``-1``.
    """
    w = list(word)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                sign = -sign
                changed = True
    out: list[int] = []
    for k in w:
        if out and out[-1] == k:
            out.pop()
            sign = -sign
        else:
            out.append(k)
    return sign, out


def _mask(word) -> int:
    m = 0
    for k in word:
        m |= 1 << (k - 1)
    return m


@dataclass(frozen=True)
class DenseElement:
    n: int
    coeffs: tuple

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise ValueError(f"n must be in 0..{MAX_N}")
        if len(self.coeffs) != 1 << self.n:
            raise ValueError("need 2**n coefficients")


@lru_cache(maxsize=None)
def _blade_mul(x: int, y: int) -> tuple[int, int]:
    sign, word = reduce_word(_word(x) + _word(y))
    return sign, _mask(word)


def dense_mul(a: DenseElement, b: DenseElement) -> DenseElement:
    """Full convolution over all pairs of basis blades."""
    if a.n != b.n:
        raise DimensionMismatch(f"{a.n} != {b.n}")
    zero = a.coeffs[0] * 0
    out = [zero] * (1 << a.n)
    for x, ax in enumerate(a.coeffs):
        if ax == 0:
            continue
        for y, by in enumerate(b.coeffs):
            if by == 0:
                continue
            s, z = _blade_mul(x, y)
            out[z] += s * ax * by
    return DenseElement(a.n, tuple(out))


def to_dense(a: CliffordNumber, n: int) -> DenseElement:
    if any(k > n for k in a.generators()):
        raise SupportExceedsN(f"element uses generators beyond {n}")
    zero = Fraction(0) if a.mode == RATIONAL else 0.0
    coeffs = [zero] * (1 << n)
    for blade, v in a.items():
        coeffs[_mask(blade)] = v
    return DenseElement(n, tuple(coeffs))


def to_sparse(d: DenseElement, mode: str = RATIONAL) -> CliffordNumber:
    return CliffordNumber({tuple(_word(x)): v for x, v in enumerate(d.coeffs) if v != 0}, mode)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def dense_star(d: DenseElement) -> DenseElement:
    return DenseElement(d.n, tuple(
        v * (-1) ** (_popcount(x) * (_popcount(x) - 1) // 2) for x, v in enumerate(d.coeffs)))


def dense_prime(d: DenseElement) -> DenseElement:
    return DenseElement(d.n, tuple(v * (-1) ** _popcount(x) for x, v in enumerate(d.coeffs)))


def dense_bar(d: DenseElement) -> DenseElement:
    return dense_prime(dense_star(d))
