"""Random generators shared by the property and acceptance tests."""
import random
from fractions import Fraction

from hypothesis import strategies as st

from vahlen.clifford import FLOAT, RATIONAL, CliffordNumber, gamma_from_factors, vector, vector_inverse
from vahlen.moebius import CliffordMatrix, Level, matrix, validate

MAX_GEN = 6

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
nonzero_fractions = small_fractions.filter(lambda q: q != 0)
blades = st.lists(st.integers(1, MAX_GEN), max_size=MAX_GEN, unique=True).map(lambda xs: tuple(sorted(xs)))
elements = st.dictionaries(blades, small_fractions, max_size=8).map(CliffordNumber)
vectors = st.lists(small_fractions, min_size=1, max_size=MAX_GEN + 1).map(lambda cs: vector(*cs))
nonzero_vectors = vectors.filter(lambda v: not v.is_zero())
gammas = st.lists(nonzero_vectors, min_size=1, max_size=3).map(gamma_from_factors)


def rand_fraction(rng: random.Random, lo=-4, hi=4, den=6) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def rand_vector(rng: random.Random, n=3, nonzero=True) -> CliffordNumber:
    while True:
        v = vector(*(rand_fraction(rng) for _ in range(rng.randint(1, n + 1))))
        if not nonzero or not v.is_zero():
            return v


def rand_gamma(rng: random.Random, n=3, max_factors=2):
    return gamma_from_factors([rand_vector(rng, n) for _ in range(rng.randint(1, max_factors))])


def rand_certified(rng: random.Random, n=3) -> CliffordMatrix:
    """``T_x J T_y D_lam`` with Clifford-group evidence for every entry.

    ``T_x J T_y = [[-x, 1 - x y], [-1, -y]]`` and ``D_lam = diag(lam, mu)``
    with ``mu = (lam*)^-1``.  When ``x != 0``, ``1 - x y = x (x^-1 - y)`` is
    a product of two vectors.
    """
    x = rand_vector(rng, n, nonzero=False)
    y = rand_vector(rng, n, nonzero=False)
    lam = rand_gamma(rng, n)
    mu = lam.star().inverse()
    a = -x * lam.value
    b = (1 - x * y) * mu.value
    c = -lam.value
    d = -y * mu.value
    ev_a = None if x.is_zero() else gamma_from_factors([-x, *lam.factors])
    if x.is_zero():
        ev_b = mu
    else:
        u = vector_inverse(x) - y
        ev_b = None if u.is_zero() else gamma_from_factors([x, u, *mu.factors])
    ev_c = -lam
    ev_d = None if y.is_zero() else gamma_from_factors([-y, *mu.factors])
    g = CliffordMatrix(a, b, c, d)
    return validate(g, Level.FULLY_CERTIFIED, evidence=(ev_a, ev_b, ev_c, ev_d))


def rand_sl2q(rng: random.Random) -> CliffordMatrix:
    """Random real rational matrix with determinant 1."""
    while True:
        a, b, c = rand_fraction(rng), rand_fraction(rng), rand_fraction(rng)
        if a != 0:
            d = (1 + b * c) / a
            return validate(matrix(a, b, c, d), Level.DETERMINANT_CHECKED)


def to_float(g: CliffordMatrix) -> CliffordMatrix:
    return validate(CliffordMatrix(*(e.to_mode(FLOAT) for e in g.entries)),
                    Level.DETERMINANT_CHECKED)

