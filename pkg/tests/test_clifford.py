from fractions import Fraction as F
import math

import pytest
from hypothesis import given, settings

from vahlen.clifford import (
    FLOAT,
    CliffordNumber,
    NotAVector,
    ParseError,
    ScalarModeError,
    ZeroVector,
    bar,
    blade,
    blade_product,
    gamma_from_factors,
    gen,
    is_vector,
    norm,
    norm_sq,
    parse_number,
    prime,
    real_part,
    scalar,
    star,
    vector,
    vector_inverse,
)

from helpers import elements, gammas, nonzero_vectors, vectors

e1, e2, e3 = gen(1), gen(2), gen(3)


def brute_sign(A, B):
    """Sort the word A+B by explicit adjacent swaps, then cancel pairs."""
    w = list(A) + list(B)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
    out = []
    for k in w:
        if out and out[-1] == k:
            out.pop()
            sign = -sign
        else:
            out.append(k)
    return sign, tuple(out)


@pytest.mark.parametrize("A, B, expected", [
    ((), (), (1, ())),
    ((1,), (1,), (-1, ())),
    ((2,), (1,), (-1, (1, 2))),
    ((1, 2), (1,), (1, (2,))),
])
def test_blade_product_examples(A, B, expected):
    assert blade_product(A, B) == expected
    assert brute_sign(A, B) == expected


def test_blade_product_matches_brute_force_exhaustively():
    import itertools
    subsets = [s for r in range(5) for s in itertools.combinations(range(1, 5), r)]
    for A in subsets:
        for B in subsets:
            assert blade_product(A, B) == brute_sign(A, B)


def test_blade_validation():
    assert blade(1, 3) == (1, 3)
    with pytest.raises(ValueError):
        blade(2, 1)
    with pytest.raises(ValueError):
        blade(0)


def test_add_examples():
    assert (e1 + -e1) == 0
    assert (scalar(3) + 4 * e1) == parse_number("3 + 4*e1")
    assert parse_number("1 + e1.e2") + parse_number("1 - e1.e2") == 2


def test_mul_examples():
    assert (1 + e1) * (1 - e1) == 2
    assert e1 * e2 == CliffordNumber({(1, 2): 1})
    b = e1 * e2
    assert b * b == -1


def test_involution_examples():
    b12 = e1 * e2
    assert star(e1) == e1
    assert star(b12) == -b12
    assert star(scalar(5)) == 5
    assert prime(e1) == -e1
    assert prime(b12) == b12
    assert prime(scalar(7)) == 7
    assert bar(e1) == -e1
    assert bar(scalar(3)) == 3
    assert bar(b12) == -b12


def test_norm_examples():
    assert norm(3 + 4 * e1) == 5
    assert norm_sq(e1 * e2) == 1
    assert norm(scalar(0)) == 0


def test_real_part_and_vector_predicates():
    assert real_part(2 + e1) == 2
    assert is_vector(1 + e1 + e2)
    assert not is_vector(e1 * e2)


def test_vector_inverse_examples():
    assert vector_inverse(e1) == -e1
    assert vector_inverse(scalar(2)) == F(1, 2)
    assert vector_inverse(1 + e1) == (1 - e1) / 2
    with pytest.raises(ZeroVector):
        vector_inverse(scalar(0))
    with pytest.raises(NotAVector):
        vector_inverse(e1 * e2)


def test_gamma_from_factors_examples():
    assert gamma_from_factors([scalar(2)]).value == 2
    assert gamma_from_factors([e1, e2]).value == e1 * e2
    g = gamma_from_factors([1 + e1, 1 - e1])
    assert g.value == 2 and g.check()
    assert (g.value * g.inverse().value) == 1
    with pytest.raises(ZeroVector):
        gamma_from_factors([e1, scalar(0)])


def test_mixed_mode_rejected():
    x = vector(1, 2, mode=FLOAT)
    with pytest.raises(ScalarModeError):
        x + e1
    with pytest.raises(ScalarModeError):
        x * e1
    with pytest.raises(ScalarModeError):
        CliffordNumber({(): F(1, 2)}, mode=FLOAT)


def test_canonical_form_drops_zeros():
    x = CliffordNumber({(): 0, (1,): 2})
    assert x.terms == {(1,): 2}
    assert (e1 - e1).terms == {}


# -- properties ---------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert a * (b * c) == (a * b) * c
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * 1 == a == 1 * a


@settings(max_examples=150, deadline=None)
@given(elements, elements)
def test_involution_laws(a, b):
    assert star(a * b) == star(b) * star(a)
    assert bar(a * b) == bar(b) * bar(a)
    assert prime(a * b) == prime(a) * prime(b)
    assert star(star(a)) == a and prime(prime(a)) == a and bar(bar(a)) == a
    assert bar(a) == prime(star(a)) == star(prime(a))


@given(vectors)
def test_vector_identities(x):
    assert star(x) == x
    assert bar(x) == prime(x)


@given(nonzero_vectors)
def test_vector_inverse_two_sided(x):
    inv = vector_inverse(x)
    assert x * inv == 1 and inv * x == 1


@settings(max_examples=100, deadline=None)
@given(gammas, gammas)
def test_norm_multiplicative_on_gamma(u, v):
    assert norm_sq(u.value * v.value) == norm_sq(u.value) * norm_sq(v.value)
    assert (u * v).check()


@given(elements)
def test_text_round_trip(a):
    assert parse_number(str(a)) == a


def test_float_text_round_trip():
    x = vector(0.1, -2.5, 1e-7, mode=FLOAT)
    assert parse_number(str(x), FLOAT) == x
    assert math.isclose(parse_number("11/25", FLOAT).real_part(), 0.44)


def test_format_example():
    x = CliffordNumber({(): F(3, 2), (1,): F(11, 25), (1, 2): -1})
    assert str(x) == "3/2 + 11/25*e1 - 1*e1.e2"


def test_parse_reorders_blades():
    assert parse_number("e2.e1") == -(e1 * e2)
    assert parse_number("e1.e1") == -1


@pytest.mark.parametrize("text", ["1/", "", "3 +", "3 4", "e0", "1/0", "*e1", "2*", "abc"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_number(text)
