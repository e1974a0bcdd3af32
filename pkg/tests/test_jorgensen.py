import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from vahlen.clifford import FLOAT, RATIONAL, gen, scalar
from vahlen.jorgensen import (
    ContractionDetected,
    NotCandidate,
    NotDiagonalHyperbolic,
    PreconditionNotMet,
    SignViolation,
    EqualityPersisted,
    commutator_trace_identity_check,
    contraction_bound_check,
    exact_equality_pair,
    family_pair,
    iterate,
    jorgensen_value,
    K_of,
    recursion_check,
    scan_grid,
    strictness_certificate,
)
from vahlen.moebius import diag, inverse, is_vectorial, commutator, matmul, matrix, trace, validate

from helpers import rand_certified

f2 = validate(diag(2, F(1, 2)))
f32 = validate(diag(F(3, 2), F(2, 3)))
g_demo = validate(matrix(1, F(11, 25), 1, F(36, 25)))
g112 = validate(matrix(1, 1, 1, 2))
T = validate(matrix(1, 1, 0, 1))


def brute_w_sequence(r, a, b, c, d, steps):
    """Independent real 2x2 iteration on plain Fractions."""
    def mm(x, y):
        return [[x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
                [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]]]
    f = [[r, 0], [0, 1 / r]]
    g = [[a, b], [c, d]]
    out = []
    for _ in range(steps + 1):
        out.append(g[0][1] * g[1][0])
        g = mm(mm(g, f), [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]])
    return out


def test_brute_oracle_matches_demo_values():
    ws = brute_w_sequence(F(3, 2), 1, F(11, 25), 1, F(36, 25), 2)
    assert ws == [F(11, 25), F(-11, 25), F(77, 450)]


def test_jorgensen_value_examples():
    rep = jorgensen_value(f2, g112)
    assert (rep.K, rep.w0, rep.J) == (F(9, 4), 1, F(9, 2))
    rep = jorgensen_value(f2, T)
    assert rep.J == F(9, 4) and rep.term_comm == 0
    rep = jorgensen_value(f32, g_demo)
    assert rep.K == F(25, 36) and rep.w0 == F(11, 25) and rep.J == 1
    assert rep.term_f == rep.K
    assert rep.commutator_vectorial
    assert rep.norm_used == {"term_f": "abs", "term_comm": "abs"}


def test_jorgensen_value_non_real_trace_uses_euclidean_norm():
    g = validate(matrix(1, gen(1) * gen(2), 0, 1))
    rep = jorgensen_value(f2, g)
    # [f, g] = [[1, 3 e1e2], [0, 1]] has real trace 2; w0 = 0
    assert rep.norm_used["term_comm"] == "abs"
    assert not rep.commutator_vectorial


def test_K_of_examples():
    assert K_of(f2) == F(9, 4)
    assert K_of(f32) == F(25, 36)
    with pytest.raises(NotDiagonalHyperbolic):
        K_of(validate(diag(1, 1)))
    with pytest.raises(NotDiagonalHyperbolic):
        K_of(T)


def test_K_equals_trace_square_minus_four():
    for r in (F(3, 2), F(2), F(5, 2), F(3), F(-4, 3)):
        f = diag(r, 1 / r)
        assert K_of(f) == trace(f).real_part() ** 2 - 4


def test_commutator_trace_identity_examples():
    assert commutator_trace_identity_check(f2, g112)
    assert trace(commutator(f2, g112)) - 2 == -F(9, 4)
    assert commutator_trace_identity_check(f2, T)
    assert commutator_trace_identity_check(f32, g_demo)
    assert trace(commutator(f32, g_demo)) - 2 == -F(11, 36)


def test_iterate_demo_trace():
    tr = iterate(f32, g_demo, 10)
    assert [s.w for s in tr.states[:3]] == [F(11, 25), -F(11, 25), F(77, 450)]
    assert tr[2].alpha == F(527, 648)
    assert [s.w.real_part() for s in tr.states] == brute_w_sequence(F(3, 2), 1, F(11, 25), 1, F(36, 25), 10)
    assert tr.status == "budget" and len(tr) == 11


def test_iterate_trivial_cases():
    tr = iterate(f2, T, 5)
    assert all(s.w == 0 for s in tr.states)
    tr = iterate(f2, validate(diag(3, F(1, 3))), 5)
    assert tr.status == "converged" and tr[1].g == f2 and tr[1].w == 0
    with pytest.raises(NotDiagonalHyperbolic):
        iterate(T, T, 3)


def test_iterate_reports_divergence():
    # alpha_0 = K(1 + 1) > 1 and |w| grows quickly
    f, g = family_pair(3.0, 5.0, FLOAT)
    tr = iterate(f, g, 100, overflow_bound=1e12)
    assert tr.status == "diverged" and "step" in tr.detail


def test_recursion_check_examples():
    assert all(recursion_check(iterate(f32, g_demo, 6)))
    assert all(recursion_check(iterate(f2, T, 4)))
    tr = iterate(f2, g112, 1)
    assert tr[1].w == -F(9, 2) and recursion_check(tr) == [True]


def test_recursion_check_skips_non_real_steps():
    rng = random.Random(7)
    skipped = 0
    for _ in range(10):
        g = rand_certified(rng, n=2)
        res = recursion_check(iterate(f2, g, 2))
        assert False not in res
        skipped += res.count(None)
    assert skipped > 0


def test_contraction_bound_examples():
    tr = iterate(f32, g_demo, 8)
    assert contraction_bound_check(tr, m=2)
    assert contraction_bound_check(iterate(f32, T, 4), m=0)
    with pytest.raises(PreconditionNotMet):
        contraction_bound_check(tr, m=0)


def test_contraction_small_perturbation_float():
    g = validate(matrix(1.0, 0.1, 0.1, 1.01))
    f = validate(diag(1.5, 1 / 1.5))
    tr = iterate(f, g, 100)
    assert tr[0].alpha == pytest.approx(25 / 36 * 1.01)
    assert contraction_bound_check(tr, m=0)
    # oracle: the scalar recursion at 60 digits gives |w_50| = 1.2143997880e-10
    # and first |w_m| < 1e-12 at m = 64, so 50 steps are not enough for 1e-12
    assert tr[50].w_abs == pytest.approx(1.2143997880e-10, rel=1e-8)
    assert tr.status == "converged" and tr[-1].m == 64


def test_certificate_examples():
    cert = strictness_certificate(f32, g_demo)
    assert cert.outcome == ContractionDetected(2, F(527, 648))
    assert cert.to_record() == {"outcome": "ContractionDetected", "m": 2, "alpha": "527/648",
                                "J": "1", "K": "25/36"}
    for g in (g112, T, g_demo):
        out = strictness_certificate(f2, g).outcome
        assert isinstance(out, NotCandidate) and out.J >= F(9, 4)
    out = strictness_certificate(f32, T).outcome
    assert out == NotCandidate(F(25, 36), "J != 1")


def test_certificate_float_mode():
    f, g = family_pair(1.5, 0.44, FLOAT)
    out = strictness_certificate(f, g).outcome
    assert isinstance(out, ContractionDetected) and out.m == 2


def test_certificate_sign_violation_and_persistence():
    # with a zero iteration budget no contraction can be found; w_0 > 0 so
    # the run ends as EqualityPersisted, and a longer run sees w_1 < 0 first
    assert strictness_certificate(f32, g_demo, max_steps=0).outcome == EqualityPersisted(0)
    assert strictness_certificate(f32, g_demo, max_steps=1).outcome == SignViolation(1)


def test_certificate_negative_w0_contracts_at_once():
    r = F(3, 2)
    K = (r - 1 / r) ** 2
    f, g = family_pair(r, -(1 / K - 1))
    assert jorgensen_value(f, g).J == 1
    out = strictness_certificate(f, g).outcome
    assert isinstance(out, ContractionDetected) and out.m == 1


def test_scan_grid_examples():
    rows = scan_grid([F(3, 2)], [F(11, 25)], mode=RATIONAL)
    assert len(rows) == 1 and rows[0]["J"] == 1 and rows[0]["outcome"] == "ContractionDetected"
    assert rows[0]["steps_to_contraction"] == 2
    rows = scan_grid([F(3, 2)], [1], mode=RATIONAL)
    assert rows[0]["J"] == F(25, 18) and rows[0]["outcome"] == "NotCandidate"
    assert scan_grid([], [1]) == []
    assert scan_grid([1], [1]) == []


def test_scan_grid_order_independent_of_workers():
    rs = [1.6, 1.2, 1.4]
    ws = [0.5, 0.1, 0.3]
    serial = scan_grid(rs, ws, 30, FLOAT)
    assert [(r["r"], r["w0"]) for r in serial] == sorted((r, w) for r in rs for w in ws)
    assert scan_grid(rs, ws, 30, FLOAT, workers=2) == serial


# -- properties ---------------------------------------------------------------

rs = st.sampled_from([F(3, 2), F(2), F(5, 2), F(3)])


@settings(max_examples=40, deadline=None)
@given(rs, st.integers(0, 2**32 - 1))
def test_J_closed_form(r, seed):
    f = diag(r, 1 / r)
    g = rand_certified(random.Random(seed), n=2)
    rep = jorgensen_value(f, g)
    assert rep.term_f == rep.K
    if rep.w0.is_real():
        assert rep.J == rep.K * (1 + abs(rep.w0.real_part()))


@settings(max_examples=30, deadline=None)
@given(rs, st.integers(0, 2**32 - 1))
def test_vectorial_commutator_has_real_w0(r, seed):
    f = diag(r, 1 / r)
    g = rand_certified(random.Random(seed), n=2)
    if is_vectorial(commutator(f, g)):
        assert jorgensen_value(f, g).w0.is_real()


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=F(3, 2), max_value=4, max_denominator=9),
       st.fractions(min_value=-3, max_value=3, max_denominator=9),
       st.integers(0, 2**32 - 1))
def test_J_conjugation_invariant_for_real_matrices(r, w0, seed):
    f, g = family_pair(r, w0)
    rng = random.Random(seed)
    while True:
        a, b, c = (F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        if a:
            break
    h = validate(matrix(a, b, c, (1 + b * c) / a))
    hi = inverse(h)
    fc, gc = matmul(matmul(h, f), hi), matmul(matmul(h, g), hi)
    assert jorgensen_value(fc, gc).J == jorgensen_value(f, g).J
