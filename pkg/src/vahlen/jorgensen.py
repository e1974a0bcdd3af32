"""Jorgensen functional and the strictness engine.

For ``f = diag(r, 1/r)`` with ``K = (r - 1/r)**2`` and ``g = [[a, b], [c, d]]``
the functional is ``J(f, g) = |tr(f)**2 - 4| + |tr([f, g]) - 2|``, which
reduces to ``K (1 + |b c*|)``.  The engine iterates ``g_{m+1} = g_m f g_m^-1``,
tracks ``w_m = b_m c_m*`` and ``alpha_m = K (1 + |w_m|)``, and turns the
dichotomy behind strictness into a verdict on concrete input: either some
``alpha_m`` drops below 1 (so the pair cannot generate a discrete
non-elementary group while ``J = 1``) or the iteration is reported as
inconclusive.  No verdict ever claims discreteness.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .clifford import (
    DEFAULT_TOL,
    FLOAT,
    RATIONAL,
    CliffordNumber,
    coerce_scalar,
    format_number,
    format_scalar,
    scalar,
)
from .moebius import (
    CliffordMatrix,
    Level,
    _product,
    commutator,
    determinant,
    inverse,
    is_vectorial,
    matrix,
    trace,
    validate,
)

DEFAULT_OVERFLOW_BOUND = 1e30
DEFAULT_MAX_BITS = 200_000


class NotDiagonalHyperbolic(ValueError):
    pass


class PreconditionNotMet(ValueError):
    pass


def magnitude(x: CliffordNumber):
    """``(|x|, norm_name)``: exact absolute value for real ``x``, else the
    Euclidean norm as a float."""
    if x.is_real():
        return abs(x.real_part()), "abs"
    return x.norm(), "euclidean"


def diagonal_parameter(f: CliffordMatrix, tol: float = DEFAULT_TOL):
    """Return ``r`` for ``f = diag(r, 1/r)`` with real ``r``, ``|r| != 1``."""
    exact = f.mode == RATIONAL
    if not (f.b.is_zero(0 if exact else tol) and f.c.is_zero(0 if exact else tol)):
        raise NotDiagonalHyperbolic("f is not diagonal")
    if not (f.a.is_real(tol) and f.d.is_real(tol)):
        raise NotDiagonalHyperbolic("diagonal entries of f are not real")
    r, s = f.a.real_part(), f.d.real_part()
    if r == 0:
        raise NotDiagonalHyperbolic("r = 0")
    if not (r * s == 1 if exact else abs(r * s - 1) <= tol):
        raise NotDiagonalHyperbolic("f is not of the form diag(r, 1/r)")
    if (abs(r) == 1) if exact else abs(abs(r) - 1) <= tol:
        raise NotDiagonalHyperbolic("|r| = 1, f is not hyperbolic")
    return r


def K_of(f: CliffordMatrix, tol: float = DEFAULT_TOL):
    """``(r - 1/r)**2`` for ``f = diag(r, 1/r)``; equals ``tr(f)**2 - 4``."""
    r = diagonal_parameter(f, tol)
    return (r - 1 / r) ** 2


@dataclass(frozen=True)
class JorgensenReport:
    K: object
    w0: CliffordNumber
    term_f: object
    term_comm: object
    J: object
    commutator_vectorial: bool
    norm_used: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "K": _fmt(self.K),
            "w0": format_number(self.w0),
            "term_f": _fmt(self.term_f),
            "term_comm": _fmt(self.term_comm),
            "J": _fmt(self.J),
            "commutator_vectorial": self.commutator_vectorial,
            "norm_used": dict(self.norm_used),
        }


def _fmt(x):
    return None if x is None else format_scalar(x)


def jorgensen_value(f: CliffordMatrix, g: CliffordMatrix, tol: float = DEFAULT_TOL) -> JorgensenReport:
    """Evaluate ``|tr(f)**2 - 4| + |tr([f, g]) - 2|``.

    Absolute values of non-real traces fall back to the Euclidean norm and
    ``norm_used`` says so.  ``K`` is filled in only when ``f`` is diagonal
    hyperbolic.
    """
    tf = trace(f)
    term_f, nf = magnitude(tf * tf - 4)
    comm = commutator(f, g, tol)
    term_comm, nc = magnitude(trace(comm) - 2)
    try:
        K = K_of(f, tol)
    except NotDiagonalHyperbolic:
        K = None
    return JorgensenReport(
        K=K,
        w0=g.b * g.c.star(),
        term_f=term_f,
        term_comm=term_comm,
        J=term_f + term_comm,
        commutator_vectorial=is_vectorial(comm, tol),
        norm_used={"term_f": nf, "term_comm": nc},
    )


def commutator_trace_identity_check(f: CliffordMatrix, g: CliffordMatrix,
                                    tol: float = DEFAULT_TOL) -> bool:
    """``tr([f, g]) - 2 == -K b c*`` for diagonal hyperbolic ``f``."""
    K = K_of(f, tol)
    lhs = trace(commutator(f, g, tol)) - 2
    rhs = (g.b * g.c.star()) * (-K)
    if f.mode == RATIONAL:
        return lhs == rhs
    return lhs.close_to(rhs, tol * max(1.0, rhs.norm()))


# -- iteration ---------------------------------------------------------------

@dataclass(frozen=True)
class IterationState:
    m: int
    g: CliffordMatrix
    w: CliffordNumber
    alpha: object
    J: object

    @property
    def w_abs(self):
        return magnitude(self.w)[0]

    @property
    def entry_max_norm(self) -> float:
        return max(math.sqrt(e.norm_sq()) for e in self.g.entries)


@dataclass(frozen=True)
class IterationTrace:
    K: object
    states: tuple
    status: str  # converged | diverged | budget | stopped
    detail: str = ""

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i) -> IterationState:
        return self.states[i]

    @property
    def w(self) -> list:
        return [s.w for s in self.states]


def _state(m: int, g: CliffordMatrix, K) -> IterationState:
    w = g.b * g.c.star()
    alpha = K * (1 + magnitude(w)[0])
    return IterationState(m, g, w, alpha, alpha)


def _size_problem(g: CliffordMatrix, overflow_bound: float, max_bits: int) -> str | None:
    for e in g.entries:
        if e.mode == FLOAT:
            for v in e.terms.values():
                if not math.isfinite(v):
                    return "non-finite entry"
        elif max_bits:
            for v in e.terms.values():
                if max(v.numerator.bit_length(), v.denominator.bit_length()) > max_bits:
                    return f"entry exceeds {max_bits} bits"
        if e.norm_sq() > overflow_bound:
            return f"entry norm_sq exceeds {overflow_bound:g}"
    return None


def _true_inverse(g: CliffordMatrix) -> CliffordMatrix:
    # The closed form inverts only when det = 1.  In float mode det drifts,
    # and conjugating by the adjugate would square that error every step.
    inv = inverse(g)
    if g.mode == RATIONAL:
        return inv
    s = determinant(g).real_part()
    return CliffordMatrix(*(e / s for e in inv.entries))


def iterate(f: CliffordMatrix, g: CliffordMatrix, max_steps: int = 100,
            tolerance: float = DEFAULT_TOL, overflow_bound: float = DEFAULT_OVERFLOW_BOUND,
            max_bits: int = DEFAULT_MAX_BITS,
            stop: Callable[[IterationState], bool] | None = None) -> IterationTrace:
    """Run ``g_{m+1} = g_m f g_m^-1`` for ``m = 0..max_steps``.

    ``w_m`` is read off each ``g_m`` directly.  The run ends early when
    ``|w_m| < tolerance`` for some ``m >= 1`` (converged), when an entry
    grows past ``overflow_bound`` or, in rational mode, past ``max_bits``
    bits (diverged), or when ``stop(state)`` is true (stopped).
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    K = K_of(f, tolerance)
    states = []
    cur = g
    status, detail = "budget", ""
    for m in range(max_steps + 1):
        st = _state(m, cur, K)
        states.append(st)
        problem = _size_problem(cur, overflow_bound, max_bits)
        if problem is not None:
            status, detail = "diverged", f"step {m}: {problem}"
            break
        if stop is not None and stop(st):
            status = "stopped"
            break
        if m >= 1 and st.w_abs < tolerance:
            status = "converged"
            break
        if m == max_steps:
            break
        cur = _product(_product(cur, f), _true_inverse(cur))
    return IterationTrace(K, tuple(states), status, detail)


def recursion_check(tr: IterationTrace, K=None, tol: float = DEFAULT_TOL) -> list:
    """Per step ``m``: does ``w_{m+1} == -K (1 + w_m) w_m``?

    ``None`` marks steps skipped because ``w_m`` is not real.
    """
    K = tr.K if K is None else K
    out = []
    for s, nxt in zip(tr.states, tr.states[1:]):
        if not s.w.is_real():
            out.append(None)
            continue
        w = s.w.real_part()
        expected = -K * (1 + w) * w
        if s.w.mode == RATIONAL:
            out.append(nxt.w == scalar(expected, RATIONAL) if expected != 0 else nxt.w.is_zero())
        else:
            out.append(nxt.w.close_to(expected, tol * max(1.0, abs(expected))))
    return out


def contraction_bound_check(tr: IterationTrace, K=None, m: int = 0,
                            tol: float = DEFAULT_TOL) -> bool:
    """Check ``|w_{m+n}| <= alpha_m**n |w_m|`` and monotone decrease of ``|w|``
    over every recorded step from ``m`` on.  Float mode allows ``tol``
    absolute slack."""
    K = tr.K if K is None else K
    base = tr.states[m]
    alpha = K * (1 + base.w_abs)
    if alpha >= 1:
        raise PreconditionNotMet(f"alpha_{m} = {alpha} >= 1")
    slack = 0 if base.w.mode == RATIONAL else tol
    w_m = base.w_abs
    prev = w_m
    bound = w_m
    for s in tr.states[m + 1:]:
        bound = bound * alpha
        cur = s.w_abs
        if cur > bound + slack or cur > prev + slack:
            return False
        prev = cur
    return True


# -- certificate ---------------------------------------------------------------

@dataclass(frozen=True)
class ContractionDetected:
    m: int
    alpha: object
    name = "ContractionDetected"


@dataclass(frozen=True)
class EqualityPersisted:
    m: int
    name = "EqualityPersisted"


@dataclass(frozen=True)
class NotCandidate:
    J: object
    reason: str = ""
    name = "NotCandidate"


@dataclass(frozen=True)
class SignViolation:
    m: int
    name = "SignViolation"


@dataclass(frozen=True)
class Certificate:
    outcome: object
    K: object
    J: object
    report: JorgensenReport
    trace: IterationTrace | None = None

    def to_record(self) -> dict:
        o = self.outcome
        rec = {
            "outcome": o.name,
            "m": getattr(o, "m", None),
            "alpha": _fmt(getattr(o, "alpha", None)),
            "J": _fmt(self.J),
            "K": _fmt(self.K),
        }
        if isinstance(o, NotCandidate):
            rec["reason"] = o.reason
        return rec


def strictness_certificate(f: CliffordMatrix, g: CliffordMatrix, max_steps: int = 100,
                           tolerance: float = DEFAULT_TOL,
                           overflow_bound: float = DEFAULT_OVERFLOW_BOUND,
                           max_bits: int = DEFAULT_MAX_BITS) -> Certificate:
    """Replay the strictness argument on a concrete pair.

    Only pairs with ``K < 1``, ``J = 1`` and a vectorial commutator are
    candidates.  For those the iteration runs until the first ``m`` with
    ``alpha_m < 1`` (ContractionDetected).  Without contraction, a step
    where ``w_m`` is not strictly positive gives SignViolation; otherwise
    EqualityPersisted.  Rational mode compares exactly and ignores
    ``tolerance``.
    """
    exact = f.mode == RATIONAL
    K = K_of(f, tolerance)
    report = jorgensen_value(f, g, tolerance)
    J = report.J
    if (K >= 1) if exact else K >= 1 - tolerance:
        return Certificate(NotCandidate(J, "K >= 1: the hyperbolic term alone is >= 1"), K, J, report)
    if (J != 1) if exact else abs(J - 1) > tolerance:
        return Certificate(NotCandidate(J, "J != 1"), K, J, report)
    if not report.commutator_vectorial:
        return Certificate(NotCandidate(J, "commutator is not vectorial"), K, J, report)

    def contracted(st):
        return st.alpha < 1 if exact else st.alpha < 1 - tolerance

    tr = iterate(f, g, max_steps, tolerance, overflow_bound, max_bits, stop=contracted)
    last = tr.states[-1]
    if tr.status == "stopped":
        return Certificate(ContractionDetected(last.m, last.alpha), K, J, report, tr)
    for st in tr.states:
        w = st.w
        positive = w.is_real() and (w.real_part() > 0 if exact else w.real_part() > tolerance)
        if not positive:
            return Certificate(SignViolation(st.m), K, J, report, tr)
    return Certificate(EqualityPersisted(last.m), K, J, report, tr)


# -- grid scan -------------------------------------------------------------------

def family_pair(r, w0, mode: str = RATIONAL):
    """``f = diag(r, 1/r)`` and ``g = [[1, w0], [1, 1 + w0]]`` (det 1 by construction)."""
    r = coerce_scalar(r, mode)
    w0 = coerce_scalar(w0, mode)
    f = validate(matrix(r, 0, 0, 1 / r, mode=mode), Level.DETERMINANT_CHECKED)
    g = validate(matrix(1, w0, 1, 1 + w0, mode=mode), Level.DETERMINANT_CHECKED)
    return f, g


def _scan_point(args):
    r, w0, steps, mode, tol = args
    f, g = family_pair(r, w0, mode)
    cert = strictness_certificate(f, g, steps, tol)
    o = cert.outcome
    return {
        "r": r,
        "w0": w0,
        "K": cert.K,
        "J": cert.J,
        "outcome": o.name,
        "m": getattr(o, "m", None),
        "alpha": getattr(o, "alpha", None),
        "steps_to_contraction": o.m if isinstance(o, ContractionDetected) else None,
    }


def scan_grid(r_values: Iterable, w0_values: Iterable, steps: int = 100, mode: str = FLOAT,
              tolerance: float = DEFAULT_TOL, workers: int = 1) -> list[dict]:
    """Certificate outcome for every ``(r, w0)`` of the family in
    :func:`family_pair`, sorted by ``(r, w0)``.  Points with ``r = 0`` or
    ``|r| = 1`` are skipped."""
    rs = sorted({coerce_scalar(r, mode) for r in r_values})
    ws = sorted({coerce_scalar(w, mode) for w in w0_values})
    pts = [(r, w, steps, mode, tolerance) for r in rs for w in ws if r != 0 and abs(r) != 1]
    if workers > 1 and len(pts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_scan_point, pts, chunksize=max(1, len(pts) // (4 * workers))))
    return [_scan_point(p) for p in pts]


def exact_equality_pair(r):
    """Rational pair on the ``J = 1`` boundary: ``w0 = 1/K - 1``."""
    r = Fraction(r)
    K = (r - 1 / r) ** 2
    if not 0 < K < 1:
        raise ValueError(f"need 0 < K < 1, got K = {K}")
    return family_pair(r, 1 / K - 1, RATIONAL)
