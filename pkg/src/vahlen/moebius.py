"""2x2 Clifford matrices, the group SL(Gamma) and its Moebius action.

A matrix ``[[a, b], [c, d]]`` belongs to SL(Gamma) when its entries lie in
the Clifford group (or are zero), ``a d* - b c* = 1`` and the four products
``a b*, d* b, c d*, c* a`` are vectors.  Clifford-group membership cannot be
decided from an entry alone, so a matrix carries a validation level
recording how much of that was checked.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Sequence

from .clifford import (
    DEFAULT_TOL,
    FLOAT,
    RATIONAL,
    CliffordNumber,
    GammaElement,
    ParseError,
    ScalarModeError,
    coerce_scalar,
    format_number,
    gamma_from_factors,
    gamma_inverse,
    mode_of_scalar,
    parse_number,
    scalar,
)


class Level(IntEnum):
    UNCHECKED = 0
    DETERMINANT_CHECKED = 1
    FULLY_CERTIFIED = 2

    @property
    def label(self) -> str:
        return {0: "Unchecked", 1: "DeterminantChecked", 2: "FullyCertified"}[self.value]


class ValidationError(ValueError):
    pass


class DeterminantNotOne(ValidationError):
    def __init__(self, delta: CliffordNumber):
        self.delta = delta
        super().__init__(f"DeterminantNotOne, Δ={delta}")


class EntryNotVectorCondition(ValidationError):
    def __init__(self, which: str, value: CliffordNumber):
        self.which = which
        self.value = value
        super().__init__(f"EntryNotVectorCondition: {which} = {value} is not a vector")


class MissingGammaEvidence(ValidationError):
    def __init__(self, entry: str, reason: str = "no factorization supplied"):
        self.entry = entry
        super().__init__(f"MissingGammaEvidence for entry {entry}: {reason}")


class NonVectorResult(ValueError):
    pass


class BadParameter(ValueError):
    pass


class _Infinity:
    """The point at infinity of the extended vector space."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

ENTRY_NAMES = ("a", "b", "c", "d")


# -- class labels -------------------------------------------------------------

@dataclass(frozen=True)
class Loxodromic:
    r: object
    lam: GammaElement


@dataclass(frozen=True)
class Hyperbolic:
    r: object


@dataclass(frozen=True)
class Parabolic:
    a: CliffordNumber
    b: CliffordNumber


@dataclass(frozen=True)
class EllipticOrOther:
    pass


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class CliffordMatrix:
    a: CliffordNumber
    b: CliffordNumber
    c: CliffordNumber
    d: CliffordNumber
    evidence: tuple = field(default=(None, None, None, None), compare=False)
    level: Level = field(default=Level.UNCHECKED, compare=False)
    label: object = field(default=None, compare=False)

    def __post_init__(self):
        modes = {e.mode for e in self.entries}
        if len(modes) != 1:
            raise ScalarModeError("matrix entries in different scalar modes")

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    @property
    def mode(self) -> str:
        return self.a.mode

    def delta(self) -> CliffordNumber:
        return determinant(self)

    def __matmul__(self, other: "CliffordMatrix") -> "CliffordMatrix":
        return matmul(self, other)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def _as_number(x, mode: str) -> CliffordNumber:
    if isinstance(x, CliffordNumber):
        if x.mode != mode:
            raise ScalarModeError(f"{x.mode} entry in a {mode} matrix")
        return x
    if isinstance(x, str):
        return parse_number(x, mode)
    return scalar(x, mode)


def _infer_mode(values) -> str:
    for v in values:
        if isinstance(v, CliffordNumber):
            return v.mode
        m = mode_of_scalar(v)
        if m is not None:
            return m
    return RATIONAL


def matrix(a, b, c, d, mode: str | None = None) -> CliffordMatrix:
    """Unchecked matrix from numbers, strings or CliffordNumbers."""
    if mode is None:
        mode = _infer_mode((a, b, c, d))
    return CliffordMatrix(*(_as_number(x, mode) for x in (a, b, c, d)))


def identity(mode: str = RATIONAL) -> CliffordMatrix:
    one, zero = scalar(1, mode), scalar(0, mode)
    return CliffordMatrix(one, zero, zero, one, level=Level.FULLY_CERTIFIED, label=Identity(),
                          evidence=(gamma_from_factors([one]), None, None, gamma_from_factors([one])))


def diag(x, y, mode: str | None = None) -> CliffordMatrix:
    return matrix(x, 0, 0, y, mode=mode)


def determinant(g: CliffordMatrix) -> CliffordNumber:
    """``a d* - b c*``."""
    return g.a * g.d.star() - g.b * g.c.star()


def _close_to_one(x: CliffordNumber, tol: float, g: CliffordMatrix | None = None) -> bool:
    """In float mode the rounding error of ``a d* - b c*`` grows with the
    entries, so the tolerance is scaled by the largest squared entry norm."""
    if g is not None and x.mode == FLOAT:
        tol = tol * max(1.0, *(float(e.norm_sq()) for e in g.entries))
    return x.close_to(1, tol)


def vector_conditions(g: CliffordMatrix) -> dict:
    return {
        "a*star(b)": g.a * g.b.star(),
        "star(d)*b": g.d.star() * g.b,
        "c*star(d)": g.c * g.d.star(),
        "star(c)*a": g.c.star() * g.a,
    }


def _evidence_problem(entry: CliffordNumber, ev, tol: float) -> str | None:
    if entry.is_zero():
        return None
    if ev is None:
        return "no factorization supplied"
    if not isinstance(ev, GammaElement):
        return "evidence is not a GammaElement"
    if not ev.check(tol) or not ev.value.close_to(entry, tol):
        return "factor product does not equal the entry"
    return None


def validate(g, level: Level = Level.DETERMINANT_CHECKED, evidence=None,
             tol: float = DEFAULT_TOL, mode: str | None = None) -> CliffordMatrix:
    """Check the SL(Gamma) conditions and tag the matrix.

    ``g`` is a CliffordMatrix or nested ``[[a, b], [c, d]]`` entries.  The
    checks for ``level`` must pass or an error is raised; the result is
    tagged with the highest level whose checks pass.  Clifford-group
    evidence is taken from ``evidence`` (four optional GammaElements) or
    from the evidence already stored on ``g``.
    """
    if not isinstance(g, CliffordMatrix):
        (a, b), (c, d) = g
        g = matrix(a, b, c, d, mode=mode)
    if evidence is None:
        evidence = g.evidence
    evidence = tuple(evidence)
    level = Level(level)
    if level == Level.UNCHECKED:
        return replace(g, evidence=evidence, level=Level.UNCHECKED)

    delta = determinant(g)
    if not _close_to_one(delta, tol, g):
        raise DeterminantNotOne(delta)
    achieved = Level.DETERMINANT_CHECKED

    problem = None
    for name, entry, ev in zip(ENTRY_NAMES, g.entries, evidence):
        why = _evidence_problem(entry, ev, tol)
        if why is not None:
            problem = MissingGammaEvidence(name, why)
            break
    if problem is None:
        for name, value in vector_conditions(g).items():
            if not value.is_vector(tol):
                problem = EntryNotVectorCondition(name, value)
                break
    if problem is None:
        achieved = Level.FULLY_CERTIFIED
    elif level == Level.FULLY_CERTIFIED:
        raise problem
    return replace(g, evidence=evidence, level=achieved)


def _product(x: CliffordMatrix, y: CliffordMatrix) -> CliffordMatrix:
    if x.mode != y.mode:
        raise ScalarModeError("cannot multiply matrices in different scalar modes")
    return CliffordMatrix(
        x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d)


def matmul(g: CliffordMatrix, h: CliffordMatrix, tol: float = DEFAULT_TOL) -> CliffordMatrix:
    """Matrix product; tagged DeterminantChecked when both inputs were and
    the determinant of the product still checks out."""
    p = _product(g, h)
    if min(g.level, h.level) >= Level.DETERMINANT_CHECKED and _close_to_one(determinant(p), tol, p):
        return replace(p, level=Level.DETERMINANT_CHECKED)
    return p


def inverse(g: CliffordMatrix) -> CliffordMatrix:
    """``[[d*, -b*], [-c*, a*]]``; Clifford-group evidence carries over."""
    ea, eb, ec, ed = g.evidence
    ev = (
        ed.star() if ed is not None else None,
        -eb.star() if eb is not None else None,
        -ec.star() if ec is not None else None,
        ea.star() if ea is not None else None,
    )
    return CliffordMatrix(g.d.star(), -g.b.star(), -g.c.star(), g.a.star(),
                          evidence=ev, level=g.level)


def commutator(f: CliffordMatrix, g: CliffordMatrix, tol: float = DEFAULT_TOL) -> CliffordMatrix:
    """``f g f^-1 g^-1``, with the determinant rechecked when inputs are validated."""
    p = _product(_product(_product(f, g), inverse(f)), inverse(g))
    if min(f.level, g.level) >= Level.DETERMINANT_CHECKED:
        delta = determinant(p)
        if not _close_to_one(delta, tol, p):
            raise DeterminantNotOne(delta)
        return replace(p, level=Level.DETERMINANT_CHECKED)
    return p


def trace(g: CliffordMatrix) -> CliffordNumber:
    return g.a + g.d.star()


def vectorial_conditions(g: CliffordMatrix, tol: float = DEFAULT_TOL) -> dict:
    """The three vectorial conditions, plus the size of the trace's
    imaginary part so near misses are visible."""
    t = trace(g)
    return {
        "b_star_fixed": g.b.star().close_to(g.b, tol),
        "c_star_fixed": g.c.star().close_to(g.c, tol),
        "trace_real": t.is_real(tol),
        "trace_imag_norm": t.imag_part().norm(),
    }


def is_vectorial(g: CliffordMatrix, tol: float = DEFAULT_TOL) -> bool:
    cond = vectorial_conditions(g, tol)
    return cond["b_star_fixed"] and cond["c_star_fixed"] and cond["trace_real"]


def hyperbolic_trace_check(g: CliffordMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Necessary condition for hyperbolic elements: real trace with square > 4."""
    t = trace(g)
    if not t.is_real(tol):
        return False
    return t.real_part() ** 2 > 4


def _vector_gamma(x: CliffordNumber) -> GammaElement | None:
    if x.is_zero():
        return None
    return gamma_from_factors([x])


def _gamma(x) -> GammaElement:
    if isinstance(x, GammaElement):
        return x
    if isinstance(x, CliffordNumber) and x.is_vector() and not x.is_zero():
        return gamma_from_factors([x])
    raise BadParameter(f"{x} needs an explicit factorization into vectors")


def make_loxodromic(r, lam=1, mode: str | None = None, tol: float = DEFAULT_TOL) -> CliffordMatrix:
    """Normal form ``diag(r*lam, r^-1 * lam')``; labeled Hyperbolic when lam = +-1."""
    if mode is None:
        mode = lam.mode if isinstance(lam, (GammaElement, CliffordNumber)) else (mode_of_scalar(r) or RATIONAL)
    r = coerce_scalar(r, mode)
    if r == 0:
        raise BadParameter("r must be nonzero")
    if abs(abs(r) - 1) <= (0 if mode == RATIONAL else tol):
        raise BadParameter("|r| must differ from 1")
    if not isinstance(lam, (GammaElement, CliffordNumber)):
        lam = scalar(lam, mode)
    lam = _gamma(lam)
    if lam.mode != mode:
        raise ScalarModeError("r and lambda in different scalar modes")
    if not scalar(lam.value.norm_sq(), mode).close_to(1, tol):
        raise BadParameter("|lambda| must be 1 for the determinant to be 1")
    top = lam.scaled(r)
    bottom = lam.prime().scaled(1 / r)
    g = CliffordMatrix(top.value, scalar(0, mode), scalar(0, mode), bottom.value)
    g = validate(g, Level.FULLY_CERTIFIED, evidence=(top, None, None, bottom), tol=tol)
    v = lam.value
    if v.close_to(1, tol) or v.close_to(-1, tol):
        label = Hyperbolic(r * v.real_part())
    else:
        label = Loxodromic(r, lam)
    return replace(g, label=label)


def make_parabolic(a, b, mode: str | None = None, tol: float = DEFAULT_TOL) -> CliffordMatrix:
    """Normal form ``[[a, b], [0, a']]`` with ``|a| = 1``, ``b != 0``, ``a b = b a'``."""
    if mode is None:
        mode = _infer_mode([x.value if isinstance(x, GammaElement) else x for x in (a, b)])
    ga = a if isinstance(a, GammaElement) else None
    gb = b if isinstance(b, GammaElement) else None
    a = ga.value if ga else _as_number(a, mode)
    b = gb.value if gb else _as_number(b, mode)
    if not scalar(a.norm_sq(), mode).close_to(1, tol):
        raise BadParameter("|a| must be 1")
    if b.is_zero(tol):
        raise BadParameter("b must be nonzero")
    if not (a * b).close_to(b * a.prime(), tol):
        raise BadParameter("need a*b == b*prime(a)")
    ga = ga or (_vector_gamma(a) if a.is_vector() else None)
    gb = gb or (_vector_gamma(b) if b.is_vector() else None)
    ed = ga.prime() if ga is not None else None
    g = CliffordMatrix(a, b, scalar(0, mode), a.prime())
    g = validate(g, Level.DETERMINANT_CHECKED, evidence=(ga, gb, None, ed), tol=tol)
    return replace(g, label=Parabolic(a, b))


# -- action ----------------------------------------------------------------

def _vector_result(y: CliffordNumber, tol: float) -> CliffordNumber:
    if y.is_vector():
        return y
    if y.mode == FLOAT:
        residue = y.grade_part(*range(2, y.max_grade() + 1))
        if residue.norm() <= tol * max(1.0, y.norm()):
            return y.grade_part(0, 1)
    raise NonVectorResult(f"image {y} is not a vector; the matrix is probably not in SL(Gamma)")


def apply(g: CliffordMatrix, x, tol: float = DEFAULT_TOL):
    """Moebius action ``x -> (a x + b)(c x + d)^-1`` on vectors and INFINITY."""
    if x is INFINITY:
        if g.c.is_zero(tol):
            return INFINITY
        return _vector_result(g.a * gamma_inverse(g.c, tol), tol)
    if not isinstance(x, CliffordNumber):
        x = scalar(x, g.mode)
    den = g.c * x + g.d
    scale = max(1.0, float(x.norm_sq()) ** 0.5) if g.mode == FLOAT else 1.0
    if den.is_zero(tol * scale):
        return INFINITY
    return _vector_result((g.a * x + g.b) * gamma_inverse(den, tol), tol)


@dataclass(frozen=True)
class OrbitReport:
    points: tuple
    saturated: bool
    depth_reached: int

    @property
    def points_found(self) -> int:
        return len(self.points)


def _point_key(p, mode: str, digits: int):
    if p is INFINITY:
        return p
    if mode == RATIONAL:
        return p
    return frozenset((b, round(v, digits)) for b, v in p.items() if round(v, digits) != 0)


def orbit_probe(generators: Sequence[CliffordMatrix], x, depth: int,
                tol: float = DEFAULT_TOL) -> OrbitReport:
    """Breadth-first orbit of ``x`` under the group generated by ``generators``.

    ``saturated`` means some level produced no new point, so the orbit is
    finite (evidence the group is elementary).  An unsaturated report says
    nothing either way.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    mode = gens[0].mode
    moves = gens + [inverse(g) for g in gens]
    digits = 9 if mode == FLOAT else 0
    if not isinstance(x, CliffordNumber) and x is not INFINITY:
        x = scalar(x, mode)
    seen = {_point_key(x, mode, digits): x}
    frontier = deque([x])
    for level in range(1, depth + 1):
        nxt = deque()
        for p in frontier:
            for g in moves:
                q = apply(g, p, tol)
                k = _point_key(q, mode, digits)
                if k not in seen:
                    seen[k] = q
                    nxt.append(q)
        if not nxt:
            return OrbitReport(tuple(seen.values()), True, level)
        frontier = nxt
    return OrbitReport(tuple(seen.values()), False, depth)


# -- matrix file format -----------------------------------------------------

def matrix_to_record(g: CliffordMatrix) -> dict:
    rec = {name: format_number(e) for name, e in zip(ENTRY_NAMES, g.entries)}
    for name, ev in zip(ENTRY_NAMES, g.evidence):
        if ev is not None:
            rec[f"factors_{name}"] = [format_number(f) for f in ev.factors]
    rec["scalar_mode"] = g.mode
    return rec


def matrix_from_record(rec: dict, mode: str | None = None) -> CliffordMatrix:
    """Build an unchecked matrix from a record; ``mode`` overrides the
    record's ``scalar_mode``."""
    if not isinstance(rec, dict):
        raise ParseError("matrix record must be an object")
    mode = mode or rec.get("scalar_mode", RATIONAL)
    if mode not in (RATIONAL, FLOAT):
        raise ParseError(f"unknown scalar_mode {mode!r}")
    entries = []
    evidence = []
    for name in ENTRY_NAMES:
        if name not in rec:
            raise ParseError(f"missing field {name!r}")
        entries.append(_parse_field(rec[name], name, mode))
        fs = rec.get(f"factors_{name}")
        if fs is None:
            evidence.append(None)
        else:
            vs = [_parse_field(s, f"factors_{name}[{i}]", mode) for i, s in enumerate(fs)]
            try:
                evidence.append(gamma_from_factors(vs))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"factors_{name}: {exc}") from exc
    return CliffordMatrix(*entries, evidence=tuple(evidence))


def _parse_field(value, name: str, mode: str) -> CliffordNumber:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = repr(value)
    if not isinstance(value, str):
        raise ParseError(f"field {name!r} must be a string")
    try:
        return parse_number(value, mode)
    except ParseError as exc:
        raise ParseError(f"field {name!r}: {exc.msg}", value, exc.column) from exc


def loads_matrix(text: str, mode: str | None = None) -> CliffordMatrix:
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, text, exc.colno, exc.lineno) from exc
    return matrix_from_record(rec, mode)


def dumps_matrix(g: CliffordMatrix) -> str:
    return json.dumps(matrix_to_record(g), indent=2)


def read_matrix(path, mode: str | None = None) -> CliffordMatrix:
    with open(path, encoding="utf-8") as fh:
        return loads_matrix(fh.read(), mode)


def write_matrix(path, g: CliffordMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(g) + "\n")
