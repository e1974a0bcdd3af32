"""Sparse arithmetic in the countably generated Clifford algebra.

Generators ``i_1, i_2, ...`` satisfy ``i_h i_k = -i_k i_h`` for ``h != k``
and ``i_k**2 = -1``.  An element is stored as a finite map from blades
(strictly increasing tuples of generator indices) to coefficients.  Every
element lives in one scalar mode: ``"rational"`` (``fractions.Fraction``)
or ``"float"``.  Arithmetic between modes raises :class:`ScalarModeError`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

DEFAULT_TOL = 1e-12

Blade = tuple  # strictly increasing tuple of ints >= 1; () is the scalar blade
Scalar = Union[Fraction, float]


class ScalarModeError(TypeError):
    """Raised when rational and float values meet in one operation."""


class ZeroVector(ZeroDivisionError):
    """Raised when inverting a vector (or Clifford group element) of norm 0."""


class NotAVector(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, text="", column=0, line=1):
        self.msg = message
        self.text = text
        self.column = column
        self.line = line
        super().__init__(f"{message} (line {line}, column {column})")


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"unknown scalar mode {mode!r}")
    return mode


def coerce_scalar(x, mode: str) -> Scalar:
    """Convert a Python number into the scalar type of ``mode``.

    Integers are mode-neutral.  A Fraction is refused in float mode and a
    float is refused in rational mode.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if mode == RATIONAL:
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, Fraction):
            return x
        if isinstance(x, Rational):
            return Fraction(x.numerator, x.denominator)
        raise ScalarModeError(f"{type(x).__name__} value {x!r} in rational mode")
    if mode == FLOAT:
        if isinstance(x, int):
            return float(x)
        if isinstance(x, float):
            return x
        raise ScalarModeError(f"{type(x).__name__} value {x!r} in float mode")
    raise ValueError(f"unknown scalar mode {mode!r}")


def mode_of_scalar(x) -> str | None:
    if isinstance(x, float):
        return FLOAT
    if isinstance(x, Fraction):
        return RATIONAL
    return None


def blade(*indices: int) -> Blade:
    """Validate and return a blade given strictly increasing indices."""
    for k in indices:
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise ValueError(f"generator index must be an int >= 1, got {k!r}")
    for h, k in zip(indices, indices[1:]):
        if h >= k:
            raise ValueError(f"blade indices must be strictly increasing: {indices}")
    return tuple(indices)


@lru_cache(maxsize=1 << 16)
def blade_product(A: Blade, B: Blade) -> tuple[int, Blade]:
    """Return ``(sign, C)`` with ``A*B == sign*C``.

    ``C`` is the symmetric difference of the index sets.  The sign is
    ``(-1)**(#pairs a in A, b in B with a > b) * (-1)**|A & B|``, the first
    factor counted by a single merge pass.
    """
    swaps = 0
    common = 0
    out = []
    i = j = 0
    p, q = len(A), len(B)
    while i < p and j < q:
        a, b = A[i], B[j]
        if a < b:
            out.append(a)
            i += 1
        elif b < a:
            # b must pass every remaining element of A
            swaps += p - i
            out.append(b)
            j += 1
        else:
            swaps += p - i - 1
            common += 1
            i += 1
            j += 1
    out.extend(A[i:])
    out.extend(B[j:])
    sign = -1 if (swaps + common) & 1 else 1
    return sign, tuple(out)


def _reverse_sign(p: int) -> int:
    return -1 if (p * (p - 1) // 2) & 1 else 1


class CliffordNumber:
    """Immutable, finitely supported element ``sum a_I I``.

    >>> x = CliffordNumber({(): 1, (1,): 1})
    >>> str(x * x.bar())
    '2'
    """

    __slots__ = ("_terms", "_mode", "_hash")

    def __init__(self, terms: Mapping | Scalar | int | None = None, mode: str = RATIONAL):
        _check_mode(mode)
        if terms is None:
            terms = {}
        elif not isinstance(terms, Mapping):
            m = mode_of_scalar(terms)
            if m is not None and m != mode and mode == RATIONAL:
                mode = m  # CliffordNumber(0.5) means a float element
            terms = {(): terms}
        clean = {}
        for k, v in terms.items():
            k = blade(*k)
            v = coerce_scalar(v, mode)
            if v != 0:
                clean[k] = v
        self._terms = clean
        self._mode = mode
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, mode: str) -> "CliffordNumber":
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in terms.items() if v != 0}
        obj._mode = mode
        obj._hash = None
        return obj

    # -- accessors ---------------------------------------------------------
    @property
    def mode(self) -> str:
        return self._mode

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __getitem__(self, b: Blade) -> Scalar:
        return self._terms.get(tuple(b), self._zero())

    def _zero(self):
        return Fraction(0) if self._mode == RATIONAL else 0.0

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0 or self._mode == RATIONAL:
            return not self._terms
        return all(abs(v) <= tol for v in self._terms.values())

    def generators(self) -> set[int]:
        return {k for b in self._terms for k in b}

    def max_grade(self) -> int:
        return max((len(b) for b in self._terms), default=0)

    def real_part(self) -> Scalar:
        return self._terms.get((), self._zero())

    def imag_part(self) -> "CliffordNumber":
        return CliffordNumber._raw({b: v for b, v in self._terms.items() if b}, self._mode)

    def is_real(self, tol: float = 0.0) -> bool:
        if tol and self._mode == FLOAT:
            return all(abs(v) <= tol for b, v in self._terms.items() if b)
        return all(not b for b in self._terms)

    def is_vector(self, tol: float = 0.0) -> bool:
        if tol and self._mode == FLOAT:
            return all(abs(v) <= tol for b, v in self._terms.items() if len(b) > 1)
        return all(len(b) <= 1 for b in self._terms)

    def grade_part(self, *grades: int) -> "CliffordNumber":
        return CliffordNumber._raw({b: v for b, v in self._terms.items() if len(b) in grades}, self._mode)

    # -- involutions -------------------------------------------------------
    def star(self) -> "CliffordNumber":
        """Reversal ``i_{v1}...i_{vk} -> i_{vk}...i_{v1}``."""
        return CliffordNumber._raw(
            {b: v * _reverse_sign(len(b)) for b, v in self._terms.items()}, self._mode)

    def prime(self) -> "CliffordNumber":
        """Grade involution ``i_k -> -i_k``."""
        return CliffordNumber._raw(
            {b: (-v if len(b) & 1 else v) for b, v in self._terms.items()}, self._mode)

    def bar(self) -> "CliffordNumber":
        return CliffordNumber._raw(
            {b: (-v if len(b) & 1 else v) * _reverse_sign(len(b)) for b, v in self._terms.items()},
            self._mode)

    # -- norms -------------------------------------------------------------
    def norm_sq(self) -> Scalar:
        return sum((v * v for v in self._terms.values()), self._zero())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    # -- arithmetic --------------------------------------------------------
    def _other(self, other) -> "CliffordNumber | None":
        if isinstance(other, CliffordNumber):
            if other._mode != self._mode:
                raise ScalarModeError(f"cannot combine {self._mode} and {other._mode} elements")
            return other
        if isinstance(other, (int, Fraction, float)) and not isinstance(other, bool):
            return CliffordNumber._raw({(): coerce_scalar(other, self._mode)}, self._mode)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for b, v in o._terms.items():
            out[b] = out.get(b, 0) + v
        return CliffordNumber._raw(out, self._mode)

    __radd__ = __add__

    def __neg__(self):
        return CliffordNumber._raw({b: -v for b, v in self._terms.items()}, self._mode)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if len(o._terms) == 1 and () in o._terms:
            s = o._terms[()]
            return CliffordNumber._raw({b: v * s for b, v in self._terms.items()}, self._mode)
        out: dict = {}
        for b1, v1 in self._terms.items():
            for b2, v2 in o._terms.items():
                sign, b = blade_product(b1, b2)
                out[b] = out.get(b, 0) + (v1 * v2 if sign > 0 else -(v1 * v2))
        return CliffordNumber._raw(out, self._mode)

    def __rmul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self

    def __truediv__(self, other):
        """Division by a nonzero scalar only."""
        if isinstance(other, CliffordNumber):
            if not other.is_real():
                raise TypeError("division is only defined by real scalars; use vector_inverse")
            other = other.real_part()
        s = coerce_scalar(other, self._mode)
        if s == 0:
            raise ZeroDivisionError("division by zero scalar")
        return CliffordNumber._raw({b: v / s for b, v in self._terms.items()}, self._mode)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CliffordNumber):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, float)) and not isinstance(other, bool):
            return self._terms == ({(): other} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def close_to(self, other, tol: float = DEFAULT_TOL) -> bool:
        """Exact equality in rational mode, max-coefficient distance <= tol in float mode."""
        o = self._other(other)
        if self._mode == RATIONAL:
            return self == o
        return (self - o).is_zero(tol)

    def to_mode(self, mode: str) -> "CliffordNumber":
        """Explicit conversion between scalar modes."""
        _check_mode(mode)
        if mode == self._mode:
            return self
        conv = float if mode == FLOAT else Fraction
        return CliffordNumber._raw({b: conv(v) for b, v in self._terms.items()}, mode)

    def __repr__(self):
        return f"CliffordNumber({format_number(self)!r}, mode={self._mode!r})"

    def __str__(self):
        return format_number(self)


# -- module level operations ------------------------------------------------

def scalar(x, mode: str = RATIONAL) -> CliffordNumber:
    return CliffordNumber._raw({(): coerce_scalar(x, mode)}, mode)


def gen(k: int, coeff=1, mode: str = RATIONAL) -> CliffordNumber:
    """The generator ``coeff * i_k``."""
    return CliffordNumber._raw({blade(k): coerce_scalar(coeff, mode)}, mode)


def vector(*coeffs, mode: str = RATIONAL) -> CliffordNumber:
    """``vector(x0, x1, ..., xn) = x0 + x1 i_1 + ... + xn i_n``."""
    return CliffordNumber._raw(
        {(() if k == 0 else (k,)): coerce_scalar(c, mode) for k, c in enumerate(coeffs)}, mode)


def add(a: CliffordNumber, b: CliffordNumber) -> CliffordNumber:
    return a + b


def mul(a: CliffordNumber, b: CliffordNumber) -> CliffordNumber:
    return a * b


def star(a: CliffordNumber) -> CliffordNumber:
    return a.star()


def prime(a: CliffordNumber) -> CliffordNumber:
    return a.prime()


def bar(a: CliffordNumber) -> CliffordNumber:
    return a.bar()


def norm(a: CliffordNumber) -> float:
    return a.norm()


def norm_sq(a: CliffordNumber) -> Scalar:
    return a.norm_sq()


def real_part(a: CliffordNumber) -> Scalar:
    return a.real_part()


def is_real(a: CliffordNumber, tol: float = 0.0) -> bool:
    return a.is_real(tol)


def is_vector(a: CliffordNumber, tol: float = 0.0) -> bool:
    return a.is_vector(tol)


def vector_inverse(x: CliffordNumber) -> CliffordNumber:
    """``x**-1 = bar(x) / |x|**2`` for a nonzero vector ``x``."""
    if not x.is_vector():
        raise NotAVector(f"{x} is not a vector")
    n = x.norm_sq()
    if n == 0:
        raise ZeroVector("cannot invert the zero vector")
    return x.bar() / n


def gamma_inverse(u: CliffordNumber, tol: float = DEFAULT_TOL) -> CliffordNumber:
    """Inverse of a Clifford group element, ``bar(u) / |u|**2``.

    Checks ``u * bar(u)`` is real; elements outside the Clifford group
    generally fail that test and raise ``ValueError``.
    """
    n = u.norm_sq()
    if n == 0:
        raise ZeroVector("cannot invert zero")
    ub = u.bar()
    scale = max(1.0, float(n)) if u.mode == FLOAT else 1.0
    if not (u * ub).is_real(tol * scale):
        raise ValueError(f"{u} is not invertible as a Clifford group element")
    return ub / n


@dataclass(frozen=True)
class GammaElement:
    """A Clifford group element with an explicit factorization into vectors."""

    value: CliffordNumber
    factors: tuple

    def check(self, tol: float = DEFAULT_TOL) -> bool:
        prod = self.factors[0]
        for f in self.factors[1:]:
            prod = prod * f
        return prod.close_to(self.value, tol)

    @property
    def mode(self) -> str:
        return self.value.mode

    def inverse(self) -> "GammaElement":
        inv = tuple(vector_inverse(f) for f in reversed(self.factors))
        return gamma_from_factors(inv)

    def star(self) -> "GammaElement":
        # vectors are fixed by star, so reversal just reverses the factor order
        return GammaElement(self.value.star(), tuple(reversed(self.factors)))

    def prime(self) -> "GammaElement":
        return GammaElement(self.value.prime(), tuple(f.prime() for f in self.factors))

    def __neg__(self) -> "GammaElement":
        return GammaElement(-self.value, (-self.factors[0],) + self.factors[1:])

    def scaled(self, s) -> "GammaElement":
        return GammaElement(self.value * s, (self.factors[0] * s,) + self.factors[1:])

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        return GammaElement(self.value * other.value, self.factors + other.factors)


def gamma_from_factors(fs: Sequence[CliffordNumber] | Iterable[CliffordNumber]) -> GammaElement:
    fs = tuple(fs)
    if not fs:
        raise ValueError("need at least one factor")
    mode = fs[0].mode
    for f in fs:
        if f.mode != mode:
            raise ScalarModeError("factors in different scalar modes")
        if not f.is_vector():
            raise NotAVector(f"factor {f} is not a vector")
        if f.norm_sq() == 0:
            raise ZeroVector("zero factor")
    value = fs[0]
    for f in fs[1:]:
        value = value * f
    return GammaElement(value, fs)


# -- text interchange --------------------------------------------------------

def format_scalar(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    raise TypeError(f"not a scalar: {x!r}")


def _blade_key(b):
    return (len(b), b)


def format_number(a: CliffordNumber) -> str:
    """Serialize as ``3/2 + 11/25*e1 - 1*e1.e2``."""
    if not a._terms:
        return "0"
    parts = []
    for i, b in enumerate(sorted(a._terms, key=_blade_key)):
        v = a._terms[b]
        neg = v < 0
        body = format_scalar(-v if neg else v)
        if b:
            body += "*" + ".".join(f"e{k}" for k in b)
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<op>[+-])"
    r"|(?P<coeff>" + _NUMBER + r"(?:/\d+)?)(?![\w.])"
    r"|(?P<star>\*)"
    r"|(?P<blade>e\d+(?:\.e\d+)*)"
    r")")


def _parse_coeff(tok: str, mode: str):
    if "/" in tok:
        num, den = tok.split("/")
        q = Fraction(num) / Fraction(int(den)) if int(den) != 0 else None
        if q is None:
            raise ZeroDivisionError
        return q if mode == RATIONAL else float(q)
    return Fraction(tok) if mode == RATIONAL else float(tok)


def parse_number(text: str, mode: str = RATIONAL) -> CliffordNumber:
    """Parse the interchange grammar produced by :func:`format_number`.

    Blade factors may be listed in any order; ``e2.e1`` reads as ``-e1.e2``.
    """
    _check_mode(mode)
    pos = 0
    n = len(text)
    out: dict = {}
    expect_term = True
    sign = 1
    seen_any = False

    def fail(msg, at):
        raise ParseError(msg, text, at + 1)

    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            fail(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        if kind == "op":
            if not expect_term:
                expect_term = True
                sign = 1 if m.group("op") == "+" else -1
            elif not seen_any and sign == 1:
                sign = 1 if m.group("op") == "+" else -1
            else:
                fail("unexpected sign", start)
            pos = m.end()
            continue
        if not expect_term:
            fail("expected '+' or '-' between terms", start)
        coeff = 1
        if kind == "coeff":
            try:
                coeff = _parse_coeff(m.group("coeff"), mode)
            except (ValueError, ZeroDivisionError):
                fail(f"bad coefficient {m.group('coeff')!r}", start)
            pos = m.end()
            m2 = _TOKEN.match(text, pos)
            if m2 is not None and m2.lastgroup == "star":
                pos = m2.end()
                m = _TOKEN.match(text, pos)
                if m is None or m.lastgroup != "blade":
                    fail("expected blade after '*'", pos)
                kind = "blade"
            else:
                b = ()
                kind = None
        elif kind == "star":
            fail("unexpected '*'", start)
        if kind == "blade":
            bstart = m.start("blade")
            idx = [int(s[1:]) for s in m.group("blade").split(".")]
            if any(k < 1 for k in idx):
                fail("generator indices start at 1", bstart)
            bsign, b = 1, ()
            for k in idx:
                s, b = blade_product(b, (k,))
                bsign *= s
            coeff = coeff * bsign
            pos = m.end()
        c = coerce_scalar(coeff, mode) if isinstance(coeff, int) else coeff
        out[b] = out.get(b, 0) + (c if sign > 0 else -c)
        seen_any = True
        expect_term = False
        sign = 1
    if not seen_any:
        fail("empty expression", pos)
    if expect_term:
        fail("dangling sign", n - 1)
    return CliffordNumber._raw(out, mode)
