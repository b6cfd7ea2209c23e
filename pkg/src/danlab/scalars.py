"""Scalar backends.

Two kinds of numbers flow through the library:

* ``ExactComplex`` -- a Gaussian rational ``re + im*i`` with arbitrary
  precision rational parts (backed by ``gmpy2.mpq``).  All algebraic
  identities are checked in this backend with zero tolerance.
* plain Python ``complex`` -- the approximate backend used for Monte Carlo
  and anything transcendental.

Mixing an exact value with a float/complex degrades to ``complex``, the same
way ``Fraction`` degrades to ``float``.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction

from gmpy2 import mpq, mpz

_RATIONAL_TYPES = (int, mpz, mpq, Fraction)
_INEXACT_TYPES = (float, complex)


def _as_mpq(v):
    if isinstance(v, mpq):
        return v
    if isinstance(v, float):
        # exact binary value of the double
        return mpq(Fraction(v))
    return mpq(v)


class ExactComplex(tuple):
    """Immutable Gaussian rational ``re + im*i``."""

    __slots__ = ()

    def __new__(cls, re=0, im=0):
        return tuple.__new__(cls, (_as_mpq(re), _as_mpq(im)))

    @classmethod
    def _raw(cls, re, im):
        return tuple.__new__(cls, (re, im))

    @property
    def re(self):
        return self[0]

    @property
    def im(self):
        return self[1]

    real = re
    imag = im

    # -- coercion -----------------------------------------------------------
    @staticmethod
    def coerce(v):
        """Return ``v`` as an ExactComplex, or raise TypeError for inexact input."""
        if isinstance(v, ExactComplex):
            return v
        if isinstance(v, _RATIONAL_TYPES):
            return ExactComplex._raw(mpq(v), _ZERO_Q)
        raise TypeError(f"cannot represent {v!r} exactly")

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, ExactComplex):
            return ExactComplex._raw(self[0] + other[0], self[1] + other[1])
        if isinstance(other, _RATIONAL_TYPES):
            return ExactComplex._raw(self[0] + other, self[1])
        if isinstance(other, _INEXACT_TYPES):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ExactComplex):
            return ExactComplex._raw(self[0] - other[0], self[1] - other[1])
        if isinstance(other, _RATIONAL_TYPES):
            return ExactComplex._raw(self[0] - other, self[1])
        if isinstance(other, _INEXACT_TYPES):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            return ExactComplex._raw(other - self[0], -self[1])
        if isinstance(other, _INEXACT_TYPES):
            return other - complex(self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, ExactComplex):
            a, b = self
            c, d = other
            if not d:
                return ExactComplex._raw(a * c, b * c)
            if not b:
                return ExactComplex._raw(a * c, a * d)
            return ExactComplex._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, _RATIONAL_TYPES):
            return ExactComplex._raw(self[0] * other, self[1] * other)
        if isinstance(other, _INEXACT_TYPES):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            other = ExactComplex._raw(mpq(other), _ZERO_Q)
        if isinstance(other, ExactComplex):
            c, d = other
            n = c * c + d * d
            if not n:
                raise ZeroDivisionError("ExactComplex division by zero")
            a, b = self
            return ExactComplex._raw((a * c + b * d) / n, (b * c - a * d) / n)
        if isinstance(other, _INEXACT_TYPES):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            return ExactComplex._raw(mpq(other), _ZERO_Q) / self
        if isinstance(other, _INEXACT_TYPES):
            return other / complex(self)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ONE / (self ** -n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self):
        return ExactComplex._raw(-self[0], -self[1])

    def __pos__(self):
        return self

    def conjugate(self):
        return ExactComplex._raw(self[0], -self[1])

    def abs2(self):
        """Exact squared modulus (a rational)."""
        return self[0] * self[0] + self[1] * self[1]

    def __abs__(self):
        return math.hypot(float(self[0]), float(self[1]))

    def __bool__(self):
        return bool(self[0]) or bool(self[1])

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, ExactComplex):
            return self[0] == other[0] and self[1] == other[1]
        if isinstance(other, _RATIONAL_TYPES):
            return not self[1] and self[0] == other
        if isinstance(other, _INEXACT_TYPES):
            return complex(self) == other
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if not self[1]:
            return hash(self[0])
        return hash((self[0], self[1]))

    def __complex__(self):
        return complex(float(self[0]), float(self[1]))

    def __repr__(self):
        return f"ExactComplex({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    def __reduce__(self):
        return (ExactComplex, (Fraction(int(self[0].numerator), int(self[0].denominator)),
                               Fraction(int(self[1].numerator), int(self[1].denominator))))


numbers.Complex.register(ExactComplex)

_ZERO_Q = mpq(0)
ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I = ExactComplex(0, 1)

Scalar = "ExactComplex | complex"


def is_exact(v) -> bool:
    return isinstance(v, ExactComplex) or isinstance(v, _RATIONAL_TYPES)


def to_exact(v) -> ExactComplex:
    """Convert any number to ExactComplex; floats convert by their exact binary value."""
    if isinstance(v, ExactComplex):
        return v
    if isinstance(v, complex):
        return ExactComplex(v.real, v.imag)
    if isinstance(v, float):
        return ExactComplex(v)
    return ExactComplex.coerce(v)


def to_approx(v) -> complex:
    return complex(v)


def abs2(v):
    """Squared modulus; exact for exact input."""
    if isinstance(v, ExactComplex):
        return v.abs2()
    if isinstance(v, _RATIONAL_TYPES):
        return mpq(v) * mpq(v)
    v = complex(v)
    return v.real * v.real + v.imag * v.imag


def modulus_cmp(a, b) -> int:
    """Compare |a| with |b|; exact when both are exact. Returns -1, 0 or 1."""
    if is_exact(a) and is_exact(b):
        x, y = abs2(a), abs2(b)
    else:
        x, y = abs(complex(a)), abs(complex(b))
    return (x > y) - (x < y)


def modulus_le(a, bound) -> bool:
    """``|a| <= bound`` for a real ``bound``; decided exactly for exact ``a``."""
    if is_exact(a):
        if math.isinf(bound):
            return bound > 0
        b = _as_mpq(bound)
        return b >= 0 and abs2(a) <= b * b
    return abs(complex(a)) <= bound


def modulus_gt(a, bound) -> bool:
    return not modulus_le(a, bound)


# -- text format -------------------------------------------------------------

_MINUS_SIGNS = str.maketrans({"−": "-", "–": "-"})


def _is_decimal_text(s: str) -> bool:
    return any(ch in s for ch in ".eE") or "inf" in s or "nan" in s


def _split_complex(s: str):
    """Split ``a+bi`` into ('a', 'b'); handles exponents like 1e-3."""
    body = s[:-1]
    cut = None
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-" and body[i - 1] not in "eE":
            cut = i
            break
    if cut is None:
        re_txt, im_txt = "0", body
    else:
        re_txt, im_txt = body[:cut], body[cut:]
    if im_txt in ("", "+"):
        im_txt = "1"
    elif im_txt == "-":
        im_txt = "-1"
    return re_txt, im_txt


def _parse_real(txt: str, exact: bool):
    if exact:
        return mpq(Fraction(txt))
    return float(Fraction(txt)) if "/" in txt else float(txt)


def parse_scalar(text: str, exact: bool | None = None):
    """Parse ``"p/q"``, ``"p/q+r/s i"`` or a decimal into a scalar.

    With ``exact=None`` the backend is inferred: decimals (``.``/exponent)
    give ``complex``, everything else gives ``ExactComplex``.
    """
    s = str(text).translate(_MINUS_SIGNS).replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if exact is None:
        exact = not _is_decimal_text(s)
    if s.endswith("i") or s.endswith("j"):
        re_txt, im_txt = _split_complex(s)
    else:
        re_txt, im_txt = s, "0"
    try:
        re_v = _parse_real(re_txt, exact)
        im_v = _parse_real(im_txt, exact)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed scalar {text!r}") from exc
    if exact:
        return ExactComplex._raw(re_v, im_v)
    return complex(re_v, im_v)


def _fmt_q(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(v) -> str:
    """Inverse of ``parse_scalar``; round-trips bit-exactly in both backends."""
    if isinstance(v, _RATIONAL_TYPES):
        v = ExactComplex.coerce(v)
    if isinstance(v, ExactComplex):
        re_s = _fmt_q(v[0])
        if not v[1]:
            return re_s
        im_s = _fmt_q(v[1])
        sign = "" if im_s.startswith("-") else "+"
        return f"{re_s}{sign}{im_s}i"
    v = complex(v)
    re_s = repr(v.real)
    if v.imag == 0 and not math.copysign(1.0, v.imag) < 0:
        return re_s
    im_s = repr(v.imag)
    sign = "" if im_s.startswith("-") else "+"
    return f"{re_s}{sign}{im_s}i"
