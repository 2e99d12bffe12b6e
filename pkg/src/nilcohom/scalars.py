"""Exact scalars: rationals and Gaussian rationals.

Plain rationals are ``fractions.Fraction``; the Gaussian field Q(i) is a thin
pair-of-Fractions class.  Mixed arithmetic promotes Fraction -> QI, never the
other way around; collapsing a QI with zero imaginary part back to Fraction is
an explicit call (:meth:`QI.to_fraction`).
"""

from __future__ import annotations

from fractions import Fraction

FIELD_Q = "Q"
FIELD_QI = "Qi"

_RAT_TYPES = (int, Fraction)


class QI:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- ring/field operations -------------------------------------------

    def __add__(self, other):
        if isinstance(other, QI):
            return QI(self.re + other.re, self.im + other.im)
        if isinstance(other, _RAT_TYPES):
            return QI(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, QI):
            return QI(self.re - other.re, self.im - other.im)
        if isinstance(other, _RAT_TYPES):
            return QI(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _RAT_TYPES):
            return QI(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QI):
            return QI(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, _RAT_TYPES):
            return QI(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _RAT_TYPES):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QI(self.re / other, self.im / other)
        if isinstance(other, QI):
            n = other.re * other.re + other.im * other.im
            if n == 0:
                raise ZeroDivisionError("division by zero")
            return (self * other.conjugate()) / n
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _RAT_TYPES):
            return QI(other) / self
        return NotImplemented

    def conjugate(self):
        return QI(self.re, -self.im)

    # -- predicates --------------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, QI):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RAT_TYPES):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_rational(self):
        return self.im == 0

    def to_fraction(self):
        """Explicit coercion to Fraction; rejects a nonzero imaginary part."""
        if self.im != 0:
            raise ValueError(f"{self} has a nonzero imaginary part")
        return self.re

    def __repr__(self):
        return f"QI({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


I_UNIT = QI(0, 1)


def field_of(x) -> str:
    return FIELD_QI if isinstance(x, QI) else FIELD_Q


def promote(x, field: str):
    """Coerce ``x`` into the given field tag ("Q" or "Qi")."""
    if field == FIELD_QI:
        return x if isinstance(x, QI) else QI(x)
    if isinstance(x, QI):
        return x.to_fraction()
    return Fraction(x)


def join_fields(*tags: str) -> str:
    return FIELD_QI if FIELD_QI in tags else FIELD_Q


def format_scalar(x) -> str:
    """Render a scalar in the wire format: "p/q" or "p/q+r/s i"."""
    if isinstance(x, QI):
        im = x.im
        sign = "-" if im < 0 else "+"
        return f"{_frac_str(x.re)}{sign}{_frac_str(abs(im))} i"
    return _frac_str(Fraction(x))


def _frac_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_scalar(text: str, field: str = FIELD_Q):
    """Parse the wire format back into Fraction or QI (inverse of format)."""
    s = text.strip()
    if s.endswith("i"):
        body = s[:-1].strip()
        # split at the sign that separates real and imaginary parts
        k = max(body.rfind("+"), body.rfind("-", 1))
        if k <= 0:
            raise ValueError(f"bad Gaussian scalar: {text!r}")
        re = Fraction(body[:k].strip())
        im = Fraction((body[k] + body[k + 1 :]).strip().replace("+", ""))
        return QI(re, im)
    val = Fraction(s)
    return QI(val) if field == FIELD_QI else val
