"""Exact scalar fields: the rationals Q and the gaussian rationals Q(i).

All arithmetic in the package happens over one of these two fields.  Rationals
are gmpy2's C-backed ``mpq`` when gmpy2 is installed, else plain
``fractions.Fraction`` (the two interoperate and hash identically); gaussian
rationals are a thin wrapper around a pair of rationals.  All are immutable
and hashable, and all serialize to the workspace format ("p/q" strings, or a
["p/q", "r/s"] pair).
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Rat

    _RAT_TYPES = (int, Fraction, type(Rat(0)))
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rat = Fraction
    _RAT_TYPES = (int, Fraction)


class GaussianRational:
    """An element re + im*i of Q(i), with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Rat(re))
        object.__setattr__(self, "im", Rat(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, _RAT_TYPES):
        return GaussianRational(x)
    return NotImplemented


class Field:
    """A scalar field tag: 'Q' or 'Qi', with element constructors."""

    def __init__(self, tag):
        if tag not in ("Q", "Qi"):
            raise ValueError(f"unknown field tag {tag!r}")
        self.tag = tag

    @property
    def is_complex(self):
        return self.tag == "Qi"

    def zero(self):
        return GaussianRational(0) if self.is_complex else Rat(0)

    def one(self):
        return GaussianRational(1) if self.is_complex else Rat(1)

    def i(self):
        if not self.is_complex:
            raise ValueError("Q has no imaginary unit")
        return GaussianRational(0, 1)

    def from_int(self, n):
        return GaussianRational(n) if self.is_complex else Rat(n)

    def coerce(self, x):
        """Coerce an int/Fraction/GaussianRational into this field."""
        if self.is_complex:
            if isinstance(x, GaussianRational):
                return x
            return GaussianRational(x)
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise ValueError("cannot coerce a properly complex value into Q")
            return x.re
        return Rat(x)

    def contains(self, x):
        if self.is_complex:
            return isinstance(x, _RAT_TYPES) or isinstance(x, GaussianRational)
        return isinstance(x, _RAT_TYPES)

    def __eq__(self, other):
        return isinstance(other, Field) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return f"Field({self.tag!r})"


QQ = Field("Q")
QI = Field("Qi")


def parse_fraction(s):
    """Parse a "p/q" or "p" string (or int) into an exact rational."""
    if isinstance(s, int):
        return Rat(s)
    if isinstance(s, str):
        try:
            return Rat(Fraction(s.strip()))
        except (ValueError, ZeroDivisionError, TypeError):
            raise ValueError(f"cannot parse rational from {s!r}")
    raise ValueError(f"cannot parse rational from {s!r}")


def parse_scalar(obj, field):
    """Parse a workspace scalar: "p/q" for Q, ["p/q","r/s"] for Q(i)."""
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValueError(f"gaussian rational needs two components, got {obj!r}")
        if not field.is_complex:
            raise ValueError("two-component scalar given but the field is Q")
        return GaussianRational(parse_fraction(obj[0]), parse_fraction(obj[1]))
    return field.coerce(parse_fraction(obj))


def format_fraction(x):
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x):
    """Serialize a scalar bit-exactly (lowest terms, positive denominator)."""
    if isinstance(x, GaussianRational):
        return [format_fraction(x.re), format_fraction(x.im)]
    return format_fraction(x)
