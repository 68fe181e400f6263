"""Exact rational and Gaussian-rational arithmetic.

Rationals are :class:`fractions.Fraction`.  Gaussian rationals are stored as
an integer triple ``(a, b, d)`` meaning ``(a + b*i) / d`` with ``d > 0`` and
``gcd(a, b, d) == 1``, which keeps multiplication to a single gcd.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Union

Rational = Fraction

__all__ = [
    "Rational",
    "GaussianRational",
    "InputError",
    "normalize",
    "compare",
    "modulus_squared",
    "parse_rational",
    "format_rational",
    "parse_entry",
    "format_entry",
    "as_gaussian",
    "ZERO",
    "ONE",
    "I",
]


class InputError(ValueError):
    """Malformed input or violated precondition."""


def normalize(num: int, den: int) -> Fraction:
    if den == 0:
        raise InputError("zero denominator")
    return Fraction(num, den)


def compare(a: Fraction, b: Fraction) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    # cross-multiplication; denominators are positive
    lhs = a.numerator * b.denominator
    rhs = b.numerator * a.denominator
    return (lhs > rhs) - (lhs < rhs)


Number = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re_: int | Fraction = 0, im: int | Fraction = 0):
        re_ = Fraction(re_)
        im = Fraction(im)
        d = re_.denominator * im.denominator // gcd(re_.denominator, im.denominator)
        self._set(re_.numerator * (d // re_.denominator),
                  im.numerator * (d // im.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a = a
        self._b = b
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussianRational:
        # d > 0 required; reduction happens in _set
        z = cls.__new__(cls)
        z._set(a, b, d)
        return z

    @classmethod
    def from_parts(cls, a: int, b: int, d: int) -> GaussianRational:
        """Build ``(a + b i) / d`` from integers."""
        if d == 0:
            raise InputError("zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        return cls._raw(a, b, d)

    @property
    def parts(self) -> tuple[int, int, int]:
        return self._a, self._b, self._d

    @property
    def real(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def imag(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self._a, -self._b, self._d)

    def modulus_squared(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __add__(self, other: Number) -> GaussianRational:
        o = as_gaussian(other)
        d1, d2 = self._d, o._d
        if d1 == d2:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, d1)
        return GaussianRational._raw(self._a * d2 + o._a * d1,
                                     self._b * d2 + o._b * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __sub__(self, other: Number) -> GaussianRational:
        return self + (-as_gaussian(other))

    def __rsub__(self, other: Number) -> GaussianRational:
        return as_gaussian(other) - self

    def __mul__(self, other: Number) -> GaussianRational:
        o = as_gaussian(other)
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        if b2 == 0 and o._d == 1:
            if a2 == 1:
                return self
            if b1 == 0 and self._d == 1:
                return GaussianRational._raw(a1 * a2, 0, 1)
        return GaussianRational._raw(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2,
                                     self._d * o._d)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> GaussianRational:
        o = as_gaussian(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero GaussianRational")
        # (a1 + b1 i)/d1 / ((a2 + b2 i)/d2) = d2 (a1+b1 i)(a2-b2 i) / (d1 |a2+b2 i|^2)
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        norm = a2 * a2 + b2 * b2
        return GaussianRational._raw((a1 * a2 + b1 * b2) * o._d,
                                     (b1 * a2 - a1 * b2) * o._d, self._d * norm)

    def __rtruediv__(self, other: Number) -> GaussianRational:
        return as_gaussian(other) / self

    def __pow__(self, k: int) -> GaussianRational:
        if k < 0:
            return ONE / (self ** -k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self._b == 0:
                self._hash = hash(Fraction(self._a, self._d))
            else:
                self._hash = hash((self._a, self._b, self._d))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __complex__(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    def __repr__(self) -> str:
        return f"GaussianRational({format_entry(self)!r})"

    def __str__(self) -> str:
        return format_entry(self)


def as_gaussian(x: Number) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return GaussianRational._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return GaussianRational._raw(x.numerator, 0, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")


def modulus_squared(z: Number) -> Fraction:
    return as_gaussian(z).modulus_squared()


ZERO = GaussianRational()
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# RATIONAL := ["-"] DIGITS "/" DIGITS ; ENTRY := RATIONAL [("+"|"-") RATIONAL "i"]
_RAT = r"-?\d+/\d+"
_RAT_RE = re.compile(rf"^({_RAT})$")
_ENTRY_RE = re.compile(rf"^({_RAT})(?:([+-])(\d+/\d+)i)?$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RAT_RE.match(text):
        raise InputError(f"malformed rational {text!r} (expected e.g. '3/4')")
    num, den = text.split("/")
    return normalize(int(num), int(den))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_entry(text: str) -> GaussianRational:
    text = text.strip().replace(" ", "")
    m = _ENTRY_RE.match(text)
    if not m:
        raise InputError(f"malformed entry {text!r} (expected e.g. '3/5+4/5i')")
    re_ = parse_rational(m.group(1))
    im = Fraction(0)
    if m.group(2):
        im = parse_rational(m.group(3))
        if m.group(2) == "-":
            im = -im
    return GaussianRational(re_, im)


def format_entry(z: Number) -> str:
    z = as_gaussian(z)
    out = format_rational(z.real)
    if z.imag:
        im = z.imag
        sign = "-" if im < 0 else "+"
        out += f"{sign}{format_rational(abs(im))}i"
    return out
