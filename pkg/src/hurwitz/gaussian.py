"""Exact arithmetic in Z[i] and Q(i), and the nearest-Gaussian-integer map.

The rounding convention is the half-open unit cell D = [-1/2, 1/2)^2: the
nearest Gaussian integer [z] is the unique g with z - g in D, so exact
half-integer coordinates round up.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

__all__ = [
    "GaussianInt",
    "GaussianRational",
    "gaussian_gcd",
    "nearest_gaussian_integer",
    "parse_gaussian_int",
    "parse_gaussian_rational",
    "UNITS",
]


class GaussianInt:
    """An element re + im*i of Z[i]. Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianInt is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianInt":
        if isinstance(value, GaussianInt):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, complex):
            if value.real != int(value.real) or value.imag != int(value.imag):
                raise ValueError(f"{value!r} is not a Gaussian integer")
            return cls(int(value.real), int(value.imag))
        if isinstance(value, str):
            return parse_gaussian_int(value)
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianInt")

    # arithmetic

    def __add__(self, other):
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re + other.re, self.im + other.im)
        if isinstance(other, int):
            return GaussianInt(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re - other.re, self.im - other.im)
        if isinstance(other, int):
            return GaussianInt(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return GaussianInt(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianInt):
            return GaussianInt(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not Gaussian integers")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return GaussianRational(self, GaussianInt.coerce(other))

    def __rtruediv__(self, other):
        return GaussianRational(GaussianInt.coerce(other), self)

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def divmod_nearest(self, other: "GaussianInt") -> tuple["GaussianInt", "GaussianInt"]:
        """Euclidean division with the quotient rounded to the nearest Gaussian integer.

        The remainder r = self - k*other satisfies norm(r) <= norm(other)/2.
        """
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        t = self * other.conjugate()
        k = GaussianInt(_round_half_up(t.re, n), _round_half_up(t.im, n))
        return k, self - k * other

    def normalized(self) -> "GaussianInt":
        """The unit multiple lying in the quadrant re > 0, im >= 0 (0 maps to 0)."""
        z = self
        if z.re == 0 and z.im == 0:
            return z
        for _ in range(4):
            if z.re > 0 and z.im >= 0:
                return z
            z = GaussianInt(-z.im, z.re)
        raise AssertionError("unreachable")

    def __complex__(self):
        return complex(self.re, self.im)

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        if isinstance(other, GaussianInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self) -> tuple[int, int]:
        return (self.re, self.im)

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self):
        return format_gaussian(self.re, self.im)


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS = (ONE, I, -ONE, -I)


def _round_half_up(num: int, den: int) -> int:
    """floor(num/den + 1/2) for den > 0."""
    return (2 * num + den) // (2 * den)


def format_gaussian(re, im) -> str:
    """Render re + im*i as "a+bi" / "a-bi", dropping zero parts and unit coefficients."""
    if im == 0:
        return str(re)
    if im == 1:
        imag = "i"
    elif im == -1:
        imag = "-i"
    else:
        imag = f"{im}i"
    if re == 0:
        return imag
    sign = "" if imag.startswith("-") else "+"
    return f"{re}{sign}{imag}"


def gaussian_gcd(a, b) -> GaussianInt:
    """Greatest common divisor in Z[i], normalized to the quadrant re > 0, im >= 0."""
    a = GaussianInt.coerce(a)
    b = GaussianInt.coerce(b)
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        _, r = a.divmod_nearest(b)
        a, b = b, r
    return a.normalized()


class GaussianRational:
    """An element num/den of Q(i) kept in canonical form.

    Canonical form: gcd(num, den) is a unit and den lies in the quadrant
    re > 0, im >= 0. Zero is 0/1. Two values are equal iff their canonical
    forms coincide, so hashing is consistent with value equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = GaussianInt.coerce(num)
        den = GaussianInt.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = ZERO, ONE
        else:
            g = gaussian_gcd(num, den)
            if g != ONE:
                num, _ = num.divmod_nearest(g)
                den, _ = den.divmod_nearest(g)
            num, den = _normalize_pair(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _raw(cls, num: GaussianInt, den: GaussianInt) -> "GaussianRational":
        # caller guarantees canonical form
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (GaussianInt, int)):
            return cls(value, 1)
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        if isinstance(value, str):
            return parse_gaussian_rational(value)
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    @classmethod
    def from_parts(cls, re, im) -> "GaussianRational":
        """Build re + im*i from two rationals."""
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator
        return cls(
            GaussianInt(re.numerator * im.denominator, im.numerator * re.denominator), d
        )

    # real / imaginary parts

    def parts(self) -> tuple[Fraction, Fraction]:
        t = self.num * self.den.conjugate()
        n = self.den.norm()
        return Fraction(t.re, n), Fraction(t.im, n)

    @property
    def real(self) -> Fraction:
        return self.parts()[0]

    @property
    def imag(self) -> Fraction:
        return self.parts()[1]

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den.norm())

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.num.conjugate(), self.den.conjugate())

    def is_integral(self) -> bool:
        return self.den == ONE

    # arithmetic

    def __add__(self, other):
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __rsub__(self, other):
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero")
        return GaussianRational(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational._raw(-self.num, self.den)

    def reciprocal(self) -> "GaussianRational":
        if not self.num:
            raise ZeroDivisionError("reciprocal of zero")
        num, den = _normalize_pair(self.den, self.num)
        return GaussianRational._raw(num, den)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = _as_rational(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den == ONE:
            return hash(self.num)
        return hash((self.num, self.den))

    def __complex__(self):
        re, im = self.parts()
        return complex(float(re), float(im))

    def __repr__(self):
        return f"GaussianRational({self.num}, {self.den})"

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_record(self) -> dict[str, str]:
        re, im = self.parts()
        return {
            "re_num": str(re.numerator),
            "re_den": str(re.denominator),
            "im_num": str(im.numerator),
            "im_den": str(im.denominator),
        }

    @classmethod
    def from_record(cls, record: dict) -> "GaussianRational":
        return cls.from_parts(
            Fraction(int(record["re_num"]), int(record["re_den"])),
            Fraction(int(record["im_num"]), int(record["im_den"])),
        )


def _normalize_pair(num: GaussianInt, den: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    for _ in range(4):
        if den.re > 0 and den.im >= 0:
            return num, den
        num = GaussianInt(-num.im, num.re)
        den = GaussianInt(-den.im, den.re)
    raise AssertionError("unreachable")


def _as_rational(value) -> GaussianRational | None:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (GaussianInt, int)):
        return GaussianRational._raw(GaussianInt.coerce(value), ONE)
    if isinstance(value, Fraction):
        return GaussianRational(value.numerator, value.denominator)
    return None


Number = Union[GaussianRational, GaussianInt, int, Fraction]


def nearest_gaussian_integer(z: Number) -> GaussianInt:
    """The unique g in Z[i] with z - g in [-1/2, 1/2)^2."""
    if isinstance(z, GaussianInt):
        return z
    z = GaussianRational.coerce(z)
    t = z.num * z.den.conjugate()
    n = z.den.norm()
    return GaussianInt(_round_half_up(t.re, n), _round_half_up(t.im, n))


# parsing

_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*(i?)\s*")


def parse_gaussian_int(text: str) -> GaussianInt:
    """Parse "3", "-2i", "3+i", "-2+1i", "i", "2 - 3i"."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError("empty Gaussian integer literal")
    re_part = im_part = 0
    pos = 0
    seen = False
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"bad Gaussian integer literal: {text!r}")
        sign, digits, unit = m.groups()
        if not digits and not unit:
            raise ValueError(f"bad Gaussian integer literal: {text!r}")
        if seen and not sign:
            raise ValueError(f"bad Gaussian integer literal: {text!r}")
        value = int(digits) if digits else 1
        if sign == "-":
            value = -value
        if unit:
            im_part += value
        else:
            re_part += value
        seen = True
        pos = m.end()
    return GaussianInt(re_part, im_part)


def parse_gaussian_rational(text: str) -> GaussianRational:
    """Parse "(p)/(q)", "p/q" or a bare Gaussian integer."""
    s = text.strip()
    depth = 0
    split = None
    for idx, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if split is not None:
                raise ValueError(f"bad Gaussian rational literal: {text!r}")
            split = idx
    if split is None:
        return GaussianRational(parse_gaussian_int(s), ONE)
    return GaussianRational(parse_gaussian_int(s[:split]), parse_gaussian_int(s[split + 1 :]))
