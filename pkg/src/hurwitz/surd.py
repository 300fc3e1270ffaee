"""Exact quadratic surds a + b*sqrt(d) and complex numbers over Q(sqrt d).

Signs are decided exactly by squaring, never by floating point. The helpers
:func:`sign2` and :func:`sign3` decide the sign of sums of one or two
square-root terms with rational coefficients, which is all the geometry and
the growth bounds need.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering

from .gaussian import GaussianInt, GaussianRational

__all__ = ["QuadSurd", "QuadComplex", "sign2", "sign3", "sqrt_bounds", "squarefree_part"]


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def sign2(p, q, m) -> int:
    """Sign of p + q*sqrt(m) for rationals p, q and m >= 0."""
    sp, sq = _sgn(p), _sgn(q) if m else 0
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with q^2 m
    return sp * _sgn(p * p - q * q * m)


def sign3(a, b, s, c, t) -> int:
    """Sign of a + b*sqrt(s) + c*sqrt(t) for rationals with s, t >= 0."""
    # u = b sqrt(s) + c sqrt(t)
    su = _sign_pair(b, s, c, t)
    sa = _sgn(a)
    if su == 0:
        return sa
    if sa == 0 or sa == su:
        return su
    # a and u have opposite signs: compare a^2 with u^2 = b^2 s + c^2 t + 2bc sqrt(st)
    diff = sign2(Fraction(a) ** 2 - Fraction(b) ** 2 * s - Fraction(c) ** 2 * t, -2 * Fraction(b) * c, Fraction(s) * t)
    return sa * diff


def _sign_pair(b, s, c, t) -> int:
    x = _sgn(b) if s else 0
    y = _sgn(c) if t else 0
    if x == 0:
        return y
    if y == 0 or x == y:
        return x
    return x * _sgn(Fraction(b) ** 2 * s - Fraction(c) ** 2 * t)


def sqrt_bounds(x, bits: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(x) <= hi with hi - lo <= 2^-bits."""
    x = Fraction(x)
    scale = 1 << bits
    lo = math.isqrt(x.numerator * scale * scale // x.denominator)
    if Fraction(lo, scale) ** 2 == x:
        return Fraction(lo, scale), Fraction(lo, scale)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


def squarefree_part(n: int) -> tuple[int, int]:
    """(k, d) with n = k^2 d and d squarefree, for n >= 1 (trial division)."""
    k, d = 1, 1
    f = 2
    m = n
    while f * f <= m:
        while m % (f * f) == 0:
            m //= f * f
            k *= f
        if m % f == 0:
            m //= f
            d *= f
        f += 1
    return k, d * m


def _reduce_radicand(d) -> tuple[Fraction, int]:
    """Write sqrt(d) = c*sqrt(e) with rational c and squarefree integer e."""
    d = Fraction(d)
    if d < 0:
        raise ValueError("negative radicand")
    if d == 0:
        return Fraction(0), 1
    # sqrt(n/m) = sqrt(n m)/m
    k, e = squarefree_part(d.numerator * d.denominator)
    return Fraction(k, d.denominator), e


@total_ordering
class QuadSurd:
    """a + b*sqrt(d) with rational a, b and squarefree integer d >= 2 (d = 1 means rational)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 1):
        a, b = Fraction(a), Fraction(b)
        if b:
            c, e = _reduce_radicand(d)
            b *= c
            d = e
            if d == 1:
                a, b = a + b, Fraction(0)
        if not b:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadSurd is immutable")

    @classmethod
    def sqrt(cls, x) -> "QuadSurd":
        return cls(0, 1, x) if Fraction(x) else cls(0)

    @classmethod
    def coerce(cls, x) -> "QuadSurd":
        if isinstance(x, QuadSurd):
            return x
        return cls(Fraction(x))

    def is_rational(self) -> bool:
        return self.b == 0

    def _field(self, other: "QuadSurd") -> int:
        if self.d == 1:
            return other.d
        if other.d == 1 or other.d == self.d:
            return self.d
        raise ValueError(f"mixed quadratic fields sqrt({self.d}) and sqrt({other.d})")

    def __add__(self, other):
        other = QuadSurd.coerce(other)
        return QuadSurd(self.a + other.a, self.b + other.b, self._field(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-QuadSurd.coerce(other))

    def __rsub__(self, other):
        return QuadSurd.coerce(other) - self

    def __mul__(self, other):
        other = QuadSurd.coerce(other)
        d = self._field(other)
        return QuadSurd(self.a * other.a + self.b * other.b * d, self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b, self.d)

    def field_norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def reciprocal(self) -> "QuadSurd":
        n = self.field_norm()
        if n == 0:
            raise ZeroDivisionError("QuadSurd reciprocal of zero")
        return QuadSurd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        return self * QuadSurd.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return QuadSurd.coerce(other) * self.reciprocal()

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        result, base = QuadSurd(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        return sign2(self.a, self.b, self.d)

    def compare(self, other) -> int:
        """Sign of self - other; works across different fields."""
        other = QuadSurd.coerce(other)
        if self.d == other.d or self.d == 1 or other.d == 1:
            return (self - other).sign()
        return sign3(self.a - other.a, self.b, self.d, -other.b, other.d)

    def __eq__(self, other):
        if not isinstance(other, (QuadSurd, int, Fraction)):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other):
        return self.compare(other) < 0

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def floor(self) -> int:
        lo, hi = self.bounds(64)
        guess = math.floor(lo)
        while self.compare(guess + 1) >= 0:
            guess += 1
        while self.compare(guess) < 0:
            guess -= 1
        return guess

    def bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        if self.b == 0:
            return self.a, self.a
        lo, hi = sqrt_bounds(self.d, bits + max(0, abs(self.b).numerator.bit_length()))
        x, y = self.a + self.b * lo, self.a + self.b * hi
        return (x, y) if x <= y else (y, x)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        if self.b == 0:
            return f"QuadSurd({self.a})"
        return f"QuadSurd({self.a} + {self.b}*sqrt({self.d}))"


class QuadComplex:
    """re + i*im with re, im in a common field Q(sqrt d)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        re, im = QuadSurd.coerce(re), QuadSurd.coerce(im)
        re._field(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("QuadComplex is immutable")

    @classmethod
    def coerce(cls, x) -> "QuadComplex":
        if isinstance(x, QuadComplex):
            return x
        if isinstance(x, QuadSurd):
            return cls(x)
        z = GaussianRational.coerce(x)
        re, im = z.parts()
        return cls(re, im)

    @property
    def d(self) -> int:
        return self.re.d if self.re.d != 1 else self.im.d

    def to_gaussian_rational(self) -> GaussianRational | None:
        if self.re.is_rational() and self.im.is_rational():
            return GaussianRational.from_parts(self.re.a, self.im.a)
        return None

    def __add__(self, other):
        other = QuadComplex.coerce(other)
        return QuadComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QuadComplex(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QuadComplex.coerce(other))

    def __rsub__(self, other):
        return QuadComplex.coerce(other) - self

    def __mul__(self, other):
        other = QuadComplex.coerce(other)
        return QuadComplex(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def norm(self) -> QuadSurd:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re.sign() == 0 and self.im.sign() == 0

    def reciprocal(self) -> "QuadComplex":
        n = self.norm()
        if n.sign() == 0:
            raise ZeroDivisionError("QuadComplex reciprocal of zero")
        inv = n.reciprocal()
        return QuadComplex(self.re * inv, -(self.im * inv))

    def __truediv__(self, other):
        return self * QuadComplex.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return QuadComplex.coerce(other) * self.reciprocal()

    def nearest(self) -> GaussianInt:
        """[z] with the half-open cell convention: floor(x + 1/2) in each coordinate."""
        half = Fraction(1, 2)
        return GaussianInt((self.re + half).floor(), (self.im + half).floor())

    def __eq__(self, other):
        try:
            other = QuadComplex.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QuadComplex({self.re!r}, {self.im!r})"
