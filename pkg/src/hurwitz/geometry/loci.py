"""Generalized circles f(x, y) = A(x^2 + y^2) + Bx + Cy + D = 0 with integer coefficients.

A locus is stored as a primitive integer tuple in a fixed orientation
(A > 0, else B > 0, else C > 0), so equal loci compare equal. For circles the
positive side is the outside. Pulling a locus back through a Moebius map
z = (alpha w + beta)/(gamma w + delta) uses the Hermitian form

    f(z) |gamma w + delta|^2 = [conj(w) 1] N^H H N [w 1]^T,   H = [[A, b], [conj(b), D]], b = (B + iC)/2,

so the sign of f is preserved away from the pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..gaussian import GaussianInt, GaussianRational
from ..surd import QuadSurd

__all__ = ["GenCircle", "Matrix2", "square_sign_range"]

Matrix2 = tuple[tuple[GaussianInt, GaussianInt], tuple[GaussianInt, GaussianInt]]

HALF = Fraction(1, 2)
SQUARE_CORNERS = ((-HALF, -HALF), (-HALF, HALF), (HALF, -HALF), (HALF, HALF))


def _primitive(coeffs: tuple[int, int, int, int]) -> tuple[tuple[int, int, int, int], int]:
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    if g == 0:
        raise ValueError("degenerate generalized circle (all coefficients zero)")
    a, b, c, d = (x // g for x in coeffs)
    for lead in (a, b, c):
        if lead:
            sign = 1 if lead > 0 else -1
            break
    else:
        raise ValueError("degenerate generalized circle (constant function)")
    return (sign * a, sign * b, sign * c, sign * d), sign


@dataclass(frozen=True, order=True)
class GenCircle:
    A: int
    B: int
    C: int
    D: int

    @classmethod
    def from_coefficients(cls, A, B, C, D) -> tuple["GenCircle", int]:
        """Canonical locus and the sign (+1/-1) relating the given function to it."""
        fr = [Fraction(v) for v in (A, B, C, D)]
        lcm = 1
        for v in fr:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        ints = tuple(int(v * lcm) for v in fr)
        (a, b, c, d), sign = _primitive(ints)
        return cls(a, b, c, d), sign

    @classmethod
    def circle(cls, center, radius_sq) -> "GenCircle":
        c = GaussianRational.coerce(center)
        cx, cy = c.parts()
        r2 = Fraction(radius_sq)
        if r2 <= 0:
            raise ValueError("radius_sq must be positive")
        return cls.from_coefficients(1, -2 * cx, -2 * cy, cx * cx + cy * cy - r2)[0]

    @classmethod
    def line(cls, a, b, c) -> "GenCircle":
        """The line a x + b y = c."""
        if a == 0 and b == 0:
            raise ValueError("line needs (a, b) != (0, 0)")
        return cls.from_coefficients(0, a, b, -Fraction(c))[0]

    @classmethod
    def vertical(cls, x) -> "GenCircle":
        return cls.line(1, 0, x)

    @classmethod
    def horizontal(cls, y) -> "GenCircle":
        return cls.line(0, 1, y)

    @property
    def is_line(self) -> bool:
        return self.A == 0

    @property
    def is_vertical(self) -> bool:
        return self.A == 0 and self.C == 0

    @property
    def center(self) -> GaussianRational:
        if self.is_line:
            raise ValueError("a line has no center")
        return GaussianRational.from_parts(Fraction(-self.B, 2 * self.A), Fraction(-self.C, 2 * self.A))

    @property
    def radius_sq(self) -> Fraction:
        if self.is_line:
            raise ValueError("a line has no radius")
        return Fraction(self.B * self.B + self.C * self.C - 4 * self.A * self.D, 4 * self.A * self.A)

    def line_form(self) -> tuple[Fraction, Fraction, Fraction]:
        """(a, b, c) with a x + b y = c, for lines."""
        return Fraction(self.B), Fraction(self.C), Fraction(-self.D)

    # evaluation

    def value(self, x, y):
        """f(x, y) for rationals or QuadSurd coordinates (same field)."""
        return self.A * (x * x + y * y) + self.B * x + self.C * y + self.D

    def sign_at(self, z) -> int:
        if isinstance(z, tuple):
            x, y = z
        else:
            x, y = GaussianRational.coerce(z).parts()
        v = self.value(x, y)
        if isinstance(v, QuadSurd):
            return v.sign()
        return (v > 0) - (v < 0)

    # transformations

    def pullback(self, n: Matrix2) -> tuple["GenCircle", int]:
        """Locus of {w : f(N w) = 0} for the Moebius action of N, plus the sign factor.

        sign(f(N w)) = factor * sign(g(w)) wherever N w is finite, g the returned locus.
        """
        (al, be), (ga, de) = n
        # H scaled by 2 so entries are Gaussian integers
        h00 = GaussianInt(2 * self.A)
        h01 = GaussianInt(self.B, self.C)
        h10 = GaussianInt(self.B, -self.C)
        h11 = GaussianInt(2 * self.D)
        # N^H H N
        m00 = al.conjugate() * (h00 * al + h01 * ga) + ga.conjugate() * (h10 * al + h11 * ga)
        m01 = al.conjugate() * (h00 * be + h01 * de) + ga.conjugate() * (h10 * be + h11 * de)
        m11 = be.conjugate() * (h00 * be + h01 * de) + de.conjugate() * (h10 * be + h11 * de)
        assert m00.im == 0 and m11.im == 0 and m00.re % 2 == 0 and m11.re % 2 == 0
        return GenCircle.from_coefficients(m00.re // 2, m01.re, m01.im, m11.re // 2)

    # geometry against the closed unit square [-1/2, 1/2]^2

    def meets_closed_square(self) -> bool:
        lo, hi = square_sign_range(self)
        return lo <= 0 <= hi

    def describe(self) -> str:
        if self.is_line:
            a, b, c = self.line_form()
            if b == 0:
                return f"Re z = {_fmt(c / a)}"
            if a == 0:
                return f"Im z = {_fmt(c / b)}"
            return f"{_fmt(a)}x + {_fmt(b)}y = {_fmt(c)}"
        c = self.center
        if not c:
            return f"|z| = {_fmt_radius(self.radius_sq)}"
        return f"|z + {_fmt_center(-c)}| = {_fmt_radius(self.radius_sq)}" if c.real < 0 or (c.real == 0 and c.imag < 0) \
            else f"|z - {_fmt_center(c)}| = {_fmt_radius(self.radius_sq)}"

    def disk_name(self) -> str:
        return f"B({_fmt_center(self.center)},{_fmt_radius(self.radius_sq)})"

    def to_record(self) -> dict:
        if self.is_line:
            a, b, c = self.line_form()
            return {"kind": "line", "params": {"a": str(a), "b": str(b), "c": str(c)}}
        re, im = self.center.parts()
        return {
            "kind": "circle",
            "params": {"center_re": str(re), "center_im": str(im), "radius_sq": str(self.radius_sq)},
        }


def square_sign_range(locus: GenCircle) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of f over the closed square."""
    if locus.is_line:
        vals = [locus.value(x, y) for x, y in SQUARE_CORNERS]
        return min(vals), max(vals)
    # f = A |z - c|^2 - A r^2 with A > 0
    c = locus.center
    cx, cy = c.parts()
    nx = min(max(cx, -HALF), HALF)
    ny = min(max(cy, -HALF), HALF)
    return locus.value(nx, ny), max(locus.value(x, y) for x, y in SQUARE_CORNERS)


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_center(c: GaussianRational) -> str:
    re, im = c.parts()
    if re.denominator == 1 and im.denominator == 1:
        return str(GaussianInt(int(re), int(im)))
    parts = []
    if re:
        parts.append(_fmt(re))
    if im:
        sign = "-" if im < 0 else ("+" if parts else "")
        mag = abs(im)
        parts.append(f"{sign}{'' if mag == 1 else _fmt(mag)}i")
    return "".join(parts) or "0"


def _fmt_radius(r2: Fraction) -> str:
    n, d = r2.numerator, r2.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return _fmt(Fraction(rn, rd))
    return f"sqrt({_fmt(r2)})"
