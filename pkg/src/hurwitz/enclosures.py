"""Rigorous rectangular enclosures and refinable complex numbers.

A :class:`RefinableComplex` is known only through boxes of arbitrary
precision. Every arithmetic operation here rounds outward, so the true value
of an expression always lies in the computed box.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import Undecidable
from .gaussian import GaussianInt, GaussianRational
from .surd import QuadComplex, QuadSurd

__all__ = [
    "Interval",
    "ComplexBox",
    "RefinableComplex",
    "Undecidable",
    "certified_nearest",
    "nearest_gaussian_integer_certified",
    "sqrt_interval",
    "parse_oracle",
    "NAMED_ORACLES",
    "DEFAULT_START_BITS",
    "DEFAULT_MAX_BITS",
]

DEFAULT_START_BITS = 64
DEFAULT_MAX_BITS = 4096

HALF = Fraction(1, 2)


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.floor(x * scale), scale)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.ceil(x * scale), scale)


@dataclass(frozen=True, slots=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_interval(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other):
        other = _as_interval(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError("interval reciprocal straddles zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _as_interval(other).reciprocal()

    def round_out(self, bits: int) -> "Interval":
        return Interval(_floor_dyadic(self.lo, bits), _ceil_dyadic(self.hi, bits))

    def sqrt(self, bits: int) -> "Interval":
        if self.lo < 0:
            raise ValueError("square root of an interval with negative part")
        return Interval(sqrt_interval(self.lo, bits).lo, sqrt_interval(self.hi, bits).hi)

    def __repr__(self):
        return f"[{float(self.lo):.6g}, {float(self.hi):.6g}]"


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


def sqrt_interval(x, bits: int) -> Interval:
    """Dyadic interval of width <= 2^-bits containing sqrt(x), for rational x >= 0."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    scale = 1 << (2 * bits)
    n = x.numerator * scale
    lo_int = math.isqrt(n // x.denominator)
    # lo_int <= sqrt(x)*2^bits < lo_int + 1
    lo = Fraction(lo_int, 1 << bits)
    if lo * lo == x:
        return Interval(lo, lo)
    return Interval(lo, Fraction(lo_int + 1, 1 << bits))


@dataclass(frozen=True, slots=True)
class ComplexBox:
    """Axis-parallel rectangle [re_lo, re_hi] x [im_lo, im_hi] with rational corners."""

    re: Interval
    im: Interval

    @classmethod
    def from_bounds(cls, re_lo, re_hi, im_lo, im_hi) -> "ComplexBox":
        return cls(Interval(Fraction(re_lo), Fraction(re_hi)), Interval(Fraction(im_lo), Fraction(im_hi)))

    @classmethod
    def point(cls, z) -> "ComplexBox":
        z = GaussianRational.coerce(z)
        re, im = z.parts()
        return cls(Interval(re, re), Interval(im, im))

    @property
    def re_lo(self) -> Fraction:
        return self.re.lo

    @property
    def re_hi(self) -> Fraction:
        return self.re.hi

    @property
    def im_lo(self) -> Fraction:
        return self.im.lo

    @property
    def im_hi(self) -> Fraction:
        return self.im.hi

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def contains(self, z) -> bool:
        re, im = GaussianRational.coerce(z).parts()
        return self.re.contains(re) and self.im.contains(im)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def is_point(self) -> bool:
        return self.re.is_point() and self.im.is_point()

    def __add__(self, other):
        other = _as_box(other)
        return ComplexBox(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_box(other)
        return ComplexBox(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_box(other) - self

    def __neg__(self):
        return ComplexBox(-self.re, -self.im)

    def __mul__(self, other):
        other = _as_box(other)
        return ComplexBox(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def norm(self) -> Interval:
        return self.re.square() + self.im.square()

    def reciprocal(self) -> "ComplexBox":
        if self.contains_zero():
            raise ZeroDivisionError("box reciprocal contains zero")
        n = self.norm()
        if n.lo == 0:
            # the box touches zero only on a corner of the excluded quadrant
            raise ZeroDivisionError("box reciprocal touches zero")
        inv = n.reciprocal()
        return ComplexBox(self.re * inv, -(self.im * inv))

    def __truediv__(self, other):
        return self * _as_box(other).reciprocal()

    def __rtruediv__(self, other):
        return _as_box(other) * self.reciprocal()

    def round_out(self, bits: int) -> "ComplexBox":
        return ComplexBox(self.re.round_out(bits), self.im.round_out(bits))

    def abs_interval(self, bits: int = 96) -> Interval:
        """Enclosure of |z| over the box."""
        re_min = _closest_to_zero(self.re)
        im_min = _closest_to_zero(self.im)
        re_max = max(abs(self.re.lo), abs(self.re.hi))
        im_max = max(abs(self.im.lo), abs(self.im.hi))
        lo = sqrt_interval(re_min * re_min + im_min * im_min, bits).lo
        hi = sqrt_interval(re_max * re_max + im_max * im_max, bits).hi
        return Interval(lo, hi)

    def __repr__(self):
        return f"ComplexBox(re={self.re!r}, im={self.im!r})"


def _closest_to_zero(iv: Interval) -> Fraction:
    if iv.contains_zero():
        return Fraction(0)
    return min(abs(iv.lo), abs(iv.hi))


def _as_box(x) -> ComplexBox:
    if isinstance(x, ComplexBox):
        return x
    if isinstance(x, Interval):
        return ComplexBox(x, Interval.point(0))
    return ComplexBox.point(x)


def certified_nearest(box: ComplexBox) -> GaussianInt | None:
    """g if the box lies strictly inside the open cell g + D°, else None."""
    gx = math.floor(box.re.lo + HALF)
    gy = math.floor(box.im.lo + HALF)
    if not (box.re.lo > gx - HALF and box.re.hi < gx + HALF):
        return None
    if not (box.im.lo > gy - HALF and box.im.hi < gy + HALF):
        return None
    return GaussianInt(gx, gy)


class RefinableComplex:
    """A complex number available through enclosures of any requested precision.

    ``enclosure(bits)`` returns a box of width at most 2^-bits containing the
    value. The callable supplied at construction is queried with a working
    precision and retried at higher working precision until the width bound
    holds, so it only needs to be sound, not tight.
    """

    def __init__(self, evaluate: Callable[[int], ComplexBox], label: str = "<oracle>", exact=None):
        self._evaluate = evaluate
        self.label = label
        # exact value when known (Gaussian rational or element of Q(i)(sqrt d));
        # expansion code uses it to decide quotients on cell boundaries
        self.exact: GaussianRational | QuadComplex | None = exact

    @classmethod
    def from_rational(cls, z) -> "RefinableComplex":
        z = GaussianRational.coerce(z)
        box = ComplexBox.point(z)
        return cls(lambda bits: box, label=str(z), exact=z)

    @classmethod
    def from_quadratic(cls, z: QuadComplex, label: str | None = None) -> "RefinableComplex":
        rational = z.to_gaussian_rational()
        if rational is not None:
            return cls.from_rational(rational)

        def evaluate(bits: int) -> ComplexBox:
            re_lo, re_hi = z.re.bounds(bits)
            im_lo, im_hi = z.im.bounds(bits)
            return ComplexBox.from_bounds(re_lo, re_hi, im_lo, im_hi)

        return cls(evaluate, label=label or repr(z), exact=z)

    @classmethod
    def from_expression(cls, text: str) -> "RefinableComplex":
        tree = _parse_expression(text)
        try:
            exact = _eval_exact(tree)
        except ValueError:
            # several incompatible square roots: enclosures only
            return cls(lambda bits: _eval_node(tree, bits), label=text)
        return cls.from_quadratic(exact, label=text)

    def enclosure(self, bits: int) -> ComplexBox:
        if bits < 1:
            raise ValueError("precision must be positive")
        target = Fraction(1, 1 << bits)
        work = bits + 8
        for _ in range(12):
            try:
                box = self._evaluate(work)
            except ZeroDivisionError:
                work *= 2
                continue
            if box.width <= target:
                if box.is_point():
                    return box
                return box.round_out(bits + 2)
            work *= 2
        raise Undecidable(f"oracle {self.label} did not reach width 2^-{bits}")

    def approx(self, bits: int = 64) -> complex:
        box = self.enclosure(bits)
        return complex(float((box.re.lo + box.re.hi) / 2), float((box.im.lo + box.im.hi) / 2))

    def map(self, fn: Callable[[ComplexBox], ComplexBox], label: str | None = None) -> "RefinableComplex":
        """Oracle for fn(value), where fn is an enclosure-sound box function."""
        parent = self

        def evaluate(bits: int) -> ComplexBox:
            return fn(parent.enclosure(bits))

        return RefinableComplex(evaluate, label=label or f"f({self.label})")

    def __repr__(self):
        return f"RefinableComplex({self.label!r})"


def nearest_gaussian_integer_certified(
    z: RefinableComplex, max_bits: int = DEFAULT_MAX_BITS, start_bits: int = DEFAULT_START_BITS
) -> GaussianInt:
    """Rigorous [z]: refine until an enclosure sits inside one open cell.

    Raises :class:`Undecidable` if ``max_bits`` is reached first. For oracles
    of exact Gaussian rationals the decision is made on the exact value
    only when the point lies in a cell interior; boundary points remain
    undecidable, as for any other oracle.
    """
    if max_bits < 4:
        raise ValueError("max_bits must be at least 4")
    bits = min(start_bits, max_bits)
    while True:
        box = z.enclosure(bits)
        g = certified_nearest(box)
        if g is not None:
            return g
        if bits >= max_bits:
            raise Undecidable(f"{z.label}: enclosure meets a cell boundary at {bits} bits")
        bits = min(2 * bits, max_bits)


# expression oracles

_ALLOWED_FUNCS = {"sqrt"}


def _parse_expression(text: str) -> ast.AST:
    src = text.strip().replace("^", "**")
    # 7i -> 7*I, bare i -> I; keep identifiers like sqrt intact
    src = re.sub(r"(?<![A-Za-z_])(\d+(?:\.\d*)?|\.\d+)\s*i\b", r"(\1*I)", src)
    src = re.sub(r"(?<![A-Za-z_0-9])i\b", "I", src)
    src = re.sub(r"sqrt\s*(\d+)", r"sqrt(\1)", src)
    tree = ast.parse(src, mode="eval")
    for node in ast.walk(tree):
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_FUNCS:
                raise ValueError(f"unsupported function in {text!r}")
        elif isinstance(node, ast.Name):
            if node.id not in _ALLOWED_FUNCS and node.id != "I":
                raise ValueError(f"unknown name {node.id!r} in {text!r}")
        elif isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)):
                raise ValueError(f"bad literal in {text!r}")
        elif not isinstance(
            node,
            (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult, ast.Div,
             ast.Pow, ast.USub, ast.UAdd, ast.Load),
        ):
            raise ValueError(f"unsupported syntax in {text!r}")
    return tree.body


def _eval_node(node: ast.AST, bits: int) -> ComplexBox:
    if isinstance(node, ast.Constant):
        value = node.value
        if isinstance(value, float):
            value = Fraction(str(value))
        return ComplexBox.point(GaussianRational.coerce(Fraction(value)))
    if isinstance(node, ast.Name):
        return ComplexBox.point(GaussianInt(0, 1))
    if isinstance(node, ast.UnaryOp):
        inner = _eval_node(node.operand, bits)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int) and node.right.value >= 0):
                raise ValueError("only non-negative integer powers are supported")
            base = _eval_node(node.left, bits)
            result = ComplexBox.point(1)
            for _ in range(node.right.value):
                result = result * base
            return result.round_out(bits + 4)
        left = _eval_node(node.left, bits)
        right = _eval_node(node.right, bits)
        if isinstance(node.op, ast.Add):
            out = left + right
        elif isinstance(node.op, ast.Sub):
            out = left - right
        elif isinstance(node.op, ast.Mult):
            out = left * right
        else:
            out = left / right
        return out.round_out(bits + 4)
    if isinstance(node, ast.Call):
        (arg,) = node.args
        inner = _eval_node(arg, bits)
        if not inner.im.is_point() or inner.im.lo != 0:
            raise ValueError("sqrt is only supported for real arguments")
        return ComplexBox(inner.re.sqrt(bits + 4), Interval.point(0))
    raise ValueError(f"cannot evaluate node {ast.dump(node)}")


def _eval_exact(node: ast.AST) -> QuadComplex:
    if isinstance(node, ast.Constant):
        value = node.value
        if isinstance(value, float):
            value = Fraction(str(value))
        return QuadComplex.coerce(Fraction(value))
    if isinstance(node, ast.Name):
        return QuadComplex(0, 1)
    if isinstance(node, ast.UnaryOp):
        inner = _eval_exact(node.operand)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        left = _eval_exact(node.left)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int) and node.right.value >= 0):
                raise ValueError("only non-negative integer powers are supported")
            result = QuadComplex(1)
            for _ in range(node.right.value):
                result = result * left
            return result
        right = _eval_exact(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        return left / right
    if isinstance(node, ast.Call):
        (arg,) = node.args
        inner = _eval_exact(arg)
        value = inner.to_gaussian_rational()
        if value is None or value.imag != 0 or value.real < 0:
            raise ValueError("exact sqrt needs a non-negative rational argument")
        return QuadComplex(QuadSurd.sqrt(value.real))
    raise ValueError(f"cannot evaluate node {ast.dump(node)}")


NAMED_ORACLES = {
    # the irrational point of the introductory example
    "sqrt10-example": "2i/(3-sqrt(10)+7i)",
    "sqrt2-minus-1": "sqrt(2)-1",
    "golden-conjugate": "(sqrt(5)-1)/2",
}


def parse_oracle(spec: str) -> RefinableComplex:
    """Oracle from a built-in name or an arithmetic expression in i and sqrt()."""
    text = NAMED_ORACLES.get(spec, spec)
    if "sqrt" not in text and "." not in text:
        try:
            return RefinableComplex.from_rational(GaussianRational.coerce(text))
        except (ValueError, TypeError):
            pass
    oracle = RefinableComplex.from_expression(text)
    oracle.label = spec
    return oracle

