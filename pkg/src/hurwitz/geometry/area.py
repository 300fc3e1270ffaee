"""Areas of prototype sets and cylinders.

Canonical prototype classes have closed forms in sqrt(3) and pi. Anything
else is estimated by Monte Carlo on dyadic sample points whose membership is
decided exactly; the reported half-width is a 99% Hoeffding bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from ..errors import DomainError
from ..gaussian import GaussianInt
from .loci import HALF
from .regions import DOMAIN_EDGES, Region, classify, prototype_set

__all__ = [
    "AreaResult",
    "CLASS_AREAS",
    "region_area",
    "cylinder_area",
    "level1_cylinder_area",
    "level1_tail_area",
    "hoeffding_halfwidth",
]

_DPS = 40

# (closed form, rational part, sqrt(3) coefficient, pi coefficient)
CLASS_AREAS = {
    "full": ("1", Fraction(1), Fraction(0), Fraction(0)),
    "D": ("1", Fraction(1), Fraction(0), Fraction(0)),
    "G1": ("5/4 - sqrt(3)/4 - pi/6", Fraction(5, 4), Fraction(-1, 4), Fraction(-1, 6)),
    "G2": ("3/2 - sqrt(3)/4 - pi/6", Fraction(3, 2), Fraction(-1, 4), Fraction(-1, 6)),
    "G3": ("3/4 + sqrt(3)/4 - pi/12", Fraction(3, 4), Fraction(1, 4), Fraction(-1, 12)),
    "irregular": ("0", Fraction(0), Fraction(0), Fraction(0)),
}


@dataclass(frozen=True)
class AreaResult:
    value: float
    error: float  # rigorous bound (exact), quadrature estimate, or 99% half-width (montecarlo)
    method: str
    closed_form: str | None = None
    samples: int = 0

    @property
    def lo(self) -> float:
        return self.value - self.error

    @property
    def hi(self) -> float:
        return self.value + self.error

    def to_record(self) -> dict:
        rec = {"area": self.value, "error": self.error, "method": self.method}
        if self.closed_form is not None:
            rec["closed_form"] = self.closed_form
        if self.samples:
            rec["samples"] = self.samples
        return rec


def hoeffding_halfwidth(n: int, span: float = 1.0, confidence: float = 0.99) -> float:
    """Two-sided Hoeffding half-width for the mean of n samples in an interval of length span."""
    return span * math.sqrt(math.log(2 / (1 - confidence)) / (2 * n))


def _closed_form_value(key: str) -> mpmath.mpf:
    _, a, b, c = CLASS_AREAS[key]
    with mpmath.workdps(_DPS):
        return mpmath.mpf(a.numerator) / a.denominator + mpmath.sqrt(3) * b.numerator / b.denominator + mpmath.pi * c.numerator / c.denominator


def _class_key(region: Region) -> str:
    cls = classify(region)
    if cls.tag == "full":
        return "full"
    if cls.tag == "irregular":
        return "irregular"
    return "D" if cls.k == 0 else f"G{cls.k}"


def region_area(region: Region, method: str = "exact", samples: int = 100_000, seed: int = 0) -> AreaResult:
    if method == "exact":
        if not region.in_domain:
            raise DomainError("exact area is available for prototype sets only; use montecarlo")
        key = _class_key(region)
        return AreaResult(float(_closed_form_value(key)), 0.0, "exact", CLASS_AREAS[key][0])
    if method == "montecarlo":
        return _montecarlo(region, samples, seed)
    raise ValueError(f"unknown area method {method!r}")


# Monte Carlo with exact membership

_BITS = 24


def _dyadic_points(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.integers(0, 1 << _BITS, size=n, dtype=np.int64), rng.integers(0, 1 << _BITS, size=n, dtype=np.int64)


def _lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _membership(constraints, punctures, x0, wx, y0, wy, u, v) -> np.ndarray:
    """Exact membership of x = x0 + wx*u/2^B, y = y0 + wy*v/2^B for all sample pairs."""
    den = _lcm(x0.denominator, wx.denominator, y0.denominator, wy.denominator) << _BITS
    # scaled integer coordinates X = x*den, Y = y*den
    ax, bx = int(x0 * den), int(wx * den) >> _BITS
    ay, by = int(y0 * den), int(wy * den) >> _BITS
    big = max(abs(ax), abs(bx) << _BITS, abs(ay), abs(by) << _BITS).bit_length()
    coeff_bits = max(
        (max(abs(c.locus.A), abs(c.locus.B), abs(c.locus.C), abs(c.locus.D)).bit_length() for c in constraints),
        default=0,
    )
    dtype = np.int64 if 2 * big + coeff_bits + 4 < 63 else object
    X = ax + bx * u.astype(dtype)
    Y = ay + by * v.astype(dtype)
    ok = np.ones(len(u), dtype=bool)
    for c in constraints:
        loc = c.locus
        f = loc.A * (X * X + Y * Y) + loc.B * den * X + loc.C * den * Y + loc.D * den * den
        s = np.sign(f).astype(np.int64)
        allowed = np.zeros(len(u), dtype=bool)
        for sg in c.signs:
            allowed |= s == sg
        ok &= allowed
    for p in punctures:
        sx, sy = (c * den for c in p.parts())
        if sx.denominator == 1 and sy.denominator == 1:
            ok &= ~((X == int(sx)) & (Y == int(sy)))
    return ok


def _montecarlo(region: Region, n: int, seed: int) -> AreaResult:
    if region.empty:
        return AreaResult(0.0, 0.0, "montecarlo", None, n)
    if region.in_domain:
        box = (-HALF, HALF, -HALF, HALF)
        constraints = DOMAIN_EDGES + region.constraints
    else:
        if region.bbox is None:
            raise DomainError("montecarlo on a free region needs a bounding box")
        box = tuple(Fraction(b) for b in region.bbox)
        constraints = region.constraints
    x0, x1, y0, y1 = box
    u, v = _dyadic_points(n, seed)
    ok = _membership(constraints, region.punctures, x0, x1 - x0, y0, y1 - y0, u, v)
    area_box = float((x1 - x0) * (y1 - y0))
    frac = float(np.count_nonzero(ok)) / n
    return AreaResult(frac * area_box, hoeffding_halfwidth(n, area_box), "montecarlo", None, n)


# cylinder areas: lambda(C(u)) = integral over D_u of |q(u-) w + q(u)|^-4


def _jacobian_integral(q: GaussianInt, qm: GaussianInt) -> tuple[mpmath.mpf, mpmath.mpf]:
    a, b, c, d = qm.re, qm.im, q.re, q.im

    def f(x, y):
        re = a * x - b * y + c
        im = a * y + b * x + d
        return (re * re + im * im) ** -2

    with mpmath.workdps(20):
        val, err = mpmath.quad(f, [-0.5, 0.5], [-0.5, 0.5], error=True, maxdegree=8)
    return val, err


def cylinder_area(seq, method: str = "exact", samples: int = 100_000, seed: int = 0) -> AreaResult:
    """Lebesgue measure of the cylinder of a word.

    exact: quadrature of the Jacobian over D (full words only).
    montecarlo: the Jacobian averaged over exact members of D_u.
    """
    from ..hcf import PartialQuotientSeq, qpair

    word = PartialQuotientSeq.parse(seq) if isinstance(seq, str) else PartialQuotientSeq(seq)
    if not word:
        return AreaResult(1.0, 0.0, "exact", "1")
    pair = qpair(word)
    proto = prototype_set(word)
    if method == "exact":
        cls = classify(proto)
        if cls.tag == "irregular":
            return AreaResult(0.0, 0.0, "exact", "0")
        if cls.tag != "full":
            raise DomainError("exact cylinder area needs a full word; use montecarlo")
        val, err = _jacobian_integral(pair.q, pair.q_minus)
        return AreaResult(float(val), float(err) + 1e-15, "quadrature")
    if method != "montecarlo":
        raise ValueError(f"unknown area method {method!r}")
    if proto.empty:
        return AreaResult(0.0, 0.0, "montecarlo", None, samples)
    u, v = _dyadic_points(samples, seed)
    ok = _membership(DOMAIN_EDGES + proto.constraints, proto.punctures, -HALF, Fraction(1), -HALF, Fraction(1), u, v)
    x = u.astype(float) / (1 << _BITS) - 0.5
    y = v.astype(float) / (1 << _BITS) - 0.5
    q, qm = complex(pair.q.re, pair.q.im), complex(pair.q_minus.re, pair.q_minus.im)
    jac = np.abs(qm * (x + 1j * y) + q) ** -4.0
    vals = np.where(ok, jac, 0.0)
    # |q- w + q| >= |q| - |q-|/sqrt2 on D
    span = (abs(q) - abs(qm) / math.sqrt(2)) ** -4
    return AreaResult(float(vals.mean()), hoeffding_halfwidth(samples, span), "montecarlo", None, samples)


def level1_cylinder_area(b) -> AreaResult:
    return cylinder_area([GaussianInt.coerce(b)])


@lru_cache(maxsize=32)
def level1_tail_area(M) -> AreaResult:
    """Measure of the union of level-1 cylinders C(b) with |b| > M (M >= 2*sqrt2, so all are full).

    Cylinders with max(|Re b|, |Im b|) > N = ceil(M) together form the inverse
    image of the outside of the square of half-side N + 1/2, whose area is
    (pi/2 + 1)/(N + 1/2)^2 exactly; the remaining ones are integrated.
    """
    M = Fraction(M)
    if M * M < 8:
        raise DomainError("level1_tail_area needs M >= 2*sqrt(2)")
    N = math.ceil(M)
    s = mpmath.mpf(2 * N + 1) / 2
    with mpmath.workdps(_DPS):
        total = (mpmath.pi / 2 + 1) / (s * s)
    err = mpmath.mpf(0)
    for re in range(-N, N + 1):
        for im in range(-N, N + 1):
            if re * re + im * im <= M * M:
                continue
            val, e = _jacobian_integral(GaussianInt(re, im), GaussianInt(1))
            total += val
            err += e
    return AreaResult(float(total), float(err) + 1e-15, "quadrature")
