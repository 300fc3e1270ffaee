"""Regular (real) continued fractions and the prefix property of good approximants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .enclosures import DEFAULT_MAX_BITS, DEFAULT_START_BITS, Interval, RefinableComplex
from .errors import DomainError
from .gaussian import GaussianRational
from .surd import QuadComplex, QuadSurd

__all__ = [
    "RealCFExpansion",
    "PrefixReport",
    "rcf_expand_rational",
    "rcf_expand_stream",
    "rcf_evaluate",
    "rcf_check_prefix_property",
]


@dataclass(frozen=True)
class RealCFExpansion:
    quotients: tuple[int, ...]
    terminated: bool = True

    def __str__(self):
        return "[0;" + ",".join(str(a) for a in self.quotients) + "]"


def rcf_expand_rational(x) -> RealCFExpansion:
    """RCF quotients of a rational 0 < x < 1; the last quotient is >= 2."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise DomainError("RCF expansion needs 0 < x < 1")
    num, den = x.numerator, x.denominator
    quotients = []
    while num:
        a, r = divmod(den, num)
        quotients.append(a)
        den, num = num, r
    return RealCFExpansion(tuple(quotients), True)


def rcf_evaluate(quotients) -> Fraction:
    value = Fraction(0)
    for a in reversed(tuple(quotients)):
        value = 1 / (a + value)
    return value


def _real_exact(x):
    """Exact value of x as Fraction or QuadSurd, if known."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, QuadSurd):
        return x
    if isinstance(x, RefinableComplex):
        x = x.exact
    if isinstance(x, GaussianRational):
        if x.imag != 0:
            raise DomainError("RCF input must be real")
        return x.real
    if isinstance(x, QuadComplex):
        if x.im.sign() != 0:
            raise DomainError("RCF input must be real")
        return x.re if not x.re.is_rational() else x.re.a
    return None


def rcf_expand_stream(x, n: int, max_bits: int = DEFAULT_MAX_BITS) -> RealCFExpansion:
    """Up to n certified RCF quotients of a real x in (0, 1)."""
    exact = _real_exact(x)
    if isinstance(exact, Fraction):
        full = rcf_expand_rational(exact)
        if len(full.quotients) <= n:
            return full
        return RealCFExpansion(full.quotients[:n], False)
    if isinstance(exact, QuadSurd):
        if not (exact.sign() > 0 and exact.compare(1) < 0):
            raise DomainError("RCF expansion needs 0 < x < 1")
        quotients = []
        y = exact
        while len(quotients) < n and y.sign() != 0:
            inv = y.reciprocal()
            a = inv.floor()
            quotients.append(a)
            y = inv - a
        return RealCFExpansion(tuple(quotients), y.sign() == 0)
    return _expand_enclosure(x, n, max_bits)


def _expand_enclosure(x: RefinableComplex, n: int, max_bits: int) -> RealCFExpansion:
    # quotient k+1 = floor(1/G^k(x)) with 1/G^k(x) = -(q_{k-1} x - p_{k-1})/(q_k x - p_k)
    quotients: list[int] = []
    p_prev, q_prev, p, q = 1, 0, 0, 1
    while len(quotients) < n:
        bits = DEFAULT_START_BITS
        a = None
        while True:
            box = x.enclosure(bits)
            xi = box.re
            den = xi * q - p
            if not den.contains_zero():
                val = -(xi * q_prev - p_prev) / den
                lo, hi = math.floor(val.lo), math.floor(val.hi)
                if lo == hi:
                    a = lo
                    break
            if bits >= max_bits:
                break
            bits = min(2 * bits, max_bits)
        if a is None:
            break
        quotients.append(a)
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
    return RealCFExpansion(tuple(quotients), False)


@dataclass(frozen=True)
class PrefixReport:
    precondition_ok: bool
    holds: bool | None
    n: int
    prefix_len: int
    detail: str

    def to_record(self) -> dict:
        return {
            "precondition_ok": self.precondition_ok,
            "holds": self.holds,
            "N": self.n,
            "prefix_len": self.prefix_len,
            "detail": self.detail,
        }


def rcf_check_prefix_property(x, p: int, q: int, max_bits: int = DEFAULT_MAX_BITS) -> PrefixReport:
    """Do the first N-1 RCF quotients of x agree with those of p/q (N = RCF length of p/q)?

    The hypothesis |x - p/q| < 1/q^2 is checked rigorously first; a failed or
    undecided check is reported, not silently accepted.
    """
    if q <= 0:
        return PrefixReport(False, None, 0, 0, "q must be positive")
    target = Fraction(p, q)
    if not 0 < target < 1:
        return PrefixReport(False, None, 0, 0, "p/q must lie in (0, 1)")
    qr = target.denominator
    bound = Fraction(1, qr * qr)
    # the hypothesis is stated for the given q; reducing p/q only shrinks q
    if Fraction(1, q * q) < bound:
        bound = Fraction(1, q * q)
    b = rcf_expand_rational(target).quotients
    n = len(b)
    exact = _real_exact(x)
    if isinstance(exact, Fraction):
        if exact == target:
            return PrefixReport(False, None, n, 0, "x equals p/q")
        if not abs(exact - target) < bound:
            return PrefixReport(False, None, n, 0, "|x - p/q| >= 1/q^2")
        if not 0 < exact < 1:
            return PrefixReport(False, None, n, 0, "x must lie in (0, 1)")
    elif isinstance(exact, QuadSurd):
        if not (exact - target).compare(bound) < 0 or not (target - exact).compare(bound) < 0:
            return PrefixReport(False, None, n, 0, "|x - p/q| >= 1/q^2")
    else:
        decided = False
        bits = DEFAULT_START_BITS
        while True:
            xi: Interval = x.enclosure(bits).re
            diff = xi - target
            worst = max(abs(diff.lo), abs(diff.hi))
            best = Fraction(0) if diff.contains_zero() else min(abs(diff.lo), abs(diff.hi))
            if worst < bound:
                decided = True
                break
            if best >= bound:
                return PrefixReport(False, None, n, 0, "|x - p/q| >= 1/q^2")
            if bits >= max_bits:
                break
            bits = min(2 * bits, max_bits)
        if not decided:
            return PrefixReport(False, None, n, 0, "could not certify |x - p/q| < 1/q^2")

    need = n - 1
    a = rcf_expand_stream(x, max(need, 1), max_bits=max_bits).quotients
    if len(a) < need:
        return PrefixReport(True, None, n, len(a), f"only {len(a)} quotients of x certified, need {need}")
    match = 0
    while match < need and a[match] == b[match]:
        match += 1
    holds = match == need
    return PrefixReport(True, holds, n, match, "prefix agrees" if holds else f"first difference at position {match + 1}")
