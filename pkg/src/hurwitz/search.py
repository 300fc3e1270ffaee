"""Searching Gaussian-rational approximants p/q with |z - p/q| <= psi(|q|).

Candidates come from three families: convergents of z, the v_k
constructions seeded from certified prefixes of z, and (for modest limits)
every denominator q up to the norm limit paired with its best numerator
p = [q z]. Membership is decided on rigorous enclosures; candidates that
cannot be decided are kept and flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .enclosures import DEFAULT_MAX_BITS, ComplexBox, Interval, RefinableComplex
from .errors import DomainError, InsufficientPrecision, Undecidable
from .gaussian import GaussianInt, GaussianRational, nearest_gaussian_integer
from .geometry.regions import classify, prototype_set
from .hcf import HcfExpansion, PartialQuotientSeq, dd, evaluate, hcf_expand_stream, make_vk

__all__ = ["PsiSpec", "Candidate", "distance_interval", "search_approx"]


@dataclass(frozen=True)
class PsiSpec:
    """psi(x) = c * x^(-lam) with rational c > 0 and lam >= 0."""

    c: Fraction = Fraction(1)
    lam: Fraction = Fraction(2)

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.c <= 0 or self.lam < 0:
            raise DomainError("psi needs c > 0 and lambda >= 0")

    @property
    def lower_order(self) -> Fraction:
        return self.lam

    def compare_sq(self, dist_sq: Fraction, q_norm: int) -> int:
        """Sign of dist^2 - psi(|q|)^2, decided exactly.

        With lam = a/b: dist^2 <= c^2 N(q)^(-lam)  <=>  (dist^2/c^2)^b N(q)^a <= 1.
        """
        a, b = self.lam.numerator, self.lam.denominator
        lhs = (dist_sq / (self.c * self.c)) ** b * Fraction(q_norm) ** a
        return (lhs > 1) - (lhs < 1)

    def __str__(self):
        return f"{self.c}*x^(-{self.lam})"


def distance_interval(z: RefinableComplex, approx, bits: int = 256) -> tuple[Interval, Interval]:
    """Rigorous enclosures of |z - approx|^2 and |z - approx|."""
    approx = GaussianRational.coerce(approx)
    diff = z.enclosure(bits) - ComplexBox.point(approx)
    sq = diff.norm()
    return sq, sq.sqrt(bits)


@dataclass
class Candidate:
    approx: GaussianRational
    q: GaussianInt
    source: str
    dist_lo: float = math.nan
    dist_hi: float = math.nan
    status: str = "undecided"  # hit | miss | undecided
    dd: int | None = None

    def to_record(self) -> dict:
        return {
            "approx": str(self.approx),
            "q_norm_sq": self.q.norm(),
            "source": self.source,
            "dist_lo": f"{self.dist_lo:.6e}",
            "dist_hi": f"{self.dist_hi:.6e}",
            "status": self.status,
            "dd": self.dd,
        }


def _decide(z: RefinableComplex, cand: Candidate, psi: PsiSpec, max_bits: int) -> None:
    bits = 64
    while True:
        sq, dist = distance_interval(z, cand.approx, bits)
        cand.dist_lo, cand.dist_hi = float(dist.lo), float(dist.hi)
        n = cand.q.norm()
        if psi.compare_sq(sq.hi, n) <= 0:
            cand.status = "hit"
            return
        if psi.compare_sq(sq.lo, n) > 0:
            cand.status = "miss"
            return
        if bits >= max_bits:
            cand.status = "undecided"
            return
        bits = min(2 * bits, max_bits)


def _lattice_candidates(z: RefinableComplex, psi: PsiSpec, q_norm_limit: int) -> list[GaussianRational]:
    """Best numerator for every q up to the limit, prefiltered in floating point."""
    zc = z.approx(80)
    R = math.isqrt(q_norm_limit)
    re, im = np.meshgrid(np.arange(-R, R + 1), np.arange(0, R + 1), indexing="ij")
    # q up to units: one representative per associate class (Re > 0, Im >= 0)
    mask = (re > 0) & (im >= 0) & (re * re + im * im <= q_norm_limit)
    qs = re[mask] + 1j * im[mask]
    prod = qs * zc
    p = np.floor(prod.real + 0.5) + 1j * np.floor(prod.imag + 0.5)
    dist = np.abs(zc - p / qs)
    bound = float(psi.c) * np.abs(qs) ** (-float(psi.lam))
    keep = dist <= bound * (1 + 1e-6) + 1e-12
    out = []
    for qv in qs[keep]:
        q = GaussianInt(int(qv.real), int(qv.imag))
        # exact numerator from a tight enclosure
        box = z.enclosure(128) * ComplexBox.point(q)
        mid = GaussianRational.from_parts((box.re.lo + box.re.hi) / 2, (box.im.lo + box.im.hi) / 2)
        out.append(GaussianRational(nearest_gaussian_integer(mid), q))
    return out


def search_approx(
    z: RefinableComplex,
    psi: PsiSpec,
    q_norm_limit: int,
    max_bits: int = DEFAULT_MAX_BITS,
    prefix_len: int = 30,
    lattice: bool | None = None,
    extra=(),
) -> tuple[list[Candidate], HcfExpansion]:
    """Candidates with N(q) <= q_norm_limit, each decided against psi, sorted by N(q)."""
    if q_norm_limit < 1:
        raise DomainError("q_norm_limit must be positive")
    expansion = hcf_expand_stream(z, prefix_len, max_bits=max_bits)
    prefix = expansion.quotients[: expansion.certified_prefix_len]
    shift = expansion.shift
    seen: dict[GaussianRational, Candidate] = {}

    def add(value: GaussianRational, source: str):
        value = GaussianRational.coerce(value)
        if value.den.norm() > q_norm_limit or value in seen:
            return
        seen[value] = Candidate(value, value.den, source)

    for n in range(1, len(prefix) + 1):
        add(evaluate(prefix[:n]) + shift, "convergent")
    for m in range(1, len(prefix) + 1):
        a = PartialQuotientSeq(prefix[:m])
        try:
            full = classify(prototype_set(a)).tag == "full"
        except Exception:  # noqa: BLE001 - geometry failures only skip the seed
            full = False
        if not full:
            continue
        k = 1
        while True:
            value = evaluate(a + make_vk(k)) + shift
            if value.den.norm() > q_norm_limit:
                break
            add(value, f"construction(m={m},k={k})")
            k += 1
    if lattice is None:
        lattice = q_norm_limit <= 200_000
    if lattice:
        for value in _lattice_candidates(z, psi, q_norm_limit):
            add(value, "lattice")
    for value in extra:
        add(GaussianRational.coerce(value), "given")

    out = []
    for cand in seen.values():
        _decide(z, cand, psi, max_bits)
        try:
            cand.dd = dd(expansion, cand.approx - shift)
        except (InsufficientPrecision, DomainError, Undecidable):
            cand.dd = None
        out.append(cand)
    out.sort(key=lambda c: (c.q.norm(), str(c.approx)))
    return out, expansion
