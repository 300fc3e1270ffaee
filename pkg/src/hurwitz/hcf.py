"""Hurwitz continued fractions: expansion, Q-pairs, Moebius maps and discrepancy.

Conventions: D = [-1/2, 1/2)^2, [z] is the Gaussian integer g with z - g in D,
and T(z) = 1/z - [1/z]. A word u = (a_1, ..., a_n) has the Q-pair matrix

    [[p(u), p(u-)], [q(u), q(u-)]] = [[0, 1], [1, 0]] * prod [[a_k, 1], [1, 0]]

so that p(u)/q(u) = [0; a_1, ..., a_n] and T_u(w) = (p(u-) w + p(u)) / (q(u-) w + q(u)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .enclosures import (
    DEFAULT_MAX_BITS,
    ComplexBox,
    RefinableComplex,
    nearest_gaussian_integer_certified,
)
from .errors import DomainError, InsufficientPrecision, Undecidable
from .gaussian import (
    GaussianInt,
    GaussianRational,
    format_gaussian,
    nearest_gaussian_integer,
    parse_gaussian_int,
)
from .surd import QuadComplex

__all__ = [
    "PartialQuotientSeq",
    "QPair",
    "HcfExpansion",
    "DiscrepancyInstance",
    "hcf_expand_rational",
    "hcf_expand_stream",
    "qpair",
    "qpair_recursive",
    "evaluate",
    "mobius_apply",
    "dd",
    "make_vk",
    "make_vk_tilde",
    "stk_matrix_power",
    "four_matrix_product",
    "build_discrepancy_instance",
    "observed_period",
    "STK_M",
]


class PartialQuotientSeq(tuple):
    """Finite word over I = {a in Z[i] : norm(a) >= 2}."""

    def __new__(cls, items: Iterable = ()):
        values = tuple(GaussianInt.coerce(a) for a in items)
        for a in values:
            if a.norm() < 2:
                raise DomainError(f"partial quotient {a} has norm < 2")
        return super().__new__(cls, values)

    @classmethod
    def parse(cls, text: str) -> "PartialQuotientSeq":
        body = text.strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        body = body.strip()
        if not body:
            return cls(())
        return cls(parse_gaussian_int(part) for part in body.split(","))

    def __add__(self, other):
        return PartialQuotientSeq(tuple(self) + tuple(PartialQuotientSeq(other)))

    def __getitem__(self, index):
        result = super().__getitem__(index)
        if isinstance(index, slice):
            return PartialQuotientSeq(result)
        return result

    def minus(self) -> "PartialQuotientSeq":
        """u- : the word with its last item deleted."""
        return self[:-1]

    def reversed(self) -> "PartialQuotientSeq":
        return PartialQuotientSeq(tuple(self)[::-1])

    def __str__(self):
        return "[" + ",".join(str(a) for a in self) + "]"

    def __repr__(self):
        return f"PartialQuotientSeq({self})"


@dataclass(frozen=True)
class QPair:
    p: GaussianInt
    q: GaussianInt
    p_minus: GaussianInt
    q_minus: GaussianInt

    @classmethod
    def identity(cls) -> "QPair":
        # matrix [[0, 1], [1, 0]]: p(empty) = 0, q(empty) = 1
        return cls(GaussianInt(0), GaussianInt(1), GaussianInt(1), GaussianInt(0))

    def push(self, a: GaussianInt) -> "QPair":
        """Right-multiply by [[a, 1], [1, 0]]."""
        return QPair(a * self.p + self.p_minus, a * self.q + self.q_minus, self.p, self.q)

    def det(self) -> GaussianInt:
        return self.q * self.p_minus - self.q_minus * self.p

    def matrix(self) -> tuple[tuple[GaussianInt, GaussianInt], tuple[GaussianInt, GaussianInt]]:
        return ((self.p, self.p_minus), (self.q, self.q_minus))

    def value(self) -> GaussianRational:
        return GaussianRational(self.p, self.q)

    def to_record(self) -> dict:
        return {"p": str(self.p), "q": str(self.q), "p_minus": str(self.p_minus), "q_minus": str(self.q_minus)}


def _matmul(x, y):
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _as_word(seq) -> PartialQuotientSeq:
    if isinstance(seq, HcfExpansion):
        return seq.quotients
    if isinstance(seq, PartialQuotientSeq):
        return seq
    return PartialQuotientSeq(seq)


def qpair(seq) -> QPair:
    """Q-pair by the matrix product."""
    m = ((GaussianInt(0), GaussianInt(1)), (GaussianInt(1), GaussianInt(0)))
    one, zero = GaussianInt(1), GaussianInt(0)
    for a in _as_word(seq):
        m = _matmul(m, ((a, one), (one, zero)))
    (p, pm), (q, qm) = m
    return QPair(p, q, pm, qm)


def qpair_recursive(seq) -> QPair:
    """Q-pair by the three-term recursion p_n = a_n p_{n-1} + p_{n-2}."""
    state = QPair.identity()
    for a in _as_word(seq):
        state = state.push(a)
    return state


def evaluate(seq) -> GaussianRational:
    """[0; a_1, ..., a_n] as a canonical Gaussian rational."""
    pair = qpair(seq)
    if pair.q == 0:
        raise DomainError(f"{_as_word(seq)} has q = 0; not a valid HCF word")
    return GaussianRational(pair.p, pair.q)


def mobius_apply(seq, w):
    """T_u(w) = (p(u-) w + p(u)) / (q(u-) w + q(u)) for exact values or boxes."""
    pair = qpair(seq)
    if isinstance(w, ComplexBox):
        num = w * ComplexBox.point(pair.p_minus) + ComplexBox.point(pair.p)
        den = w * ComplexBox.point(pair.q_minus) + ComplexBox.point(pair.q)
        if den.contains_zero():
            raise DomainError("denominator box contains 0")
        return num / den
    if isinstance(w, QuadComplex):
        den = w * QuadComplex.coerce(pair.q_minus) + QuadComplex.coerce(pair.q)
        if den.is_zero():
            raise DomainError("T_u has a pole at this point")
        return (w * QuadComplex.coerce(pair.p_minus) + QuadComplex.coerce(pair.p)) / den
    w = GaussianRational.coerce(w)
    den = w * pair.q_minus + pair.q
    if not den:
        raise DomainError("T_u has a pole at this point")
    return (w * pair.p_minus + pair.p) / den


@dataclass(frozen=True)
class HcfExpansion:
    quotients: PartialQuotientSeq
    terminated: bool
    certified_prefix_len: int
    # integer part removed before expanding, i.e. the input was shift + [0; quotients]
    shift: GaussianInt = field(default_factory=lambda: GaussianInt(0))

    def to_record(self) -> dict:
        return {
            "quotients": str(self.quotients),
            "terminated": self.terminated,
            "certified_prefix_len": self.certified_prefix_len,
        }

    def __str__(self):
        return f"{self.quotients}" + (" (terminated)" if self.terminated else "")


def hcf_expand_rational(z) -> HcfExpansion:
    """Exact HCF expansion of z - [z]; always terminates."""
    z = GaussianRational.coerce(z)
    shift = nearest_gaussian_integer(z)
    w = z - shift
    num, den = w.num, w.den
    quotients = []
    # w = num/den; 1/w = den/num; next w = (den - a num)/num
    while num:
        a, r = den.divmod_nearest(num)
        quotients.append(a)
        num, den = r, num
    word = PartialQuotientSeq(quotients)
    return HcfExpansion(word, True, len(word), shift)


def _expand_quadratic(z: QuadComplex, n: int) -> HcfExpansion:
    shift = z.nearest()
    w = z - shift
    quotients = []
    terminated = False
    while len(quotients) < n:
        if w.is_zero():
            terminated = True
            break
        inv = w.reciprocal()
        a = inv.nearest()
        quotients.append(a)
        w = inv - a
    if not terminated and w.is_zero():
        terminated = True
    word = PartialQuotientSeq(quotients)
    return HcfExpansion(word, terminated, len(word), shift)


def hcf_expand_stream(z: RefinableComplex, n: int, max_bits: int = DEFAULT_MAX_BITS) -> HcfExpansion:
    """First n HCF quotients of a refinable z, never guessing.

    Oracles that carry an exact value (Gaussian rational or quadratic) are
    expanded exactly, which also settles quotients whose reciprocal lands on
    a cell edge. Otherwise quotient k+1 is [(q- z - p-)/(p - q z)] with the
    Q-pair of the certified prefix, certified from enclosures; an Undecidable
    step truncates the result.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(z.exact, GaussianRational):
        full = hcf_expand_rational(z.exact)
        if len(full.quotients) <= n:
            return full
        return HcfExpansion(full.quotients[:n], False, n, full.shift)
    if isinstance(z.exact, QuadComplex):
        return _expand_quadratic(z.exact, n)

    try:
        shift = nearest_gaussian_integer_certified(z, max_bits=max_bits)
    except Undecidable:
        return HcfExpansion(PartialQuotientSeq(), False, 0)
    reduced = z.map(lambda box: box - ComplexBox.point(shift), label=f"{z.label}-[z]")
    pair = QPair.identity()
    quotients: list[GaussianInt] = []
    while len(quotients) < n:
        current = pair

        def inv_remainder(box: ComplexBox, pair=current) -> ComplexBox:
            num = box * ComplexBox.point(pair.q_minus) - ComplexBox.point(pair.p_minus)
            den = ComplexBox.point(pair.p) - box * ComplexBox.point(pair.q)
            return num / den

        probe = reduced.enclosure(64)
        den_probe = ComplexBox.point(current.p) - probe * ComplexBox.point(current.q)
        if den_probe.is_point() and den_probe.contains_zero():
            return HcfExpansion(PartialQuotientSeq(quotients), True, len(quotients), shift)
        oracle = reduced.map(inv_remainder, label=f"1/T^{len(quotients)}({z.label})")
        try:
            a = nearest_gaussian_integer_certified(oracle, max_bits=max_bits)
        except Undecidable:
            break
        if a.norm() < 2:
            break
        quotients.append(a)
        pair = pair.push(a)
    return HcfExpansion(PartialQuotientSeq(quotients), False, len(quotients), shift)


def dd(z_quotients, approx) -> int:
    """Number of positions 1..N where the quotients of z and approx differ.

    N is the HCF length of approx. z may be a word (taken as a certified
    prefix) or an :class:`HcfExpansion`.
    """
    target = hcf_expand_rational(approx).quotients
    n = len(target)
    if isinstance(z_quotients, HcfExpansion):
        if z_quotients.terminated and len(z_quotients.quotients) <= n:
            raise DomainError(
                "z is a Gaussian rational whose expansion is not longer than that of the approximant"
            )
        available = z_quotients.quotients[: z_quotients.certified_prefix_len]
    else:
        available = _as_word(z_quotients)
    if len(available) < n:
        raise InsufficientPrecision(f"need {n} certified quotients of z, have {len(available)}")
    return sum(1 for a, b in zip(available[:n], target) if a != b)


_REP_V = tuple(GaussianInt(*c) for c in ((-2, 0), (0, 2), (-2, 0), (0, -2)))
_REP_VT = tuple(GaussianInt(*c) for c in ((-2, 1), (0, 2), (-2, 1), (0, 2)))


def make_vk(k: int) -> PartialQuotientSeq:
    if k < 0:
        raise ValueError("k must be >= 0")
    return PartialQuotientSeq((GaussianInt(3), GaussianInt(0, -2)) + _REP_V * k)


def make_vk_tilde(k: int) -> PartialQuotientSeq:
    if k < 0:
        raise ValueError("k must be >= 0")
    return PartialQuotientSeq((GaussianInt(3, 1), GaussianInt(0, 2)) + _REP_VT * k)


STK_M = (
    (GaussianInt(17, 4), GaussianInt(-4, 8)),
    (GaussianInt(-8), GaussianInt(1, -4)),
)


def four_matrix_product():
    """[[-2,1],[1,0]] [[2i,1],[1,0]] [[-2,1],[1,0]] [[-2i,1],[1,0]]."""
    one, zero = GaussianInt(1), GaussianInt(0)
    m = ((one, zero), (zero, one))
    for a in _REP_V:
        m = _matmul(m, ((a, one), (one, zero)))
    return m


def stk_matrix_power(k: int) -> QPair:
    """[[s_k, s_k-], [t_k, t_k-]] = [[1, 0], [-2i, 1]] * M^k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    one, zero = GaussianInt(1), GaussianInt(0)
    m = ((one, zero), (GaussianInt(0, -2), one))
    for _ in range(k):
        m = _matmul(m, STK_M)
    (s, sm), (t, tm) = m
    return QPair(s, t, sm, tm)


@dataclass(frozen=True)
class DiscrepancyInstance:
    word: PartialQuotientSeq
    approx: GaussianRational
    expected_dd: int
    approx_word: PartialQuotientSeq

    def to_record(self) -> dict:
        return {
            "word": str(self.word),
            "approx": str(self.approx),
            "approx_word": str(self.approx_word),
            "expected_dd": self.expected_dd,
        }


def build_discrepancy_instance(a, k: int, b) -> DiscrepancyInstance:
    """Words a.v_k.b whose cylinder points z satisfy dd(z, p/q) = 3k+2, p/q = [0; a v_k]."""
    from .geometry import classify, prototype_set

    a = _as_word(a)
    b = GaussianInt.coerce(b)
    if not a:
        raise DomainError("a must be a nonempty full word")
    if k < 1:
        raise DomainError("k must be >= 1")
    if b.norm() < 8 or b.im < 1:
        raise DomainError("b needs |b| >= 2*sqrt(2) and Im b >= 1")
    if classify(prototype_set(a)).tag != "full":
        raise DomainError(f"{a} is not full")
    vk = make_vk(k)
    return DiscrepancyInstance(
        word=a + vk + (b,),
        approx=evaluate(a + vk),
        expected_dd=3 * k + 2,
        approx_word=a + make_vk_tilde(k),
    )


def observed_period(quotients: Sequence, min_repeats: int = 2) -> tuple[int, int] | None:
    """(preperiod, period) seen in a finite prefix; empirical, not a proof."""
    items = list(quotients)
    n = len(items)
    for period in range(1, n // min_repeats + 1):
        for start in range(0, n - min_repeats * period + 1):
            tail = items[start:]
            if all(tail[i] == tail[i % period] for i in range(len(tail))):
                return start, period
    return None


def format_word(seq) -> str:
    return "[" + ",".join(format_gaussian(a.re, a.im) for a in _as_word(seq)) + "]"
