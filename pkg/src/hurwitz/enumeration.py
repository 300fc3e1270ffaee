"""Lattice annuli, full-word families crossing a denominator threshold, and measure sums.

Fullness along a search is tracked on a small automaton: the prototype set of
u.b depends only on the prototype set of u and on b, so each distinct
prototype set becomes a state and transitions are memoized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .errors import DomainError
from .gaussian import GaussianInt
from .geometry.area import hoeffding_halfwidth
from .geometry.regions import (
    Region,
    classify,
    prototype_set,
    prototype_step,
    prototype_step_uncached,
)
from .hcf import PartialQuotientSeq, format_word, qpair

__all__ = [
    "AnnulusSpec",
    "GammaSpec",
    "GammaResult",
    "MeasureEstimate",
    "count_lattice_annulus",
    "count_lattice_annulus_bruteforce",
    "alphabet",
    "enumerate_gamma",
    "recount_gamma_dfs",
    "gamma_suffix_count",
    "suffix_bound_holds",
    "measure_sum_bounded_words",
    "PrototypeAutomaton",
]


# lattice annuli


@dataclass(frozen=True)
class AnnulusSpec:
    r: Fraction

    def __post_init__(self):
        r = Fraction(self.r)
        if not 0 < r < 1:
            raise DomainError("annulus needs 0 < r < 1")
        object.__setattr__(self, "r", r)

    @property
    def bounds_sq(self) -> tuple[Fraction, Fraction]:
        return 1 / (self.r * self.r), 4 / (self.r * self.r)


def _ceil_sqrt(x: Fraction) -> int:
    """Least m >= 0 with m^2 >= x."""
    if x <= 0:
        return 0
    c = math.ceil(x)
    m = math.isqrt(c)
    return m if m * m >= c else m + 1


def count_lattice_annulus(spec: AnnulusSpec | Fraction | float | str) -> int:
    """#{b : 1/r <= |b| <= 2/r, Im b >= 1}, by exact row counting."""
    if not isinstance(spec, AnnulusSpec):
        spec = AnnulusSpec(Fraction(spec))
    lo, hi = spec.bounds_sq
    total = 0
    for im in range(1, math.isqrt(math.floor(hi)) + 1):
        top = hi - im * im
        if top < 0:
            break
        m_hi = math.isqrt(math.floor(top))
        m_lo = _ceil_sqrt(lo - im * im)
        if m_lo > m_hi:
            continue
        total += 2 * (m_hi - m_lo + 1) - (1 if m_lo == 0 else 0)
    return total


def count_lattice_annulus_bruteforce(r) -> int:
    """Reference count over the bounding box (slow; for testing)."""
    spec = AnnulusSpec(Fraction(r))
    lo, hi = spec.bounds_sq
    R = math.isqrt(math.floor(hi)) + 1
    return sum(1 for re in range(-R, R + 1) for im in range(1, R + 1) if lo <= re * re + im * im <= hi)


# full-word families


@dataclass(frozen=True)
class GammaSpec:
    """Bounds compared on squares: |a|^2 <= M^2 for letters, Q^2 against |q|^2."""

    M_sq: Fraction
    Q_sq: Fraction

    @classmethod
    def from_bounds(cls, M, Q) -> "GammaSpec":
        M, Q = Fraction(M), Fraction(Q)
        return cls(M * M, Q * Q)

    def __post_init__(self):
        object.__setattr__(self, "M_sq", Fraction(self.M_sq))
        object.__setattr__(self, "Q_sq", Fraction(self.Q_sq))
        if self.M_sq < 2:
            raise DomainError("M must be at least sqrt(2)")
        if self.Q_sq <= 1:
            raise DomainError("Q must exceed 1")

    @property
    def M(self) -> float:
        return math.sqrt(self.M_sq)

    @property
    def Q(self) -> float:
        return math.sqrt(self.Q_sq)


def alphabet(M_sq) -> list[GaussianInt]:
    """I_M = {a : 2 <= |a|^2 <= M^2}, ordered by (Re, Im)."""
    M_sq = Fraction(M_sq)
    R = math.isqrt(math.floor(M_sq))
    return [
        GaussianInt(re, im)
        for re in range(-R, R + 1)
        for im in range(-R, R + 1)
        if 2 <= re * re + im * im <= M_sq
    ]


class PrototypeAutomaton:
    """States are distinct prototype sets; transitions are memoized."""

    def __init__(self, step=prototype_step):
        self._step = step
        self.regions: list[Region] = []
        self._ids: dict = {}
        self._trans: dict[tuple[int, GaussianInt], int] = {}
        self._tags: list[str] = []

    def state(self, region: Region) -> int:
        key = region.key
        sid = self._ids.get(key)
        if sid is None:
            sid = len(self.regions)
            self._ids[key] = sid
            self.regions.append(region)
            self._tags.append(classify(region).tag)
        return sid

    def step(self, sid: int, b: GaussianInt) -> int:
        nxt = self._trans.get((sid, b))
        if nxt is None:
            nxt = self.state(self._step(self.regions[sid], b))
            self._trans[(sid, b)] = nxt
        return nxt

    def tag(self, sid: int) -> str:
        return self._tags[sid]

    def __len__(self):
        return len(self.regions)


@dataclass
class GammaResult:
    spec: GammaSpec
    words: list[PartialQuotientSeq] = field(default_factory=list)
    q_norms: list[int] = field(default_factory=list)
    complete: bool = True
    nodes: int = 0
    states: int = 0

    def __len__(self):
        return len(self.words)

    def records(self):
        for w, n in zip(self.words, self.q_norms):
            yield {"word": format_word(w), "q_norm_sq": n, "class": "full"}


def _norm(re: int, im: int) -> int:
    return re * re + im * im


def enumerate_gamma(
    spec: GammaSpec,
    limit: int | None = None,
    root=(),
    budget: int = 5_000_000,
    automaton: PrototypeAutomaton | None = None,
) -> GammaResult:
    """Breadth-first search for the full words u over I_M with |q(u-)| < Q <= |q(u)|.

    With a nonempty ``root`` w, only words w.b (b nonempty) are explored and
    the suffixes b are returned. Irregular branches are pruned, since every
    extension of an irregular word is irregular.
    """
    root = PartialQuotientSeq(root)
    auto = automaton or PrototypeAutomaton()
    letters = alphabet(spec.M_sq)
    result = GammaResult(spec)
    q0 = qpair(root)
    start = auto.state(prototype_set(root))
    if auto.tag(start) == "irregular" or _norm(q0.q.re, q0.q.im) >= spec.Q_sq:
        result.states = len(auto)
        return result
    # node: (suffix letters, q, q_minus as int pairs, state)
    frontier = [((), (q0.q.re, q0.q.im), (q0.q_minus.re, q0.q_minus.im), start)]
    Q_sq = spec.Q_sq
    while frontier:
        nxt = []
        for suffix, (qr, qi), (mr, mi), sid in frontier:
            result.nodes += 1
            if result.nodes > budget:
                result.complete = False
                result.states = len(auto)
                return result
            for a in letters:
                s2 = auto.step(sid, a)
                tag = auto.tag(s2)
                if tag == "irregular":
                    continue
                nr = a.re * qr - a.im * qi + mr
                ni = a.re * qi + a.im * qr + mi
                n = nr * nr + ni * ni
                word = suffix + (a,)
                if n >= Q_sq:
                    if tag == "full":
                        result.words.append(PartialQuotientSeq(word))
                        result.q_norms.append(n)
                        if limit is not None and len(result.words) >= limit:
                            result.complete = False
                            result.states = len(auto)
                            return result
                    continue
                nxt.append((word, (nr, ni), (qr, qi), s2))
        frontier = nxt
    result.states = len(auto)
    return result


def recount_gamma_dfs(spec: GammaSpec, root=()) -> set[PartialQuotientSeq]:
    """Independent depth-first recount with its own (unshared) transition cache."""
    root = PartialQuotientSeq(root)
    auto = PrototypeAutomaton(step=prototype_step_uncached)
    letters = alphabet(spec.M_sq)
    out: set[PartialQuotientSeq] = set()
    q0 = qpair(root)
    start = auto.state(prototype_set(root))
    if auto.tag(start) == "irregular" or q0.q.norm() >= spec.Q_sq:
        return out
    stack = [((), q0.q, q0.q_minus, start)]
    while stack:
        suffix, q, qm, sid = stack.pop()
        for a in reversed(letters):
            s2 = auto.step(sid, a)
            if auto.tag(s2) == "irregular":
                continue
            nq = a * q + qm
            word = suffix + (a,)
            if nq.norm() >= spec.Q_sq:
                if auto.tag(s2) == "full":
                    out.add(PartialQuotientSeq(word))
                continue
            stack.append((word, nq, q, s2))
    return out


def gamma_suffix_count(w, spec: GammaSpec, budget: int = 5_000_000) -> tuple[int, bool]:
    """(#{b nonempty : w.b in Gamma_M(Q)}, complete flag); w = () counts Gamma_M(Q)."""
    res = enumerate_gamma(spec, root=w, budget=budget)
    return len(res), res.complete


def suffix_bound_holds(w, spec: GammaSpec, suffix_count: int, gamma_count: int) -> tuple[bool, str]:
    """Check #Gamma^w <= (M+1)^(24M) |q(w)|^(-4+2/M) #Gamma in log space."""
    with mpmath.workdps(50):
        M = mpmath.sqrt(mpmath.mpf(spec.M_sq.numerator) / spec.M_sq.denominator)
        qn = qpair(PartialQuotientSeq(w)).q.norm()
        if suffix_count == 0:
            return True, "lhs = 0"
        if gamma_count == 0:
            return False, "lhs > 0 but #Gamma = 0"
        log_rhs = 24 * M * mpmath.log(M + 1) + (-4 + 2 / M) * mpmath.log(qn) / 2 + mpmath.log(gamma_count)
        log_lhs = mpmath.log(suffix_count)
        return bool(log_lhs <= log_rhs), f"log lhs = {mpmath.nstr(log_lhs, 6)}, log rhs = {mpmath.nstr(log_rhs, 6)}"


# measure sums by point sampling


@dataclass(frozen=True)
class MeasureEstimate:
    M_sq: Fraction
    n: int
    estimate: float
    ci_lo: float
    ci_hi: float
    samples: int
    dropped: int

    def to_record(self) -> dict:
        return {
            "M": math.sqrt(self.M_sq),
            "n": self.n,
            "estimate": self.estimate,
            "ci_lo": self.ci_lo,
            "ci_hi": self.ci_hi,
            "samples": self.samples,
            "dropped": self.dropped,
        }


_SAMPLE_BITS = 24


def _level1_bounded(a: np.ndarray, b: np.ndarray, L: int, M_sq: Fraction) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized exact first quotient for z = (a + ib)/L; returns (bounded, valid)."""
    N = a * a + b * b
    valid = N != 0
    Ns = np.where(valid, N, 1)
    re = np.floor_divide(2 * L * a + Ns, 2 * Ns)
    im = np.floor_divide(-2 * L * b + Ns, 2 * Ns)
    norm = re * re + im * im
    bounded = norm * M_sq.denominator <= M_sq.numerator
    return bounded & valid, valid


def _bounded_exact(a: int, b: int, L: int, n: int, M_sq: Fraction) -> bool | None:
    """All of the first n quotients of (a + ib)/L bounded by M? None if the expansion stops early."""
    A, B, C = a, b, L
    for _ in range(n):
        N = A * A + B * B
        if N == 0:
            return None
        qr = (2 * C * A + N) // (2 * N)
        qi = (-2 * C * B + N) // (2 * N)
        if (qr * qr + qi * qi) * M_sq.denominator > M_sq.numerator:
            return False
        A, B, C = C * A - qr * N, -C * B - qi * N, N
        g = math.gcd(math.gcd(A, B), C)
        if g > 1:
            A, B, C = A // g, B // g, C // g
    return True


def measure_sum_bounded_words(M, n: int, samples: int, seed: int = 0, confidence: float = 0.99) -> MeasureEstimate:
    """Estimate the measure of points of D whose first n quotients all satisfy |a_k| <= M.

    Points are dyadic, so every quotient is computed exactly; points whose
    expansion ends before n steps (a null set) are dropped and redrawn.
    """
    M_sq = Fraction(M) ** 2
    if n < 1:
        raise DomainError("n must be at least 1")
    if samples < 1:
        raise DomainError("samples must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    half = 1 << _SAMPLE_BITS
    L = 2 * half
    hits = valid_total = dropped = 0
    while valid_total < samples:
        need = samples - valid_total
        x = rng.integers(0, 2 * half, size=need, dtype=np.int64) - half
        y = rng.integers(0, 2 * half, size=need, dtype=np.int64) - half
        if n == 1:
            bounded, valid = _level1_bounded(x, y, L, M_sq)
            hits += int(np.count_nonzero(bounded))
            nv = int(np.count_nonzero(valid))
            valid_total += nv
            dropped += need - nv
        else:
            for a, b in zip(x.tolist(), y.tolist()):
                r = _bounded_exact(a, b, L, n, M_sq)
                if r is None:
                    dropped += 1
                    continue
                valid_total += 1
                hits += r
    est = hits / valid_total
    hw = hoeffding_halfwidth(valid_total, 1.0, confidence)
    return MeasureEstimate(M_sq, n, est, max(0.0, est - hw), min(1.0, est + hw), valid_total, dropped)


def gamma_trend(M, Qs, budget: int = 5_000_000) -> list[dict]:
    """Observed #Gamma_M(Q) against Q^(4 - 2/M), reported only."""
    rows = []
    auto = PrototypeAutomaton()
    for Q in Qs:
        spec = GammaSpec.from_bounds(M, Q)
        res = enumerate_gamma(spec, budget=budget, automaton=auto)
        ref = float(Q) ** (4 - 2 / float(M))
        rows.append({"M": float(M), "Q": float(Q), "count": len(res), "Q_pow": ref, "ratio": len(res) / ref, "complete": res.complete})
    return rows


__all__.append("gamma_trend")
