"""Exact cell sampling of an arrangement of generalized circles in the closed unit square.

The square [-1/2, 1/2]^2 is cut by finitely many lines and circles. A
vertical decomposition gives one sample point in every face, every edge
piece and every vertex; coordinates live in Q or Q(sqrt d), so every sign is
decided exactly. Each locus then yields three bitmasks (samples where f < 0,
f = 0, f > 0) and any region built from sign conditions is the AND of such
masks. Emptiness, equality, redundancy and "has interior" become integer
bit operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from ..surd import QuadSurd
from .loci import HALF, GenCircle

__all__ = ["Arrangement", "SamplePoint", "BOX_EDGES"]

BOX_EDGES = (
    GenCircle.vertical(-HALF),
    GenCircle.vertical(HALF),
    GenCircle.horizontal(-HALF),
    GenCircle.horizontal(HALF),
)


@dataclass(frozen=True)
class SamplePoint:
    x: QuadSurd
    y: QuadSurd
    kind: str  # face | edge | vertex


def _q(x) -> QuadSurd:
    return QuadSurd.coerce(x)


def _between(lo: QuadSurd, hi: QuadSurd) -> Fraction:
    """A rational strictly between lo < hi."""
    bits = 32
    while True:
        _, lo_up = lo.bounds(bits)
        hi_down, _ = hi.bounds(bits)
        if lo_up < hi_down:
            mid = (lo_up + hi_down) / 2
            # prefer a short rational in the gap
            den = 1
            while True:
                cand = Fraction(round(mid * den), den)
                if lo_up < cand < hi_down:
                    return cand
                den *= 2
        bits *= 2


def _cmp(a: QuadSurd, b: QuadSurd) -> int:
    return a.compare(b)


def _sorted_unique(values: list[QuadSurd]) -> list[QuadSurd]:
    out: list[QuadSurd] = []
    for v in sorted(values, key=cmp_to_key(_cmp)):
        if not out or out[-1].compare(v) != 0:
            out.append(v)
    return out


def _solve_quadratic(a2, a1, a0) -> list[QuadSurd]:
    """Real roots of a2 t^2 + a1 t + a0 = 0 (a2 != 0) as exact surds."""
    disc = a1 * a1 - 4 * a2 * a0
    if disc < 0:
        return []
    if disc == 0:
        return [_q(-a1 / (2 * a2))]
    base = -a1 / (2 * a2)
    step = 1 / (2 * a2)
    return [QuadSurd(base, -step, disc), QuadSurd(base, step, disc)]


def _line_circle(line: GenCircle, circ: GenCircle) -> list[tuple[QuadSurd, QuadSurd]]:
    """Intersections of a line B x + C y + D = 0 with a locus f = 0 (circle or line)."""
    B, C, D = Fraction(line.B), Fraction(line.C), Fraction(line.D)
    A1, B1, C1, D1 = (Fraction(v) for v in (circ.A, circ.B, circ.C, circ.D))
    if C != 0:
        m, k = -B / C, -D / C
        a2 = A1 * (1 + m * m)
        a1 = 2 * A1 * m * k + B1 + C1 * m
        a0 = A1 * k * k + C1 * k + D1
        if a2 == 0:
            if a1 == 0:
                return []
            xs = [_q(-a0 / a1)]
        else:
            xs = _solve_quadratic(a2, a1, a0)
        return [(x, x * m + k) for x in xs]
    x0 = -D / B
    a2 = A1
    a1 = C1
    a0 = A1 * x0 * x0 + B1 * x0 + D1
    if a2 == 0:
        if a1 == 0:
            return []
        ys = [_q(-a0 / a1)]
    else:
        ys = _solve_quadratic(a2, a1, a0)
    return [(_q(x0), y) for y in ys]


def intersections(l1: GenCircle, l2: GenCircle) -> list[tuple[QuadSurd, QuadSurd]]:
    if l1 == l2:
        return []
    if l1.is_line:
        return _line_circle(l1, l2)
    if l2.is_line:
        return _line_circle(l2, l1)
    # radical line of two circles
    rad = (0, l1.B * l2.A - l2.B * l1.A, l1.C * l2.A - l2.C * l1.A, l1.D * l2.A - l2.D * l1.A)
    if rad[1] == 0 and rad[2] == 0:
        return []
    radical, _ = GenCircle.from_coefficients(*rad)
    return _line_circle(radical, l1)


def _in_box(x: QuadSurd, y: QuadSurd) -> bool:
    return x.compare(-HALF) >= 0 and x.compare(HALF) <= 0 and y.compare(-HALF) >= 0 and y.compare(HALF) <= 0


def _crossings_at(locus: GenCircle, x: Fraction) -> list[QuadSurd]:
    """y-values where a non-vertical locus meets the vertical line at rational x."""
    if locus.is_line:
        if locus.C == 0:
            return []
        return [_q(-(locus.B * x + locus.D) / Fraction(locus.C))]
    A = Fraction(locus.A)
    return _solve_quadratic(A, Fraction(locus.C), A * x * x + locus.B * x + locus.D)


class Arrangement:
    """Sample points of all cells cut out by ``loci`` (plus the square's edges)."""

    def __init__(self, loci):
        all_loci = set(loci) | set(BOX_EDGES)
        self.loci: tuple[GenCircle, ...] = tuple(sorted(all_loci))
        self.samples: list[SamplePoint] = []
        self._build()
        self._index = {locus: i for i, locus in enumerate(self.loci)}
        self._masks = [self._locus_masks(locus) for locus in self.loci]
        self.all_mask = (1 << len(self.samples)) - 1
        self.face_mask = 0
        for i, s in enumerate(self.samples):
            if s.kind == "face":
                self.face_mask |= 1 << i

    def _build(self):
        loci = self.loci
        vertices: list[tuple[QuadSurd, QuadSurd]] = []
        for i in range(len(loci)):
            for j in range(i + 1, len(loci)):
                for x, y in intersections(loci[i], loci[j]):
                    if _in_box(x, y):
                        vertices.append((x, y))
        events = [_q(-HALF), _q(HALF)]
        events += [x for x, _ in vertices]
        for locus in loci:
            if locus.is_vertical:
                events.append(_q(-Fraction(locus.D, locus.B)))
            elif not locus.is_line:
                cx = locus.center.real
                r = QuadSurd.sqrt(locus.radius_sq)
                events += [r * -1 + cx, r + cx]
        events = [e for e in events if e.compare(-HALF) >= 0 and e.compare(HALF) <= 0]
        events = _sorted_unique(events)

        samples: list[SamplePoint] = []
        for x, y in vertices:
            samples.append(SamplePoint(x, y, "vertex"))
        non_vertical = [l for l in loci if not l.is_vertical]
        for left, right in zip(events, events[1:]):
            xs = _between(left, right)
            ys = []
            for locus in non_vertical:
                ys += _crossings_at(locus, xs)
            ys = [y for y in ys if y.compare(-HALF) >= 0 and y.compare(HALF) <= 0]
            ys = _sorted_unique(ys)
            xq = _q(xs)
            for y in ys:
                samples.append(SamplePoint(xq, y, "edge"))
            for lo, hi in zip(ys, ys[1:]):
                samples.append(SamplePoint(xq, _q(_between(lo, hi)), "face"))
        # pieces of vertical lines
        for locus in loci:
            if not locus.is_vertical:
                continue
            x0 = -Fraction(locus.D, locus.B)
            if not -HALF <= x0 <= HALF:
                continue
            ys = []
            for other in non_vertical:
                ys += _crossings_at(other, x0)
            ys = _sorted_unique([y for y in ys if y.compare(-HALF) >= 0 and y.compare(HALF) <= 0])
            for lo, hi in zip(ys, ys[1:]):
                samples.append(SamplePoint(_q(x0), _q(_between(lo, hi)), "edge"))
        self.samples = samples

    def _locus_masks(self, locus: GenCircle) -> tuple[int, int, int]:
        neg = zero = pos = 0
        for i, s in enumerate(self.samples):
            v = locus.value(s.x, s.y)
            sg = v.sign() if isinstance(v, QuadSurd) else (v > 0) - (v < 0)
            bit = 1 << i
            if sg < 0:
                neg |= bit
            elif sg > 0:
                pos |= bit
            else:
                zero |= bit
        if self.samples and any(
            s.kind == "face" and (zero >> i) & 1 for i, s in enumerate(self.samples)
        ):
            raise AssertionError("face sample lies on a locus")
        return neg, zero, pos

    def has(self, locus: GenCircle) -> bool:
        return locus in self._index

    def sign_masks(self, locus: GenCircle) -> tuple[int, int, int]:
        return self._masks[self._index[locus]]

    def mask(self, locus: GenCircle, allowed) -> int:
        neg, zero, pos = self.sign_masks(locus)
        m = 0
        if -1 in allowed:
            m |= neg
        if 0 in allowed:
            m |= zero
        if 1 in allowed:
            m |= pos
        return m

    def attained_signs(self, locus: GenCircle, region_mask: int) -> frozenset[int]:
        neg, zero, pos = self.sign_masks(locus)
        out = set()
        if region_mask & neg:
            out.add(-1)
        if region_mask & zero:
            out.add(0)
        if region_mask & pos:
            out.add(1)
        return frozenset(out)
