"""Verification suites: exact identities, worked-example replays and seeded property checks.

Every check carries an anchor naming the fact it exercises. Reports are
deterministic for a given seed; wall-clock timings are only attached when
asked for.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .enclosures import parse_oracle
from .enumeration import (
    GammaSpec,
    PrototypeAutomaton,
    count_lattice_annulus,
    count_lattice_annulus_bruteforce,
    enumerate_gamma,
    gamma_suffix_count,
    gamma_trend,
    measure_sum_bounded_words,
    recount_gamma_dfs,
    suffix_bound_holds,
)
from .errors import DomainError, GeometryInconsistency
from .gaussian import GaussianInt, GaussianRational, gaussian_gcd, nearest_gaussian_integer
from .geometry.area import cylinder_area, level1_tail_area, region_area
from .geometry.regions import (
    canonical_text,
    class_template,
    classify,
    cylinder_region,
    prototype_set,
    region_contains,
)
from .hcf import (
    PartialQuotientSeq,
    build_discrepancy_instance,
    dd,
    evaluate,
    four_matrix_product,
    hcf_expand_rational,
    hcf_expand_stream,
    make_vk,
    make_vk_tilde,
    mobius_apply,
    qpair,
    qpair_recursive,
    stk_matrix_power,
)
from .rcf import rcf_check_prefix_property, rcf_expand_rational
from .search import distance_interval
from .surd import QuadSurd

__all__ = ["Check", "VerificationReport", "SUITES", "ANCHORS", "run_suite"]

# anchor -> short description of the mathematical fact
ANCHORS = {
    "nearest-integer": "rounding into the half-open unit cell",
    "gaussian-gcd": "canonical Gaussian rationals",
    "box-soundness": "enclosure arithmetic",
    "hcf-expansion": "HCF expansion and round trip",
    "intro-example": "the introductory z, p/q example",
    "rcf-expansion": "regular continued fractions",
    "rcf-prefix": "prefix property of good rational approximants",
    "qpair": "Q-pair matrix product and recursion",
    "mirror-formula": "q(u-)/q(u) equals the reversed word's value",
    "determinant": "Q-pair determinant (-1)^n",
    "convergent-bound": "|z - p_n/q_n| <= |q_n|^-2",
    "strict-growth": "|q_n| strictly increasing",
    "phi-growth": "golden-ratio growth of |q_n|",
    "last-quotient-bounds": "(|a_n|-1)|q(u-)| < |q(u)| < (|a_n|+1)|q(u-)|",
    "concatenation-bounds": "|q(a)q(b)|/5 < |q(ab)| < 3|q(a)q(b)|",
    "mobius-concatenation": "T_u([0;v]) = [0;uv]",
    "cylinder-calculus": "prototype sets of concatenations",
    "prototype-replay-minus2i": "prototype sets along (-2i,-2,2i,-2,-2i)",
    "prototype-replay-2i": "prototype sets along (2i,-2+i,2i,-2+i,2i)",
    "level1-fullness": "a level-1 cylinder is full iff |b| >= 2 sqrt 2",
    "thirteen-classes": "regular interiors are D or one of the twelve rotated templates",
    "regular-full-closure": "prefix, extension, suffix and concatenation rules for regular/full words",
    "cylinder-size": "diameter and measure of regular cylinders",
    "vk-prototypes": "prototype sets of v_k and v~_k",
    "vk-values": "[0;v_k] = [0;v~_k]",
    "vk-matrix": "the four-matrix product and the s_k/t_k identities",
    "discrepancy-construction": "dd(z, p/q) = 3k+2 for the v_k construction",
    "annulus-count": "lattice points in half annuli",
    "measure-sum": "measure of cylinders with bounded quotients",
    "gamma-family": "full words crossing |q| = Q",
    "suffix-family": "suffix counts against the family size",
    "canonical-areas": "areas of the canonical prototype classes",
}


@dataclass
class Check:
    id: str
    anchor: str
    status: str  # pass | fail | skipped
    detail: str = ""
    runtime_ms: float | None = None

    def to_record(self, suite: str) -> dict:
        rec = {"suite": suite, "id": self.id, "anchor": self.anchor, "status": self.status, "detail": self.detail}
        if self.runtime_ms is not None:
            rec["runtime_ms"] = round(self.runtime_ms, 1)
        return rec


@dataclass
class VerificationReport:
    suite: str
    seed: int
    checks: list[Check] = field(default_factory=list)
    runtime_ms: float | None = None

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def coverage(self) -> dict[str, int]:
        cov = {a: 0 for a in ANCHORS}
        for c in self.checks:
            cov[c.anchor] = cov.get(c.anchor, 0) + 1
        return cov


class _Runner:
    def __init__(self, suite: str, seed: int, timings: bool):
        self.report = VerificationReport(suite, seed)
        self.timings = timings
        self.seed = seed

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    def check(self, cid: str, anchor: str, fn: Callable[[], tuple[bool, str] | bool]):
        if anchor not in ANCHORS:
            raise KeyError(anchor)
        t0 = time.perf_counter()
        try:
            out = fn()
            ok, detail = out if isinstance(out, tuple) else (out, "")
            status = "pass" if ok else "fail"
        except Exception as exc:  # noqa: BLE001 - a crashing check is a failing check
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        ms = (time.perf_counter() - t0) * 1000 if self.timings else None
        self.report.checks.append(Check(cid, anchor, status, detail, ms))


# random instances


def _random_rational(rng: random.Random, size: int = 10**4) -> GaussianRational:
    while True:
        den = GaussianInt(rng.randint(-size, size), rng.randint(-size, size))
        if den:
            return GaussianRational(GaussianInt(rng.randint(-size, size), rng.randint(-size, size)), den)


def _random_words(rng: random.Random, count: int, size: int = 10**4, min_len: int = 1) -> list[PartialQuotientSeq]:
    out = []
    while len(out) < count:
        w = hcf_expand_rational(_random_rational(rng, size)).quotients
        if len(w) >= min_len:
            out.append(w)
    return out


def _phi_sq_power(m: int) -> QuadSurd:
    return QuadSurd(Fraction(3, 2), Fraction(1, 2), 5) ** m


# suites


def suite_props(r: _Runner, n: int = 1000):
    rng = r.rng("props")

    def rounding():
        for _ in range(10 * n):
            z = _random_rational(rng, 1000)
            w = z - nearest_gaussian_integer(z)
            x, y = w.parts()
            if not (-Fraction(1, 2) <= x < Fraction(1, 2) and -Fraction(1, 2) <= y < Fraction(1, 2)):
                return False, f"{z} rounds outside D"
            g = GaussianInt(rng.randint(-50, 50), rng.randint(-50, 50))
            if nearest_gaussian_integer(z + g) != nearest_gaussian_integer(z) + g:
                return False, f"not translation equivariant at {z}"
        halves = [("1/2", GaussianInt(1)), ("-1/2", GaussianInt(0)), ("(1+i)/2", GaussianInt(1, 1)), ("0", GaussianInt(0))]
        for text, want in halves:
            if nearest_gaussian_integer(text) != want:
                return False, f"[{text}] != {want}"
        return True, f"{10 * n} random points plus half-integer ties"

    r.check("props.rounding", "nearest-integer", rounding)

    def canonical():
        for _ in range(n):
            z = _random_rational(rng, 1000)
            again = GaussianRational(z.num, z.den)
            if again != z or (again.num, again.den) != (z.num, z.den):
                return False, f"{z} not idempotent"
            k = GaussianInt(rng.randint(1, 9), rng.randint(-9, 9))
            scaled = GaussianRational(z.num * k, z.den * k)
            if (scaled.num, scaled.den) != (z.num, z.den):
                return False, f"{z} scaled by {k} canonicalizes differently"
            d = z.den
            if not (d.re > 0 or (d.re == 0 and d.im > 0)):
                return False, f"denominator {d} not normalized"
            if not gaussian_gcd(z.num, z.den).is_unit() and z.num:
                return False, f"{z} not reduced"
        return True, f"{n} random values"

    r.check("props.canonical-form", "gaussian-gcd", canonical)

    def boxes():
        from .enclosures import ComplexBox

        for _ in range(n):
            p, q = _random_rational(rng, 50), _random_rational(rng, 50)
            if not (q - p):
                continue
            exact = (p * q + p) / (q - p)
            bp, bq = ComplexBox.point(p).round_out(20), ComplexBox.point(q).round_out(20)
            if (bq - bp).contains_zero():
                continue
            box = (bp * bq + bp) / (bq - bp)
            if not box.contains(exact):
                return False, f"(pq+p)/(q-p) escapes its box at p={p}, q={q}"
        return True, f"{n} random expressions"

    r.check("props.box-soundness", "box-soundness", boxes)

    words = _random_words(rng, n, min_len=2)

    def round_trip():
        for _ in range(n):
            z = _random_rational(rng)
            e = hcf_expand_rational(z)
            if evaluate(e.quotients) + e.shift != z:
                return False, f"round trip fails for {z}"
        return True, f"{n} random inputs"

    r.check("props.round-trip", "hcf-expansion", round_trip)

    def recursion():
        for w in words[:200]:
            if qpair(w) != qpair_recursive(w):
                return False, f"matrix and recursion disagree on {w}"
        return True, "200 words"

    r.check("props.qpair-recursion", "qpair", recursion)

    def determinant():
        for w in words:
            for m in range(len(w) + 1):
                if qpair(w[:m]).det() != GaussianInt((-1) ** m):
                    return False, f"det wrong for {w[:m]}"
        return True, f"{n} words, all prefixes"

    r.check("props.determinant", "determinant", determinant)

    def convergents():
        count = 0
        for _ in range(n):
            z = _random_rational(rng)
            e = hcf_expand_rational(z)
            w = z - e.shift
            for m in range(1, len(e.quotients) + 1):
                pr = qpair(e.quotients[:m])
                d = w - GaussianRational(pr.p, pr.q)
                if d.norm() * pr.q.norm() ** 2 > 1:
                    return False, f"bound fails for {z} at n={m}"
                count += 1
        return True, f"{count} convergents of {n} points"

    r.check("props.convergent-bound", "convergent-bound", convergents)

    def growth():
        for w in words:
            norms = [qpair(w[:m]).q.norm() for m in range(len(w) + 1)]
            if norms[0] != 1 or any(a >= b for a, b in zip(norms, norms[1:])):
                return False, f"norms not increasing on {w}"
        return True, f"{n} words"

    r.check("props.strict-growth", "strict-growth", growth)

    def phi():
        checked = 0
        for w in words:
            norms = [qpair(w[:m]).q.norm() for m in range(len(w) + 1)]
            for k in range(len(norms)):
                for step in range(len(norms) - k):
                    bound = _phi_sq_power(step // 2) * norms[k]
                    if bound.compare(norms[k + step]) > 0:
                        return False, f"phi growth fails on {w} at k={k}, n={step}"
                    checked += 1
        return True, f"{checked} (k, n) pairs"

    r.check("props.phi-growth", "phi-growth", phi)

    def last_quotient():
        for w in words:
            pr = qpair(w)
            a = w[-1]
            na, nq, nqm = a.norm(), pr.q.norm(), pr.q_minus.norm()
            # (|a|-1)^2 N(q-) < N(q) < (|a|+1)^2 N(q-), with |a| = sqrt(na)
            lower = QuadSurd(na + 1, -2, na) * nqm
            upper = QuadSurd(na + 1, 2, na) * nqm
            if not (lower.compare(nq) < 0 and upper.compare(nq) > 0):
                return False, f"bounds fail on {w}"
        return True, f"{n} words"

    r.check("props.last-quotient-bounds", "last-quotient-bounds", last_quotient)

    def concat():
        pairs = 0
        for w in words:
            k = rng.randint(1, len(w) - 1)
            a, b = w[:k], w[k:]
            prod = qpair(a).q.norm() * qpair(b).q.norm()
            nab = qpair(w).q.norm()
            if not (prod < 25 * nab and nab < 9 * prod):
                return False, f"bounds fail on {a} | {b}"
            pairs += 1
        return True, f"{pairs} splits"

    r.check("props.concatenation-bounds", "concatenation-bounds", concat)

    def mirror():
        for w in words:
            pr = qpair(w)
            if GaussianRational(pr.q_minus, pr.q) != evaluate(w.reversed()):
                return False, f"mirror formula fails on {w}"
        return True, f"{n} words"

    r.check("props.mirror-formula", "mirror-formula", mirror)

    def concatenation_law():
        for _ in range(100):
            u, v = rng.choice(words), rng.choice(words)
            if mobius_apply(u, evaluate(v)) != evaluate(u + v):
                return False, f"T_u([0;v]) != [0;uv] for {u}, {v}"
        return True, "100 random pairs"

    r.check("props.mobius-concatenation", "mobius-concatenation", concatenation_law)


_REPLAY_MINUS2I = [
    ("[-2i]", "D \\ closedB(i,1)", ("regular", 1, 2)),
    ("[-2i,-2]", "D & {Im z > -1/2} \\ B(1,1)", ("regular", 0, 2)),
    ("[-2i,-2,2i]", "D \\ closedB(-i,1)", ("regular", 3, 2)),
    ("[-2i,-2,2i,-2]", "D \\ B(1,1)", ("regular", 0, 2)),
    ("[-2i,-2,2i,-2,-2i]", "D \\ closedB(i,1)", ("regular", 1, 2)),
]
_REPLAY_2I = [
    ("[2i]", "D \\ B(-i,1)", ("regular", 3, 2)),
    ("[2i,-2+i]", "D & {Im z = -1/2} \\ B(1-i,1)", ("irregular", None, None)),
    ("[2i,-2+i,2i]", "D & {|z + i| = 1}", ("irregular", None, None)),
    ("[2i,-2+i,2i,-2+i]", "D & {Im z = -1/2} \\ B(1-i,1)", ("irregular", None, None)),
    ("[2i,-2+i,2i,-2+i,2i]", "D & {|z + i| = 1}", ("irregular", None, None)),
]


def _replay(word: str, text: str, cls) -> tuple[bool, str]:
    region = prototype_set(word)
    got = canonical_text(region)
    c = classify(region)
    got_cls = (c.tag, c.j, c.k)
    ok = got == text and got_cls == cls
    return ok, f"{word}: {got}; {c.label}"


def suite_cylinders(r: _Runner, seed_words: int = 50):
    for word, text, cls in _REPLAY_MINUS2I:
        r.check(f"cylinders.replay{word}", "prototype-replay-minus2i", lambda w=word, t=text, c=cls: _replay(w, t, c))
    for word, text, cls in _REPLAY_2I:
        r.check(f"cylinders.replay{word}", "prototype-replay-2i", lambda w=word, t=text, c=cls: _replay(w, t, c))

    def segment():
        # the segment {t - i/2 : -1/2 <= t <= 1 - sqrt(3)/2}
        region = prototype_set("[2i,-2+i]")
        inside = [GaussianRational.from_parts(Fraction(-1, 2), Fraction(-1, 2)), GaussianRational.from_parts(Fraction(13, 100), Fraction(-1, 2))]
        outside = [GaussianRational.from_parts(Fraction(14, 100), Fraction(-1, 2)), GaussianRational.from_parts(Fraction(0), Fraction(-49, 100))]
        ok = all(region_contains(region, z) == "included" for z in inside)
        ok = ok and all(region_contains(region, z) != "included" for z in outside)
        return ok, "segment endpoints bracket 1 - sqrt(3)/2 = 0.1339..."

    r.check("cylinders.segment-endpoint", "prototype-replay-2i", segment)

    def inversion_lines():
        from .geometry.loci import GenCircle
        from .geometry.regions import Constraint, Region, invert_region

        expect = {
            (0, 1, Fraction(1, 2)): GenCircle.circle(GaussianInt(0, -1), 1),
            (1, 0, Fraction(1, 2)): GenCircle.circle(GaussianInt(1), 1),
            (0, 1, Fraction(-1, 2)): GenCircle.circle(GaussianInt(0, 1), 1),
            (1, 0, Fraction(-1, 2)): GenCircle.circle(GaussianInt(-1), 1),
        }
        for (a, b, c), circ in expect.items():
            reg = Region((Constraint.on(GenCircle.line(a, b, c)),), False)
            got = invert_region(reg).constraints[0].locus
            if got != circ:
                return False, f"line {a}x+{b}y={c} inverts to {got.describe()}"
        return True, "the four edge lines of D invert to the unit circles at -i, 1, i, -1"

    r.check("cylinders.inversion", "cylinder-calculus", inversion_lines)

    def level1():
        bad = []
        for re_ in range(-5, 6):
            for im in range(-5, 6):
                b = GaussianInt(re_, im)
                if b.norm() < 2:
                    continue
                c = classify(prototype_set([b]))
                if c.tag == "irregular" or (c.tag == "full") != (b.norm() >= 8):
                    bad.append(str(b))
        return not bad, f"{len(bad)} exceptions" if bad else "all b with |b| <= 5 sqrt 2"

    r.check("cylinders.level1", "level1-fullness", level1)

    auto = PrototypeAutomaton()
    letters = [GaussianInt(a, b) for a in range(-4, 5) for b in range(-4, 5) if 2 <= a * a + b * b <= 16]
    start = auto.state(prototype_set(()))
    levels: list[dict] = [{(): start}]
    for _ in range(3):
        nxt = {}
        for w, s in levels[-1].items():
            if auto.tag(s) == "irregular":
                continue
            for a in letters:
                nxt[w + (a,)] = auto.step(s, a)
        levels.append(nxt)
    all_words = {w: s for lvl in levels[1:] for w, s in lvl.items()}

    def totality():
        tags = {"full": 0, "regular": 0, "irregular": 0}
        for s in range(len(auto)):
            try:
                tags[classify(auto.regions[s]).tag] += 1
            except GeometryInconsistency as exc:
                return False, str(exc)
        regular_states = {(classify(auto.regions[s]).j, classify(auto.regions[s]).k) for s in range(len(auto)) if auto.tag(s) == "regular"}
        return True, f"{len(all_words)} words, {len(auto)} prototype sets, {len(regular_states)} regular classes seen"

    r.check("cylinders.classification-totality", "thirteen-classes", totality)

    def templates():
        seen = set()
        for j in range(4):
            for k in (1, 2, 3):
                c = classify(class_template(j, k))
                if (c.j, c.k) != (j, k):
                    return False, f"template {j},{k} classifies as {c.label}"
                seen.add((j, k))
        return len(seen) == 12, "twelve rotated templates are pairwise distinct"

    r.check("cylinders.templates", "thirteen-classes", templates)

    def prefixes_regular():
        for w, s in all_words.items():
            if auto.tag(s) == "irregular":
                continue
            for m in range(1, len(w)):
                if auto.tag(all_words[w[:m]]) == "irregular":
                    return False, f"{w} regular with irregular prefix"
        return True, "every prefix of a regular word is regular"

    r.check("cylinders.regular-prefixes", "regular-full-closure", prefixes_regular)

    corners = [GaussianInt(a, b) for a in (-2, 2) for b in (-2, 2)]

    def extension_full():
        for w, s in all_words.items():
            if auto.tag(s) != "regular":
                continue
            if not any(auto.tag(auto.step(s, b)) == "full" for b in corners):
                return False, f"no b in {{+-2+-2i}} makes {w} full"
        return True, "every regular word has a full extension by one of +-2+-2i"

    r.check("cylinders.full-extension", "regular-full-closure", extension_full)

    def suffixes_full():
        for w, s in all_words.items():
            if auto.tag(s) != "full":
                continue
            for m in range(1, len(w)):
                if auto.tag(all_words[w[m:]]) != "full":
                    return False, f"{w} full but suffix {w[m:]} is not"
        return True, "suffixes of full words are full"

    r.check("cylinders.full-suffixes", "regular-full-closure", suffixes_full)

    def concat_full():
        full = [w for w, s in all_words.items() if auto.tag(s) == "full" and len(w) <= 2]
        short = [w for w in full if len(w) == 1]
        checked = 0
        for u in full:
            for v in short:
                if len(u) + len(v) > 3:
                    continue
                if auto.tag(all_words[u + v]) != "full":
                    return False, f"{u}{v} not full"
                checked += 1
        return True, f"{checked} concatenations"

    r.check("cylinders.full-concatenation", "regular-full-closure", concat_full)

    rng = r.rng("cylinders")
    fulls = sorted((w for w, s in all_words.items() if auto.tag(s) == "full" and len(w) <= 2), key=str)

    def transport():
        from .hcf import hcf_expand_rational as expand

        u = PartialQuotientSeq(rng.choice(fulls))
        vs = _random_words(rng, seed_words, size=300)
        tested = 0
        for v in vs:
            dv = prototype_set(v)
            if classify(dv).tag == "irregular":
                continue
            cyl = cylinder_region(u + v)
            pts = 0
            for _ in range(200):
                if pts >= 20:
                    break
                x = GaussianRational.from_parts(Fraction(rng.randint(-512, 511), 1024), Fraction(rng.randint(-512, 511), 1024))
                if region_contains(dv, x) != "included":
                    continue
                w = mobius_apply(v, x)
                z = mobius_apply(u, w)
                if region_contains(cyl, z) != "included":
                    return False, f"T_u(w) not in C(uv) for u={u}, v={v}, x={x}"
                if tuple(expand(z).quotients[: len(u) + len(v)]) != tuple(u + v):
                    return False, f"expansion of T_u(w) does not start with uv (u={u}, v={v})"
                pts += 1
                tested += 1
        return True, f"u={u}: {tested} points over {len(vs)} words"

    r.check("cylinders.full-transport", "cylinder-calculus", transport)

    def size():
        regular = sorted((w for w, s in all_words.items() if auto.tag(s) != "irregular" and len(w) <= 2), key=str)
        sample = rng.sample(regular, min(40, len(regular)))
        ratios = []
        for w in sample:
            w = PartialQuotientSeq(w)
            pr = qpair(w)
            nq = pr.q.norm()
            proto = prototype_set(w)
            pts = []
            for _ in range(400):
                if len(pts) >= 12:
                    break
                x = GaussianRational.from_parts(Fraction(rng.randint(-512, 511), 1024), Fraction(rng.randint(-512, 511), 1024))
                if region_contains(proto, x) == "included":
                    pts.append(mobius_apply(w, x))
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    if (pts[i] - pts[j]).norm() * nq * nq > 4:
                        return False, f"diameter bound fails on {w}"
            area = cylinder_area(w, "montecarlo", 4000, rng.randint(0, 2**31))
            if area.value * nq * nq > math.pi:
                return False, f"area {area.value:.3e} exceeds pi/|q|^4 on {w}"
            ratios.append(area.value * nq * nq / math.pi)
        c0 = min(ratios)
        return c0 > 0, f"{len(sample)} cylinders; fitted c0 = {c0:.4f}"

    r.check("cylinders.size-bounds", "cylinder-size", size)

    def areas():
        from .geometry.area import CLASS_AREAS

        details = []
        for k in (1, 2, 3):
            t = class_template(0, k)
            exact = region_area(t)
            mc = region_area(t, "montecarlo", 20000, r.seed + k)
            if abs(exact.value - mc.value) > mc.error:
                return False, f"G{k}: exact {exact.value:.5f} vs montecarlo {mc.value:.5f} +- {mc.error:.5f}"
            details.append(f"G{k}={CLASS_AREAS[f'G{k}'][0]}")
        return True, "; ".join(details)

    r.check("cylinders.canonical-areas", "canonical-areas", areas)


def suite_vk(r: _Runner, kmax: int = 10):
    def values():
        for k in range(kmax + 1):
            if evaluate(make_vk(k)) != evaluate(make_vk_tilde(k)):
                return False, f"k={k}"
        return True, f"0 <= k <= {kmax}"

    r.check("vk.values", "vk-values", values)

    def product():
        m = four_matrix_product()
        want = ((GaussianInt(17, 4), GaussianInt(-4, 8)), (GaussianInt(-8), GaussianInt(1, -4)))
        return m == want, f"{m}"

    r.check("vk.four-matrix-product", "vk-matrix", product)

    def identities():
        for k in range(kmax + 1):
            st = stk_matrix_power(k)
            s, t = st.p, st.q
            if GaussianRational(s, t).imag != Fraction(1, 2) or t.re != 0 or s != st.q_minus:
                return False, f"k={k}: s={s}, t={t}, t-={st.q_minus}"
            if st != qpair(make_vk(k)[1:]):
                return False, f"k={k}: matrix power differs from qpair(v_k without its first letter)"
        s0 = stk_matrix_power(0)
        return s0.p == 1 and s0.q == GaussianInt(0, -2), f"0 <= k <= {kmax}"

    r.check("vk.st-identities", "vk-matrix", identities)

    def prototypes():
        for k in range(6):
            if canonical_text(prototype_set(make_vk(k))) != "D \\ closedB(i,1)":
                return False, f"v_{k}"
        for k in range(1, 6):
            if canonical_text(prototype_set(make_vk_tilde(k))) != "D & {|z + i| = 1}":
                return False, f"v~_{k}"
        return True, "v_k for k <= 5 and v~_k for 1 <= k <= 5"

    r.check("vk.prototypes", "vk-prototypes", prototypes)

    def intro():
        z = parse_oracle("sqrt10-example")
        p = GaussianRational(GaussianInt(37, 6), GaussianInt(129, 24))
        ok = hcf_expand_rational(p).quotients == PartialQuotientSeq.parse("[3,2,3i,-2,3i]")
        e = hcf_expand_stream(z, 9)
        want = PartialQuotientSeq.parse("[4,-2,1+3i,-2,1+3i,-2,1+3i,-2,1+3i]")
        ok = ok and e.quotients == want
        d = dd(e, p)
        sq, dist = distance_interval(z, p, 256)
        bound = Fraction(1, p.den.norm())
        ok = ok and d == 4 and dist.lo > Fraction(28, 10**6) and dist.hi < Fraction(30, 10**6) and sq.hi < bound * bound
        alt_den = GaussianRational(GaussianInt(37, 6), GaussianInt(129, 4))
        ok = ok and hcf_expand_rational(alt_den).quotients != hcf_expand_rational(p).quotients
        return ok, f"z = {e.quotients}...; dd = {d}; |z-p/q| in [{float(dist.lo):.9e}, {float(dist.hi):.9e}]; q = 129+24i"

    r.check("vk.intro-example", "intro-example", intro)

    def construction():
        fulls = ["[3]", "[4]", "[2+2i]", "[3,3]"]
        bs = [GaussianInt(2, 2), GaussianInt(0, 3), GaussianInt(-2, 2)]
        rng = r.rng("construction")
        n_inst = n_pts = 0
        for a in fulls:
            for k in (1, 2, 3):
                for b in bs:
                    inst = build_discrepancy_instance(PartialQuotientSeq.parse(a), k, b)
                    expansion = hcf_expand_rational(inst.approx).quotients
                    if expansion != inst.approx_word:
                        return False, f"approx for {a},{k},{b} expands to {expansion}"
                    if region_contains(cylinder_region(inst.approx_word), inst.approx) == "excluded":
                        return False, f"approx outside the cylinder of {inst.approx_word}"
                    proto = prototype_set(inst.word)
                    got = 0
                    while got < 5:
                        x = GaussianRational.from_parts(Fraction(rng.randint(-64, 63), 128), Fraction(rng.randint(-64, 63), 128))
                        if region_contains(proto, x) != "included":
                            continue
                        z = mobius_apply(inst.word, x)
                        ez = hcf_expand_rational(z)
                        if ez.quotients[: len(inst.word)] != inst.word:
                            return False, f"sample z does not lie in the cylinder of {inst.word}"
                        if dd(ez, inst.approx) != inst.expected_dd:
                            return False, f"dd = {dd(ez, inst.approx)} != {inst.expected_dd} for {inst.word}"
                        got += 1
                        n_pts += 1
                    n_inst += 1
        return True, f"{n_inst} instances, {n_pts} sampled points, dd = 3k+2 throughout"

    r.check("vk.discrepancy-construction", "discrepancy-construction", construction)


def suite_gamma(r: _Runner, big_Q: int = 30):
    def small():
        res = enumerate_gamma(GammaSpec.from_bounds(3, Fraction(3, 2)))
        level1 = {str(w) for w in res.words if len(w) == 1}
        want1 = {"[3]", "[-3]", "[3i]", "[-3i]", "[2+2i]", "[2-2i]", "[-2+2i]", "[-2-2i]"}
        deeper = [w for w in res.words if len(w) > 1]
        ok = level1 == want1 and all(w[0].norm() == 2 for w in deeper) and len(res) == 18
        return ok, f"{len(res)} words: the 8 level-1 words with |b| >= 2 sqrt 2 and {len(deeper)} words behind a letter of norm 2"

    r.check("gamma.small", "gamma-family", small)

    spec = GammaSpec.from_bounds(3, big_Q)
    res = enumerate_gamma(spec)

    def big():
        words = res.words
        if not res.complete:
            return False, "budget exhausted"
        as_set = set(words)
        if len(as_set) != len(words):
            return False, "duplicates"
        for w in words:
            for m in range(1, len(w)):
                if w[:m] in as_set:
                    return False, f"{w[:m]} is a prefix of {w}"
            pr = qpair(w)
            if not (pr.q_minus.norm() < spec.Q_sq <= pr.q.norm()):
                return False, f"threshold fails on {w}"
        dfs = recount_gamma_dfs(spec)
        if dfs != as_set:
            return False, f"BFS {len(as_set)} vs DFS {len(dfs)}"
        return True, f"{len(words)} words, prefix-free, thresholds exact, BFS = DFS, {res.states} prototype states"

    r.check(f"gamma.M3-Q{big_Q}", "gamma-family", big)

    def suffix():
        total = len(res)
        rows = []
        for w in ["[]", "[2+2i]", "[1+i]", "[3]", "[1+i,2]", "[-1-i,3i]"]:
            word = PartialQuotientSeq.parse(w) if w != "[]" else PartialQuotientSeq()
            cnt, complete = gamma_suffix_count(word, spec)
            if not complete:
                return False, f"budget exhausted at {w}"
            if not word and cnt != total:
                return False, "empty root must reproduce the family size"
            ok, detail = suffix_bound_holds(word, spec, cnt, total)
            if not ok:
                return False, f"{w}: {detail}"
            rows.append(f"{w}:{cnt}")
        far, _ = gamma_suffix_count(PartialQuotientSeq.parse("[3,3,3,3]"), spec)
        return far == 0, "; ".join(rows) + f"; beyond Q: {far}"

    r.check("gamma.suffix-bound", "suffix-family", suffix)

    def trend():
        rows = gamma_trend(3, [5, 10, 20])
        return all(row["complete"] for row in rows), "; ".join(f"Q={row['Q']:.0f}: {row['count']} (Q^(4-2/M) = {row['Q_pow']:.1f})" for row in rows)

    r.check("gamma.trend", "gamma-family", trend)

    def lemma_annulus_full():
        r_ = Fraction(1, 4)
        lo, hi = 16, 64
        members = [GaussianInt(a, b) for a in range(-8, 9) for b in range(1, 9) if lo <= a * a + b * b <= hi]
        bad = [str(b) for b in members if classify(prototype_set([b])).tag != "full"]
        return not bad and len(members) == count_lattice_annulus(r_), f"{len(members)} members of I(1/4), all full"

    r.check("gamma.annulus-members-full", "level1-fullness", lemma_annulus_full)

    def measure():
        est = measure_sum_bounded_words(3, 1, 10**6, r.seed)
        tail = level1_tail_area(3)
        exact = 1 - tail.value
        ok = est.ci_lo - tail.error <= exact <= est.ci_hi + tail.error
        return ok, f"estimate {est.estimate:.6f} in [{est.ci_lo:.6f}, {est.ci_hi:.6f}], 1 - tail = {exact:.6f}"

    r.check("gamma.measure-level1", "measure-sum", measure)

    def monotone():
        byM = [measure_sum_bounded_words(m, 1, 50_000, r.seed + m) for m in (3, 4, 6)]
        byN = [measure_sum_bounded_words(4, n, 5000, r.seed + 10 + n) for n in (1, 2, 3)]
        ok = all(a.ci_lo <= b.ci_hi for a, b in zip(byM, byM[1:]))
        ok = ok and all(b.ci_lo <= a.ci_hi for a, b in zip(byN, byN[1:]))
        return ok, "M=3,4,6: " + ", ".join(f"{e.estimate:.4f}" for e in byM) + "; n=1,2,3: " + ", ".join(f"{e.estimate:.4f}" for e in byN)

    r.check("gamma.measure-monotone", "measure-sum", monotone)


GOLDEN_ANNULUS = {Fraction(1, 4): 71, Fraction(1, 8): 293, Fraction(1, 16): 1191}


def suite_annulus(r: _Runner):
    def golden():
        got = {k: count_lattice_annulus(k) for k in GOLDEN_ANNULUS}
        brute = {k: count_lattice_annulus_bruteforce(k) for k in GOLDEN_ANNULUS}
        return got == GOLDEN_ANNULUS == brute, ", ".join(f"r={k}: {v}" for k, v in got.items())

    r.check("annulus.golden", "annulus-count", golden)

    def scaling():
        worst = 0.0
        rows = []
        for e in range(2, 9):
            rr = Fraction(1, 2**e)
            c = count_lattice_annulus(rr)
            dev = abs(c - 1.5 * math.pi / float(rr) ** 2) * float(rr)
            worst = max(worst, dev)
            rows.append(f"1/{2**e}:{c}")
        return worst <= 20, f"fitted C = {worst:.3f}; " + ", ".join(rows)

    r.check("annulus.gauss-circle", "annulus-count", scaling)

    def one_percent():
        c = count_lattice_annulus(Fraction(1, 100))
        val = c / 10**4
        return abs(val - 1.5 * math.pi) <= 0.1, f"count = {c}, r^2 count = {val:.4f}, 3pi/2 = {1.5 * math.pi:.4f}"

    r.check("annulus.r-0.01", "annulus-count", one_percent)

    def monotone():
        rs = [Fraction(1, 4), Fraction(1, 5), Fraction(1, 8), Fraction(1, 10), Fraction(1, 16)]
        return all(count_lattice_annulus(x / 2) > count_lattice_annulus(x) for x in rs), "count(r/2) > count(r) at sampled r"

    r.check("annulus.monotone", "annulus-count", monotone)


def _prefix_pairs(rng: random.Random, n: int):
    """Pairs (x, p, q) with 0 < p/q < 1, q <= 10^4 and |x - p/q| < 1/q^2."""
    out = []
    while len(out) < n:
        q = rng.randint(2, 10**4)
        p = rng.randint(1, q - 1)
        if math.gcd(p, q) != 1:
            continue
        t = Fraction(rng.randint(1, 10**6 - 1), 10**6)
        sign = rng.choice((-1, 1))
        if rng.random() < 0.5:
            x = Fraction(p, q) + sign * t / (q * q)
        else:
            # a quadratic irrational offset: sign * t * (sqrt(2) - 1) / q^2
            x = QuadSurd(Fraction(p, q) - sign * t / (q * q), sign * t / (q * q), 2)
        xv = x if isinstance(x, Fraction) else x
        if isinstance(xv, Fraction) and not 0 < xv < 1:
            continue
        if isinstance(xv, QuadSurd) and not (xv.sign() > 0 and xv.compare(1) < 0):
            continue
        out.append((x, p, q))
    return out


def suite_rcf(r: _Runner, n: int = 1000):
    def examples():
        ok = rcf_expand_rational(Fraction(1, 2)).quotients == (2,)
        ok = ok and rcf_expand_rational(Fraction(2, 5)).quotients == (2, 2)
        ok = ok and rcf_expand_rational(Fraction(5, 7)).quotients == (1, 2, 2)
        rep = rcf_check_prefix_property(parse_oracle("sqrt2-minus-1"), 2, 5)
        ok = ok and rep.holds and rep.prefix_len == 1
        rep2 = rcf_check_prefix_property(Fraction(5, 7) + Fraction(1, 100), 5, 7)
        ok = ok and rep2.holds and rep2.prefix_len == 2
        rep3 = rcf_check_prefix_property(Fraction(1, 3), 2, 5)
        ok = ok and not rep3.precondition_ok
        return bool(ok), "1/2, 2/5, 5/7; sqrt2-1 vs 2/5; 5/7+1/100 vs 5/7; precondition violation reported"

    r.check("rcf.examples", "rcf-expansion", examples)

    def prefix():
        rng = r.rng("rcf")
        pairs = _prefix_pairs(rng, n)
        for x, p, q in pairs:
            rep = rcf_check_prefix_property(x, p, q)
            if not rep.precondition_ok or rep.holds is not True:
                return False, f"x={x}, p/q={p}/{q}: {rep.detail}"
        return True, f"{len(pairs)} pairs with q <= 10^4"

    r.check("rcf.prefix-property", "rcf-prefix", prefix)


SUITES: dict[str, Callable[[_Runner], None]] = {
    "props": suite_props,
    "cylinders": suite_cylinders,
    "vk": suite_vk,
    "gamma": suite_gamma,
    "annulus": suite_annulus,
    "rcf": suite_rcf,
}


def run_suite(name: str, seed: int = 0, timings: bool = False) -> VerificationReport:
    names = list(SUITES) if name == "all" else [name]
    for n in names:
        if n not in SUITES:
            raise DomainError(f"unknown suite {n!r}; choose from {', '.join(SUITES)} or all")
    runner = _Runner(name, seed, timings)
    t0 = time.perf_counter()
    for n in names:
        SUITES[n](runner)
    if timings:
        runner.report.runtime_ms = (time.perf_counter() - t0) * 1000
    return runner.report
