import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz.enumeration import (
    AnnulusSpec,
    GammaSpec,
    alphabet,
    count_lattice_annulus,
    count_lattice_annulus_bruteforce,
    enumerate_gamma,
    gamma_suffix_count,
    gamma_trend,
    measure_sum_bounded_words,
    recount_gamma_dfs,
    suffix_bound_holds,
)
from hurwitz.errors import DomainError
from hurwitz.gaussian import GaussianInt, GaussianRational
from hurwitz.geometry import classify, level1_tail_area, prototype_set
from hurwitz.hcf import PartialQuotientSeq, hcf_expand_rational, qpair

W = PartialQuotientSeq.parse

# frozen from the brute-force reference count
GOLDEN_ANNULUS = {Fraction(1, 2): 17, Fraction(1, 4): 71, Fraction(1, 8): 293, Fraction(1, 16): 1191}


class TestAnnulus:
    @pytest.mark.parametrize("r,count", sorted(GOLDEN_ANNULUS.items()))
    def test_golden(self, r, count):
        assert count_lattice_annulus(r) == count
        assert count_lattice_annulus_bruteforce(r) == count

    def test_r_half_by_hand(self):
        # 2 <= |b| <= 4 with Im b >= 1, enumerated over |Re b| <= 4, 1 <= Im b <= 4
        pts = [(a, b) for a in range(-4, 5) for b in range(1, 5) if 4 <= a * a + b * b <= 16]
        assert len(pts) == count_lattice_annulus(AnnulusSpec(Fraction(1, 2)))

    @given(st.integers(3, 60), st.integers(1, 7))
    def test_matches_bruteforce(self, den, num):
        r = Fraction(num, den)
        if not 0 < r < 1:
            return
        assert count_lattice_annulus(r) == count_lattice_annulus_bruteforce(r)

    def test_one_percent(self):
        c = count_lattice_annulus(Fraction(1, 100))
        assert c == 47015
        assert abs(c / 10**4 - 1.5 * math.pi) <= 0.02 * 1.5 * math.pi
        assert count_lattice_annulus("0.01") == c

    def test_gauss_circle_error(self):
        for e in range(2, 9):
            r = Fraction(1, 2**e)
            c = count_lattice_annulus(r)
            assert abs(c - 1.5 * math.pi / float(r) ** 2) <= 20 / float(r)

    @pytest.mark.parametrize("r", [Fraction(1, 4), Fraction(1, 5), Fraction(1, 8), Fraction(1, 10)])
    def test_monotone(self, r):
        assert count_lattice_annulus(r / 2) > count_lattice_annulus(r)

    @pytest.mark.parametrize("r", [0, 1, Fraction(3, 2), -Fraction(1, 2)])
    def test_domain(self, r):
        with pytest.raises(DomainError):
            AnnulusSpec(r)


class TestGamma:
    def test_alphabet(self):
        a = alphabet(9)
        assert len(a) == 24
        assert all(2 <= x.norm() <= 9 for x in a)
        assert a == sorted(a, key=lambda x: (x.re, x.im))

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            GammaSpec.from_bounds(1, 3)
        with pytest.raises(DomainError):
            GammaSpec.from_bounds(3, 1)

    def test_small(self):
        res = enumerate_gamma(GammaSpec.from_bounds(3, Fraction(3, 2)))
        words = {str(w) for w in res.words}
        level1 = {"[3]", "[-3]", "[3i]", "[-3i]", "[2+2i]", "[2-2i]", "[-2+2i]", "[-2-2i]"}
        assert level1 <= words
        # letters of norm 2 and 5 have |q| >= 3/2 but are not full; letters of norm 2
        # (|q| = sqrt 2 < 3/2) are extended and contribute full words of length 2
        deeper = [w for w in res.words if len(w) == 2]
        assert len(res) == 18 and len(deeper) == 10
        assert all(w[0].norm() == 2 for w in deeper)
        assert all(classify(prototype_set(w)).tag == "full" for w in res.words)

    def test_literal_level1_list_is_not_twelve(self):
        # {±2±2i, ±3, ±3i} has eight elements
        assert len({GaussianInt(a, b) for a in (2, -2) for b in (2, -2)} | {GaussianInt(3), GaussianInt(-3), GaussianInt(0, 3), GaussianInt(0, -3)}) == 8

    @pytest.mark.parametrize("Q", [3, 5, 8])
    def test_postconditions(self, Q):
        spec = GammaSpec.from_bounds(3, Q)
        res = enumerate_gamma(spec)
        assert res.complete
        words = set(res.words)
        assert len(words) == len(res.words)
        for w, n in zip(res.words, res.q_norms):
            pr = qpair(w)
            assert pr.q.norm() == n
            assert pr.q_minus.norm() < spec.Q_sq <= n
            assert all(a.norm() <= 9 for a in w)
            for m in range(1, len(w)):
                assert w[:m] not in words
        assert words == recount_gamma_dfs(spec)

    def test_budget(self):
        res = enumerate_gamma(GammaSpec.from_bounds(3, 10), budget=10)
        assert not res.complete
        res = enumerate_gamma(GammaSpec.from_bounds(3, 10), limit=5)
        assert not res.complete and len(res) == 5

    def test_records(self):
        rec = next(enumerate_gamma(GammaSpec.from_bounds(3, 2)).records())
        assert set(rec) == {"word", "q_norm_sq", "class"}

    @settings(max_examples=30, deadline=None)
    @given(st.data())
    def test_cylinders_cover_measure(self, data):
        """A random point's first word crossing Q, if full and bounded, is enumerated."""
        spec = GammaSpec.from_bounds(3, 6)
        words = set(enumerate_gamma(spec).words)
        x = data.draw(st.fractions(-Fraction(1, 2), Fraction(1, 2), max_denominator=10**6))
        y = data.draw(st.fractions(-Fraction(1, 2), Fraction(1, 2), max_denominator=10**6))
        e = hcf_expand_rational(GaussianRational.from_parts(x, y))
        if e.shift:
            return
        for m in range(1, len(e.quotients) + 1):
            if qpair(e.quotients[:m]).q.norm() >= spec.Q_sq:
                u = e.quotients[:m]
                if all(a.norm() <= 9 for a in u) and classify(prototype_set(u)).tag == "full":
                    assert u in words
                break

    def test_suffix_counts(self):
        spec = GammaSpec.from_bounds(3, 8)
        total = len(enumerate_gamma(spec))
        assert gamma_suffix_count((), spec) == (total, True)
        assert gamma_suffix_count(W("[3,3,3]"), spec) == (0, True)  # already beyond Q
        assert gamma_suffix_count(W("[2i,-2+i]"), spec) == (0, True)  # irregular root
        for w in ("[3]", "[1+i]", "[2+2i]", "[-1+i,2]"):
            cnt, complete = gamma_suffix_count(W(w), spec)
            assert complete
            ok, _ = suffix_bound_holds(W(w), spec, cnt, total)
            assert ok
            # suffix words reassemble into members of the full family when the root is full
            if classify(prototype_set(W(w))).tag == "full" and cnt:
                full_words = set(enumerate_gamma(spec).words)
                suffixes = enumerate_gamma(spec, root=W(w)).words
                assert all(W(w) + b in full_words for b in suffixes)

    def test_trend_is_reported(self):
        rows = gamma_trend(3, [4, 6])
        assert [r["Q"] for r in rows] == [4.0, 6.0]
        assert rows[0]["count"] < rows[1]["count"]


class TestMeasure:
    def test_level1_against_exact_areas(self):
        est = measure_sum_bounded_words(3, 1, 10**6, seed=11)
        tail = level1_tail_area(3)
        assert est.ci_lo - tail.error <= 1 - tail.value <= est.ci_hi + tail.error

    def test_deterministic(self):
        assert measure_sum_bounded_words(4, 2, 2000, seed=3) == measure_sum_bounded_words(4, 2, 2000, seed=3)

    def test_large_M_tends_to_one(self):
        assert measure_sum_bounded_words(200, 1, 100_000, seed=1).estimate > 0.999

    def test_monotone(self):
        a = measure_sum_bounded_words(3, 1, 100_000, seed=1)
        b = measure_sum_bounded_words(6, 1, 100_000, seed=2)
        assert a.ci_lo <= b.ci_hi and a.estimate < b.estimate
        n1 = measure_sum_bounded_words(4, 1, 5000, seed=4)
        n3 = measure_sum_bounded_words(4, 3, 5000, seed=4)
        assert n3.ci_lo <= n1.ci_hi and n3.estimate < n1.estimate

    def test_level1_vectorized_matches_exact(self):
        from hurwitz.enumeration import _bounded_exact, _level1_bounded

        import numpy as np

        rng = np.random.default_rng(0)
        L = 2**25
        a = rng.integers(-(2**24), 2**24, 2000)
        b = rng.integers(-(2**24), 2**24, 2000)
        fast, valid = _level1_bounded(a, b, L, Fraction(9))
        for x, y, f, v in zip(a.tolist(), b.tolist(), fast, valid):
            if v:
                assert _bounded_exact(x, y, L, 1, Fraction(9)) == bool(f)

    @pytest.mark.parametrize("n,samples", [(0, 10), (1, 0)])
    def test_domain(self, n, samples):
        with pytest.raises(DomainError):
            measure_sum_bounded_words(3, n, samples)
