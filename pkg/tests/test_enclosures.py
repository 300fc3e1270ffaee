import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hurwitz.enclosures import (
    ComplexBox,
    Interval,
    RefinableComplex,
    nearest_gaussian_integer_certified,
    parse_oracle,
    sqrt_interval,
)
from hurwitz.errors import Undecidable
from hurwitz.gaussian import GaussianInt, GaussianRational
from hurwitz.surd import QuadComplex, QuadSurd

from .conftest import gaussian_rationals

small_rationals = st.builds(
    GaussianRational,
    st.builds(GaussianInt, st.integers(-60, 60), st.integers(-60, 60)),
    st.builds(GaussianInt, st.integers(1, 60), st.integers(-60, 60)),
)


class TestIntervals:
    def test_sqrt_interval_brackets(self):
        iv = sqrt_interval(2, 100)
        assert iv.lo * iv.lo < 2 < iv.hi * iv.hi
        assert iv.width <= Fraction(1, 2**100)
        assert sqrt_interval(Fraction(9, 4), 10).is_point()

    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError):
            Interval(Fraction(1), Fraction(0))

    def test_reciprocal_straddling_zero(self):
        with pytest.raises(ZeroDivisionError):
            Interval(Fraction(-1), Fraction(1)).reciprocal()

    @given(small_rationals, small_rationals, st.integers(4, 40))
    def test_box_soundness(self, p, q, bits):
        bp, bq = ComplexBox.point(p).round_out(bits), ComplexBox.point(q).round_out(bits)
        box = bp * bq + bp - bq * bq
        assert box.contains(p * q + p - q * q)
        if not (bq + 1).contains_zero():
            assert (bp / (bq + 1)).contains(p / (q + 1))

    @given(gaussian_rationals)
    def test_abs_interval(self, z):
        box = ComplexBox.point(z).round_out(30)
        iv = box.abs_interval(60)
        r = math.sqrt(float(z.norm()))
        assert float(iv.lo) <= r * (1 + 1e-12) and r <= float(iv.hi) * (1 + 1e-12)


class TestSurd:
    def test_reduction(self):
        assert QuadSurd.sqrt(1) == 1
        assert QuadSurd.sqrt(8) == QuadSurd(0, 2, 2)
        assert QuadSurd.sqrt(Fraction(9, 4)).is_rational()

    def test_exact_comparisons(self):
        s10 = QuadSurd.sqrt(10)
        assert s10.compare(Fraction(316227, 100000)) > 0
        assert s10.compare(Fraction(316228, 100000)) < 0
        assert (s10 - 3) * (s10 + 3) == 1
        assert (s10 - 3).reciprocal() == s10 + 3

    @given(st.fractions(max_denominator=1000), st.fractions(max_denominator=1000), st.sampled_from([2, 3, 5, 10]))
    def test_sign_matches_float(self, a, b, d):
        x = QuadSurd(a, b, d)
        val = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(d)
        if abs(val) > 1e-30:
            assert x.sign() == (1 if val > 0 else -1)
        lo, hi = x.bounds(50)
        assert lo <= hi and hi - lo <= Fraction(1, 2**50)

    def test_quadratic_nearest_on_cell_edges(self):
        # 1/z for the introductory point is 7/2 + (sqrt10 - 3)/2 i, exactly on Re = 7/2
        z = QuadComplex(0, 2) / (QuadComplex(3 - QuadSurd.sqrt(10), 7))
        inv = z.reciprocal()
        assert inv.re == Fraction(7, 2)
        assert inv.nearest() == GaussianInt(4, 0)


class TestOracles:
    def test_interior_point(self):
        z = parse_oracle("0.25+0.25i")
        assert z.exact == GaussianRational.from_parts(Fraction(1, 4), Fraction(1, 4))
        assert nearest_gaussian_integer_certified(z) == GaussianInt(0)

    def test_boundary_point_is_undecidable(self):
        half = RefinableComplex(lambda bits: ComplexBox.point(Fraction(1, 2)), "1/2")
        with pytest.raises(Undecidable):
            nearest_gaussian_integer_certified(half, max_bits=256)
        with pytest.raises(Undecidable):
            nearest_gaussian_integer_certified(parse_oracle("1/2"), max_bits=256)

    def test_introductory_point(self):
        z = parse_oracle("sqrt10-example")
        # z is about 0.2856 - 0.0066i, so its cell is that of 0
        assert nearest_gaussian_integer_certified(z, max_bits=64) == GaussianInt(0)
        with mpmath.workdps(100):
            ref = 2j / (3 - mpmath.sqrt(10) + 7j)
        box = z.enclosure(300)
        assert box.width <= Fraction(1, 2**300)
        assert float(box.re.lo) <= float(ref.real) <= float(box.re.hi)

    @pytest.mark.parametrize("bits", [8, 64, 200])
    def test_enclosures_nested(self, bits):
        z = parse_oracle("(sqrt(5)-1)/2")
        coarse, fine = z.enclosure(bits), z.enclosure(2 * bits)
        slack = Fraction(2, 2**bits)
        assert coarse.re.lo - slack <= fine.re.lo and fine.re.hi <= coarse.re.hi + slack
        assert coarse.width <= Fraction(1, 2**bits)

    def test_expression_without_exact_form(self):
        z = parse_oracle("sqrt(2)+sqrt(3)")
        assert z.exact is None
        box = z.enclosure(60)
        assert box.re.contains(box.re.lo) and float(box.re.lo) == pytest.approx(math.sqrt(2) + math.sqrt(3))

    @pytest.mark.parametrize("bad", ["exp(1)", "x+1", "'a'"])
    def test_rejects_unknown_syntax(self, bad):
        with pytest.raises(ValueError):
            parse_oracle(bad)
