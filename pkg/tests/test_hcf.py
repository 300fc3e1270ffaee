from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hurwitz.enclosures import ComplexBox, RefinableComplex, parse_oracle
from hurwitz.errors import DomainError, InsufficientPrecision
from hurwitz.gaussian import GaussianInt, GaussianRational, parse_gaussian_rational
from hurwitz.hcf import (
    HcfExpansion,
    PartialQuotientSeq,
    QPair,
    build_discrepancy_instance,
    dd,
    evaluate,
    four_matrix_product,
    hcf_expand_rational,
    hcf_expand_stream,
    make_vk,
    make_vk_tilde,
    mobius_apply,
    observed_period,
    qpair,
    qpair_recursive,
    stk_matrix_power,
)
from hurwitz.surd import QuadSurd

from .conftest import gaussian_rationals, words_strategy

W = PartialQuotientSeq.parse
Z = parse_gaussian_rational
APPROX = Z("(37+6i)/(129+24i)")  # the introductory approximant
APPROX_ALT_DEN = Z("(37+6i)/(129+4i)")


def gi(re, im=0):
    return GaussianInt(re, im)


class TestWords:
    def test_parse_and_format(self):
        w = W("[3, 2, 3i, -2, 3i]")
        assert str(w) == "[3,2,3i,-2,3i]"
        assert W("[]") == ()
        assert w.minus() == W("[3,2,3i,-2]")
        assert w.reversed() == W("[3i,-2,3i,2,3]")

    @pytest.mark.parametrize("bad", ["[1]", "[i]", "[0]", "[3,1+0i]"])
    def test_small_quotients_rejected(self, bad):
        with pytest.raises(DomainError):
            W(bad)


class TestQPair:
    def test_empty(self):
        pr = qpair(())
        assert (pr.p, pr.q) == (gi(0), gi(1))
        assert pr == QPair.identity()

    def test_single(self):
        pr = qpair(W("[-2i]"))
        assert (pr.p, pr.q) == (gi(1), gi(0, -2))

    def test_introductory_word(self):
        pr = qpair(W("[3,2,3i,-2,3i]"))
        assert pr.value() == APPROX
        assert pr.q.norm() == 17217
        assert pr.value() != APPROX_ALT_DEN

    @given(words_strategy())
    def test_matrix_equals_recursion(self, w):
        assert qpair(w) == qpair_recursive(w)

    @given(words_strategy())
    def test_determinant(self, w):
        assert qpair(w).det() == gi((-1) ** len(w))

    @given(words_strategy())
    def test_mirror_formula(self, w):
        pr = qpair(w)
        assert GaussianRational(pr.q_minus, pr.q) == evaluate(w.reversed())

    @given(words_strategy())
    def test_strict_growth(self, w):
        norms = [qpair(w[:m]).q.norm() for m in range(len(w) + 1)]
        assert all(a < b for a, b in zip(norms, norms[1:]))

    @given(words_strategy(), st.data())
    def test_phi_growth(self, w, data):
        k = data.draw(st.integers(0, len(w)))
        n = data.draw(st.integers(0, len(w) - k))
        phi_sq = QuadSurd(Fraction(3, 2), Fraction(1, 2), 5)  # phi^2
        lhs = phi_sq ** (n // 2) * qpair(w[:k]).q.norm()
        assert lhs.compare(qpair(w[: k + n]).q.norm()) <= 0

    @given(words_strategy())
    def test_last_quotient_bounds(self, w):
        pr = qpair(w)
        na = w[-1].norm()
        nq, nqm = pr.q.norm(), pr.q_minus.norm()
        assert (QuadSurd(na + 1, -2, na) * nqm).compare(nq) < 0
        assert (QuadSurd(na + 1, 2, na) * nqm).compare(nq) > 0

    @given(words_strategy(), st.data())
    def test_concatenation_bounds(self, w, data):
        if len(w) < 2:
            return
        k = data.draw(st.integers(1, len(w) - 1))
        prod = qpair(w[:k]).q.norm() * qpair(w[k:]).q.norm()
        assert prod < 25 * qpair(w).q.norm() < 225 * prod


class TestEvaluate:
    def test_examples(self):
        assert evaluate(()) == 0
        assert evaluate(W("[3,-2i]")) == Z("(12-2i)/37")
        assert evaluate(make_vk(0)) == evaluate(make_vk_tilde(0))

    @given(words_strategy(), words_strategy())
    def test_mobius_concatenation(self, u, v):
        assert mobius_apply(u, evaluate(v)) == evaluate(u + v)

    def test_pole(self):
        pr = qpair(W("[3]"))
        with pytest.raises(DomainError):
            mobius_apply(W("[3]"), GaussianRational(-pr.q, pr.q_minus))


class TestExpandRational:
    @pytest.mark.parametrize(
        "z,word",
        [
            ("0", "[]"),
            ("(37+6i)/(129+24i)", "[3,2,3i,-2,3i]"),
            # the denominator 129+4i gives a different expansion
            ("(37+6i)/(129+4i)", "[3,1+i,2-4i,1-2i,2i]"),
            # 1/z = 3 + i/2 sits on an edge and rounds up
            ("(12-2i)/37", "[3+i,2i]"),
        ],
    )
    def test_examples(self, z, word):
        e = hcf_expand_rational(Z(z))
        assert e.terminated and e.quotients == W(word)
        assert str(e) == f"{word} (terminated)"

    def test_integer_part(self):
        e = hcf_expand_rational(Z("(7+3i)/2"))
        assert e.shift == gi(4, 2)
        assert evaluate(e.quotients) + e.shift == Z("(7+3i)/2")

    @given(gaussian_rationals)
    def test_round_trip(self, z):
        e = hcf_expand_rational(z)
        assert evaluate(e.quotients) + e.shift == z
        assert all(a.norm() >= 2 for a in e.quotients)

    @given(gaussian_rationals)
    def test_convergent_bound(self, z):
        e = hcf_expand_rational(z)
        w = z - e.shift
        for m in range(1, len(e.quotients) + 1):
            pr = qpair(e.quotients[:m])
            assert (w - pr.value()).norm() * pr.q.norm() ** 2 <= 1

    @given(gaussian_rationals)
    def test_last_quotient_not_too_small(self, z):
        # a terminating expansion never ends in a quotient that would make the tail leave D
        e = hcf_expand_rational(z)
        if e.quotients:
            last = e.quotients[-1]
            x, y = (1 / GaussianRational.coerce(last)).parts()
            assert -Fraction(1, 2) <= x < Fraction(1, 2) and -Fraction(1, 2) <= y < Fraction(1, 2)


class TestExpandStream:
    def test_introductory_point(self):
        e = hcf_expand_stream(parse_oracle("sqrt10-example"), 9)
        assert e.quotients == W("[4,-2,1+3i,-2,1+3i,-2,1+3i,-2,1+3i]")
        assert not e.terminated and e.certified_prefix_len == 9
        assert observed_period(hcf_expand_stream(parse_oracle("sqrt10-example"), 21).quotients) == (1, 2)

    def test_half_even_rounding_sequence(self):
        """The quotients (4,-2,3i,2,3i,...) come from rounding ties to even.

        Replaying the expansion exactly in Q(i)(sqrt 10) with that rule
        reproduces them, which pins down the source of the disagreement.
        """
        from hurwitz.surd import QuadComplex

        def round_half_even(x: QuadSurd) -> int:
            f = x.floor()
            diff = x - f
            c = diff.compare(Fraction(1, 2))
            if c == 0:
                return f + (f % 2)
            return f + (1 if c > 0 else 0)

        w = QuadComplex(0, 2) / QuadComplex(3 - QuadSurd.sqrt(10), 7)
        out = []
        for _ in range(9):
            inv = w.reciprocal()
            a = gi(round_half_even(inv.re), round_half_even(inv.im))
            out.append(a)
            w = inv - QuadComplex(a.re, a.im)
        assert PartialQuotientSeq(out) == W("[4,-2,3i,2,3i,-2,3i,2,3i]")

    def test_quadratic_without_ties(self):
        e = hcf_expand_stream(parse_oracle("sqrt(2)-1"), 6)
        assert e.quotients == W("[2,2,2,2,2,2]")
        e = hcf_expand_stream(parse_oracle("(sqrt(5)-1)/2"), 4)
        assert e.shift == gi(1)

    def test_interior_point(self):
        e = hcf_expand_stream(parse_oracle("0.25+0.25i"), 1)
        assert e.quotients == W("[2-2i]") and e.terminated

    def test_rational_oracle_terminates(self):
        e = hcf_expand_stream(parse_oracle("(12-2i)/37"), 5)
        assert e.quotients == W("[3+i,2i]") and e.terminated

    def test_enclosure_only_oracle_stops_on_boundary(self):
        # without an exact value, 1/z = 3 + i/2 can never be certified
        exact = Z("(12-2i)/37")
        z = RefinableComplex(lambda bits: ComplexBox.point(exact), "x")
        e = hcf_expand_stream(z, 5, max_bits=256)
        assert e.quotients == () and e.certified_prefix_len == 0 and not e.terminated

    def test_enclosure_only_irrational(self):
        z = parse_oracle("sqrt(2)+sqrt(3)")  # no single-radicand exact form
        e = hcf_expand_stream(z, 8)
        assert e.certified_prefix_len == 8
        # compare with the exact-free reference from a high precision float expansion
        import mpmath

        with mpmath.workdps(200):
            w = mpmath.sqrt(2) + mpmath.sqrt(3)
            w -= mpmath.floor(w + 0.5)
            ref = []
            for _ in range(8):
                inv = 1 / w
                a = int(mpmath.floor(inv + 0.5))
                ref.append(gi(a))
                w = inv - a
        assert list(e.quotients) == ref


class TestDiscrepancy:
    def test_equal_prefix_gives_zero(self):
        e = hcf_expand_rational(Z("(37+6i)/(129+24i)") + Fraction(1, 10**12))
        assert dd(e, APPROX) == 0

    def test_introductory_pair(self):
        e = hcf_expand_stream(parse_oracle("sqrt10-example"), 9)
        # (4,-2,1+3i,-2,1+3i) against (3,2,3i,-2,3i): positions 1, 2, 3, 5 differ
        assert dd(e, APPROX) == 4
        # against the half-even sequence, positions 1, 2, 4 differ
        assert dd(W("[4,-2,3i,2,3i]"), APPROX) == 3

    def test_insufficient_prefix(self):
        with pytest.raises(InsufficientPrecision):
            dd(W("[4,-2]"), APPROX)
        e = HcfExpansion(W("[4,-2,3]"), False, 2)
        with pytest.raises(InsufficientPrecision):
            dd(e, Z("(1)/(4)") + Z("(1)/(100)"))

    def test_rational_z_too_short(self):
        with pytest.raises(DomainError):
            dd(hcf_expand_rational(APPROX), APPROX)

    @pytest.mark.parametrize("a,k,b,want", [("[3]", 1, 2 + 2j, 5), ("[4]", 2, 3j, 8), ("[2+2i]", 3, -2 + 2j, 11)])
    def test_instances(self, a, k, b, want):
        inst = build_discrepancy_instance(W(a), k, gi(int(b.real), int(b.imag)))
        assert inst.expected_dd == want
        assert hcf_expand_rational(inst.approx).quotients == inst.approx_word
        # the cylinder point [0; a v_k b 3 3 ...] terminates after the word, so pad it
        z = evaluate(inst.word + W("[3,3,3]"))
        assert dd(hcf_expand_rational(z), inst.approx) == want

    @pytest.mark.parametrize("a,k,b", [("[2]", 1, 3j), ("[3]", 0, 3j), ("[3]", 1, 2), ("[3]", 1, 3)])
    def test_instance_preconditions(self, a, k, b):
        with pytest.raises(DomainError):
            build_discrepancy_instance(W(a), k, gi(int(b.real), int(b.imag)) if isinstance(b, complex) else gi(b))


class TestVk:
    def test_shapes(self):
        assert make_vk(0) == W("[3,-2i]") and make_vk_tilde(0) == W("[3+i,2i]")
        assert make_vk(1) == W("[3,-2i,-2,2i,-2,-2i]")
        assert make_vk_tilde(1) == W("[3+i,2i,-2+i,2i,-2+i,2i]")
        assert len(make_vk(2)) == 10

    @pytest.mark.parametrize("k", range(11))
    def test_values_agree(self, k):
        assert evaluate(make_vk(k)) == evaluate(make_vk_tilde(k))

    def test_four_matrix_product(self):
        assert four_matrix_product() == ((gi(17, 4), gi(-4, 8)), (gi(-8), gi(1, -4)))

    @pytest.mark.parametrize("k", range(11))
    def test_st_identities(self, k):
        st_ = stk_matrix_power(k)
        assert GaussianRational(st_.p, st_.q).imag == Fraction(1, 2)
        assert st_.q.re == 0
        assert st_.p == st_.q_minus
        assert st_ == qpair(make_vk(k)[1:])

    def test_k0(self):
        st_ = stk_matrix_power(0)
        assert (st_.p, st_.q) == (gi(1), gi(0, -2))
        assert GaussianRational(st_.p, st_.q) == Z("(i)/(2)")

    def test_negative_k(self):
        with pytest.raises(ValueError):
            make_vk(-1)
