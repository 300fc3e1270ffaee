from fractions import Fraction

import pytest

from hurwitz.enclosures import parse_oracle
from hurwitz.errors import DomainError
from hurwitz.gaussian import parse_gaussian_rational
from hurwitz.hcf import evaluate
from hurwitz.search import PsiSpec, distance_interval, search_approx

Z = parse_gaussian_rational
APPROX = Z("(37+6i)/(129+24i)")


@pytest.fixture(scope="module")
def intro():
    return parse_oracle("sqrt10-example")


class TestPsi:
    def test_exact_comparison(self):
        psi = PsiSpec(1, 2)
        assert psi.compare_sq(Fraction(1, 100), 10) == 0  # 1/100 = 10^-2
        assert psi.compare_sq(Fraction(1, 101), 10) < 0
        assert PsiSpec(Fraction(1, 2), Fraction(3, 2)).compare_sq(Fraction(1, 4) * Fraction(1, 8), 4) == 0

    def test_validation(self):
        with pytest.raises(DomainError):
            PsiSpec(0, 2)
        with pytest.raises(DomainError):
            PsiSpec(1, -1)


def test_distance_interval(intro):
    sq, dist = distance_interval(intro, APPROX, 256)
    assert Fraction(28, 10**6) < dist.lo and dist.hi < Fraction(30, 10**6)
    assert dist.width <= Fraction(1, 10**9)
    assert sq.hi < Fraction(1, 17217**2)


def test_table_contains_approximant(intro):
    cands, expansion = search_approx(intro, PsiSpec(1, 2), 20000)
    hits = {c.approx: c for c in cands if c.status == "hit"}
    assert APPROX in hits
    assert hits[APPROX].dd == 4
    # every convergent is a hit for psi(x) = x^-2
    prefix = expansion.quotients
    for n in range(1, len(prefix) + 1):
        v = evaluate(prefix[:n])
        if v.den.norm() <= 20000:
            assert hits[v].status == "hit"
    norms = [c.q.norm() for c in cands]
    assert norms == sorted(norms)


def test_tiny_psi_gives_empty_table(intro):
    cands, _ = search_approx(intro, PsiSpec(Fraction(1, 10**9), 4), 50)
    assert cands and all(c.status == "miss" for c in cands)


def test_construction_family(intro):
    # seeds from full prefixes of z produce v_k constructions
    cands, _ = search_approx(intro, PsiSpec(1, 2), 10**7, lattice=False)
    assert any(c.source.startswith("construction") for c in cands)
    assert all(c.status != "undecided" for c in cands)


def test_extra_candidates(intro):
    cands, _ = search_approx(intro, PsiSpec(1, 2), 20000, lattice=False, extra=[APPROX])
    (c,) = [c for c in cands if c.approx == APPROX]
    assert c.source == "given" and c.status == "hit"


def test_record_fields(intro):
    cands, _ = search_approx(intro, PsiSpec(1, 2), 100, lattice=False)
    assert set(cands[0].to_record()) == {"approx", "q_norm_sq", "source", "dist_lo", "dist_hi", "status", "dd"}


def test_limit_validation(intro):
    with pytest.raises(DomainError):
        search_approx(intro, PsiSpec(1, 2), 0)
