import pytest

from hurwitz.errors import DomainError
from hurwitz.verify import ANCHORS, SUITES, run_suite


@pytest.fixture(scope="module")
def reports():
    return {name: run_suite(name, seed=7) for name in ("props", "cylinders", "vk", "annulus", "rcf")}


@pytest.mark.parametrize("name", ["props", "cylinders", "vk", "annulus", "rcf"])
def test_suite_passes(reports, name):
    rep = reports[name]
    failed = [(c.id, c.detail) for c in rep.checks if c.status != "pass"]
    assert not failed
    assert rep.ok and rep.counts["pass"] == len(rep.checks) > 0


def test_check_ids_unique_and_anchored(reports):
    ids = [c.id for rep in reports.values() for c in rep.checks]
    assert len(ids) == len(set(ids))
    assert all(c.anchor in ANCHORS for rep in reports.values() for c in rep.checks)


def test_replays_are_checked(reports):
    ids = {c.id for c in reports["cylinders"].checks}
    assert sum(1 for i in ids if i.startswith("cylinders.replay[")) == 10


def test_vk_suite_contents(reports):
    ids = {c.id for c in reports["vk"].checks}
    assert {"vk.values", "vk.four-matrix-product", "vk.st-identities", "vk.prototypes", "vk.discrepancy-construction"} <= ids


def test_deterministic():
    a = [c.to_record("x") for c in run_suite("vk", seed=1).checks]
    b = [c.to_record("x") for c in run_suite("vk", seed=1).checks]
    assert a == b
    assert all("runtime_ms" not in r for r in a)


def test_timings_only_on_request():
    rep = run_suite("annulus", seed=0, timings=True)
    assert rep.runtime_ms is not None and all(c.runtime_ms is not None for c in rep.checks)


def test_unknown_suite():
    with pytest.raises(DomainError):
        run_suite("bogus")


def test_suite_registry():
    assert set(SUITES) == {"props", "cylinders", "vk", "gamma", "annulus", "rcf"}
