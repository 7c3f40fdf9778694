import json

import numpy as np
import pytest

from ncube import codec, harness, law
from ncube.geometry import build_layout


def test_report_semantics():
    r = harness.Report("x", 5)
    r.check("hard ok", 1, 1)
    r.check("soft miss", 1, 2, hard=False)
    assert r.passed
    r.check("hard miss", 1, 2)
    assert not r.passed and [c.claim for c in r.failures()] == ["hard miss"]
    d = json.loads(r.to_json())
    assert set(d["checks"][0]) == {"claim", "expected", "observed", "pass", "provenance", "hard"}


def test_big_ints_serialise_as_strings():
    r = harness.Report("x", 5)
    r.check("big", 2**80, 2**80)
    assert json.loads(r.to_json())["checks"][0]["observed"] == str(2**80)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_sign_table(n):
    assert harness.verify_sign_table(n).passed


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_wing_typing(n):
    assert harness.verify_wing_typing(n).passed


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_law_preservation(n):
    assert harness.verify_law_preservation(n, trials=100, seed=1).passed


def test_named_moves_six_pass():
    assert harness.verify_named_moves(6).passed


def test_named_move_w_is_reported():
    r = harness.verify_named_moves(5)
    assert [c.claim for c in r.failures()] and all("w" in c.claim for c in r.failures())


@pytest.mark.parametrize("n", [4, 5, 6])
def test_membership(n):
    r = harness.cross_validate_membership(n, trials=60, seed=2)
    assert r.passed


def test_repair_gives_complete_valid(n=6):
    L = build_layout(n)
    rng = np.random.default_rng(0)
    for _ in range(20):
        c = harness.repair(codec.sample_configuration(L, "sticker", rng), L, rng)
        assert law.validate(c, L, complete=True).valid


def test_mutations_cover_conditions():
    assert set(harness.mutations(build_layout(5))) == {"1", "2", "3", "4", "5"}
    assert set(harness.mutations(build_layout(3))) == {"1", "3", "4"}
    assert set(harness.mutations(build_layout(4))) == {"1", "2", "3"}
    assert set(harness.mutations(build_layout(6))) == {"1", "2", "3", "4"}


def test_estimate_small_is_deterministic():
    a = harness.estimate_probability(5, "mech", 20000, seed=3)
    b = harness.estimate_probability(5, "mech", 20000, seed=3)
    assert a.to_dict() == b.to_dict() and a.passed


def test_subgroups_five():
    assert harness.verify_subgroup_orders(5).passed


def test_unknown_suite():
    with pytest.raises(ValueError):
        harness.run_suite("nope", 3)
