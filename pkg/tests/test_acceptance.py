"""Acceptance criteria 1 to 10, one verdict line each (see the summary section)."""
import time
from math import factorial as f

import numpy as np

from ncube import bsgs, counting, engine, harness, notation
from ncube.codec import AssemblyModel
from ncube.geometry import CENTER_CORNER, CENTER_EDGE, CORNER, EDGE, WING, build_layout
from ncube.notation import Commutator, Generator, Inverse, Power, Sequence

EXPECTED_ORDER_5 = "(24!)^3·2^7·12!·8!·3^7"


def _chain(n, seed=0):
    L = build_layout(n)
    return bsgs.build_chain(engine.generators(L), bsgs.class_major_order(L), seed=seed)


def test_criterion_1_order_of_g5(criterion):
    t = time.perf_counter()
    chain = _chain(5)
    elapsed = time.perf_counter() - t
    factored = str(counting.group_order_factored(5))
    same = chain.order() == counting.group_order(5)
    ok = factored == EXPECTED_ORDER_5 and same and elapsed < 60
    detail = f"factored={factored} expected={EXPECTED_ORDER_5} chain==formula={same} build={elapsed:.1f}s"
    assert criterion(1, ok, detail), "criterion 1 not met"


def test_criterion_2_configuration_count(criterion):
    conf = counting.conf_cardinality(5)
    conf_expected = f(24) ** 3 * 2**36 * f(12) * 3**8 * f(8)
    orbits = counting.orbit_count(5)
    ok = conf == conf_expected and orbits == 2**29 * 3
    detail = f"conf exact={conf == conf_expected} orbit_count={orbits} expected={2**29 * 3}"
    assert criterion(2, ok, detail), "criterion 2 not met"


def test_criterion_3_cross_size_orders(criterion):
    parts, ok = [], True
    for n in (3, 4, 6, 7):
        t = time.perf_counter()
        order = _chain(n).order()
        elapsed = time.perf_counter() - t
        good = order == counting.group_order(n) and (n != 7 or elapsed < 600)
        ok &= good
        parts.append(f"n={n}:{'ok' if good else 'mismatch'}({elapsed:.1f}s)")
    ok &= str(_chain(3).order()) == "43252003274489856000"
    assert criterion(3, ok, " ".join(parts)), "criterion 3 not met"


def test_criterion_4_named_moves(criterion):
    failures = []
    for n in (5, 6):
        failures += [f"n={n} {c.claim}: observed {c.observed}" for c in harness.verify_named_moves(n).failures()]
    detail = "; ".join(failures) or "all 10 named moves as claimed"
    assert criterion(4, not failures, detail), "criterion 4 not met"


def test_criterion_5_sign_table(criterion):
    bad = [n for n in range(3, 10) if not harness.verify_sign_table(n).passed]
    assert criterion(5, not bad, f"n=3..9 mismatching sizes: {bad}"), "criterion 5 not met"


def test_criterion_6_law_preservation(criterion):
    bad = []
    for n in (3, 4, 5, 6, 7):
        r = harness.verify_law_preservation(n, trials=1000, seed=n)
        bad += [f"n={n} {c.claim}" for c in r.failures()]
    detail = "; ".join(bad) or "1000 scrambles per size valid, every mutation isolated"
    assert criterion(6, not bad, detail), "criterion 6 not met"


def test_criterion_7_law_matches_membership(criterion):
    parts, ok = [], True
    for n in (4, 5):
        r = harness.cross_validate_membership(n, trials=200, seed=n)
        agree = next(c for c in r.checks if c.claim == "validate agrees with chain membership")
        ok &= agree.passed
        parts.append(f"n={n}: {agree.observed}/200")
    assert criterion(7, ok, " ".join(parts)), "criterion 7 not met"


def _stabilizer(n, cid):
    L = build_layout(n)
    slots = dict(L.classes())[cid]
    keep = {p for s in slots for p in s}
    rest = set(range(L.g)) - keep
    return bsgs.pointwise_stabilizer_order(engine.generators(L), rest, base_hint=bsgs.class_major_order(L))


def test_criterion_8_subgroup_orders(criterion):
    expected = {
        (5, (CORNER, 0)): f(8) * 3**7 // 2,
        (5, (EDGE, 0)): f(12) * 2**10,
        (5, (WING, 1)): f(24) // 2,
        (5, (CENTER_CORNER, 1)): f(24) // 2,
        (5, (CENTER_EDGE, 1)): f(24) // 2,
        (6, (WING, 1)): f(24),
        (6, (WING, 2)): f(24),
        (6, (CENTER_EDGE, 2)): f(48) // 2,
    }
    misses = []
    for (n, cid), want in expected.items():
        got = _stabilizer(n, cid)
        if got != want:
            misses.append(f"n={n} {cid[0]}:{cid[1]} expected/observed = {want / got:.3g}")
    detail = "; ".join(misses) or "all 8 orders exact"
    assert criterion(8, not misses, detail), "criterion 8 not met"


def test_criterion_9_probabilities(criterion):
    from fractions import Fraction

    exact = (
        counting.solvability_probability(5, "mech") == Fraction(1, 12)
        and counting.solvability_probability(5, "sticker") == Fraction(1, 49152)
    )
    t = time.perf_counter()
    mech = harness.estimate_probability(5, AssemblyModel.MECHANICAL, 10**6, seed=1)
    sticker = harness.estimate_probability(5, AssemblyModel.STICKER, 10**7, seed=2)
    elapsed = time.perf_counter() - t
    zs = [r.checks[0].observed["z"] for r in (mech, sticker)]
    ok = exact and mech.passed and sticker.passed and elapsed < 300
    detail = f"exact={exact} z(mech)={zs[0]:+.2f} z(sticker)={zs[1]:+.2f} time={elapsed:.0f}s"
    assert criterion(9, ok, detail), "criterion 9 not met"


def _random_tree(rng, depth=0):
    if depth > 3 or rng.random() < 0.35:
        return Generator(str(rng.choice(list("UDLRFB"))), int(rng.integers(0, 4)))
    kind = rng.integers(4)
    if kind == 0:
        return Inverse(_random_tree(rng, depth + 1))
    if kind == 1:
        return Power(_random_tree(rng, depth + 1), int(rng.integers(2, 10)))
    if kind == 2:
        return Sequence(tuple(_random_tree(rng, depth + 1) for _ in range(rng.integers(2, 5))))
    return Commutator(_random_tree(rng, depth + 1), _random_tree(rng, depth + 1))


def test_criterion_10_notation(criterion):
    rng = np.random.default_rng(10)
    trips = 0
    for _ in range(1000):
        tree = _random_tree(rng)
        text = notation.render(tree)
        trips += notation.parse(text) == tree and notation.render(notation.parse(text)) == text
    L = build_layout(5)
    # facet-level cycles of length > 1
    expected = {"[[CF,CD],U']": {3: 1}, "[CL',[L,U']]": {3: 2}, "[[CR',CD'],U]": {3: 1}}
    cycles = {}
    for text in expected:
        perm = engine.compile(L, notation.parse(text))
        lengths = [len(c) for c in engine.cycles_of(perm.image) if len(c) > 1]
        cycles[text] = {k: lengths.count(k) for k in set(lengths)}
    ok = trips == 1000 and cycles == expected
    assert criterion(10, ok, f"round trips {trips}/1000, cycle counts {cycles}"), "criterion 10 not met"
