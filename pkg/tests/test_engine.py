import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncube import engine
from ncube.engine import Permutation
from ncube.errors import ClassNotPreserved, SizeMismatch, SliceOutOfRange, UnknownGenerator
from ncube.geometry import CENTER_CORNER, CENTER_EDGE, CORNER, EDGE, WING, build_layout

L5 = build_layout(5)
L6 = build_layout(6)


def test_generators_have_order_four():
    for n in (3, 4, 5, 6, 7):
        L = build_layout(n)
        for gen in L.generators:
            p = engine.generator_permutation(L, gen)
            assert p.order() == 4
            assert (p**4).is_identity()


def test_r_slab_on_five_cube_moves_45_facets():
    r = engine.generator_permutation(L5, ("R", 0))
    # the 25 facets of R minus its center, plus 20 lateral facets
    assert engine.facet_change_count(r) == 24 + 20


def test_inner_slice_leaves_corners_and_edges():
    cf = engine.generator_permutation(L5, ("F", 1))
    assert engine.induced_piece_action(cf, L5, (CORNER, 0)).tolist() == list(range(8))
    assert engine.induced_piece_action(cf, L5, (EDGE, 0)).tolist() == list(range(12))


def test_unknown_generators():
    with pytest.raises(UnknownGenerator):
        engine.generator_permutation(L5, ("X", 0))
    with pytest.raises(SliceOutOfRange):
        engine.generator_permutation(L5, ("F", 2))
    with pytest.raises(SliceOutOfRange):
        engine.compile(L5, "CF2")


def test_compile_basics():
    assert engine.compile(L5, "").is_identity()
    assert engine.compile(L5, "R R'").is_identity()
    assert engine.compile(L5, "R R R R").is_identity()
    assert not engine.compile(L5, "[R,U]").is_identity()


def test_z_is_a_three_cycle():
    z = engine.compile(L5, "[[CF,CD],U']")
    s = engine.apply(engine.solved(L5), z)
    assert not s.is_identity()
    assert engine.apply(engine.apply(s, z), z).is_identity()
    assert engine.cycle_structure(z, L5) == {(CENTER_CORNER, 1): [3]}


def test_p_on_six_cube():
    p = engine.compile(L6, "[[CF,CD2],U']")
    assert engine.cycle_structure(p, L6) == {(CENTER_EDGE, 2): [3]}


def test_induced_actions():
    ident = engine.solved(L5)
    for cid, slots in L5.classes():
        assert engine.induced_piece_action(ident, L5, cid).tolist() == list(range(len(slots)))
    assert engine.cycle_structure(ident, L5) == {}
    for n in (3, 4, 5, 6):
        L = build_layout(n)
        r = engine.generator_permutation(L, ("R", 0))
        assert engine.cycle_structure(r, L)[(CORNER, 0)] == [4]
    cf = engine.generator_permutation(L5, ("F", 1))
    assert engine.cycle_structure(cf, L5)[(CENTER_CORNER, 1)] == [4, 4]


def test_signs_on_classes():
    r = engine.generator_permutation(L5, ("R", 0))
    assert engine.sign_on_class(r, L5, (CORNER, 0)) == -1
    assert engine.sign_on_class(r, L5, (WING, 1)) == 1
    cr = engine.generator_permutation(L5, ("R", 1))
    assert engine.sign_on_class(cr, L5, (CENTER_EDGE, 1)) == -1


def test_class_not_preserved():
    img = np.arange(L5.g)
    a, b = L5.corner_slots[0][0], L5.edge_slots[0][0]
    img[[a, b]] = img[[b, a]]
    with pytest.raises(ClassNotPreserved):
        engine.induced_piece_action(Permutation(img), L5, (CORNER, 0))


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        engine.apply(engine.solved(L5), engine.solved(L6))


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


words = st.lists(st.sampled_from([f for f in "ULFRBD"] + ["CU", "CL", "CF", "CR", "CB", "CD"]), max_size=12)


@settings(max_examples=60, deadline=None)
@given(words, words)
def test_compile_is_a_homomorphism(a, b):
    wa, wb = " ".join(a), " ".join(b)
    assert engine.compile(L5, f"{wa} {wb}") == engine.compile(L5, wa) * engine.compile(L5, wb)
    assert engine.compile(L5, f"({wa})'" if a else "") == engine.compile(L5, wa).inverse()


@settings(max_examples=60, deadline=None)
@given(words, words, words)
def test_action_axiom(s, p, q):
    S, P, Q = (engine.compile(L5, " ".join(w)) for w in (s, p, q))
    assert engine.apply(S, Permutation.identity(L5.g)) == S
    assert engine.apply(engine.apply(S, P), Q) == engine.apply(S, P * Q)


@settings(max_examples=40, deadline=None)
@given(words, words)
def test_commutator_expansion(a, b):
    if not a or not b:
        return
    wa, wb = " ".join(a), " ".join(b)
    A, B = engine.compile(L5, wa), engine.compile(L5, wb)
    assert engine.compile(L5, f"[{wa},{wb}]") == A * B * A.inverse() * B.inverse()


def test_cycles_and_sign_helpers():
    p = Permutation([1, 2, 0, 4, 3])
    assert p.cycles() == [(0, 1, 2), (3, 4)]
    assert p.sign() == -1 and p.order() == 6
    assert engine.parity_sign([]) == 1
