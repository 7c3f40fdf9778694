import numpy as np
import pytest

from ncube.errors import SizeTooLarge, SizeTooSmall
from ncube.geometry import (
    CENTER_CORNER,
    CENTER_EDGE,
    CORNER,
    EDGE,
    FIXED,
    WING,
    build_layout,
    piece_counts,
    slab_move,
    typing_components,
    wing_handedness,
    wing_position_actions,
)


@pytest.mark.parametrize("n", range(3, 13))
def test_classes_partition_all_facets(n):
    L = build_layout(n)
    assert L.g == 6 * n * n
    counts = {k: int((L.facet_class == k).sum()) for k in (CORNER, EDGE, WING, CENTER_CORNER, CENTER_EDGE, FIXED)}
    assert sum(counts.values()) == L.g
    assert counts[CORNER] == 24
    pc = piece_counts(n)
    centers = counts[CENTER_CORNER] + counts[CENTER_EDGE] + counts[FIXED]
    assert centers == pc["c"]
    assert (counts[EDGE] + counts[WING]) // 2 == pc["e"]
    for k in range(1, L.K + 1):
        assert len(L.center_corner_slots[k]) == 24
        assert L.z(k) == pc["z"][k]


def test_three_cube_is_degenerate():
    L = build_layout(3)
    assert (len(L.corner_slots), len(L.edge_slots), L.K, len(L.fixed_centers)) == (8, 12, 0, 6)
    assert L.wing_slots == {}


def test_four_cube_counts():
    pc = piece_counts(4)
    assert pc["c"] == pc["e"] == 24 and pc["K"] == 1


def test_five_cube_has_98_cubies():
    L = build_layout(5)
    pieces = len(L.corner_slots) + len(L.edge_slots) + 24 * L.K + piece_counts(5)["c"]
    assert pieces == 98


def test_seven_cube_center_edges():
    L = build_layout(7)
    assert L.K == 2 and L.z(1) == 24 and L.z(2) == 72
    assert sum(L.z(k) for k in (1, 2)) == 24 * 2**2


@pytest.mark.parametrize("n", [5, 7, 9])
def test_odd_center_edge_total(n):
    L = build_layout(n)
    assert sum(L.z(k) for k in range(1, L.K + 1)) == 24 * L.K**2


def test_size_limits():
    with pytest.raises(SizeTooSmall):
        build_layout(2)
    with pytest.raises(SizeTooLarge):
        build_layout(65)
    assert build_layout(10, max_size=10).n == 10
    with pytest.raises(SizeTooLarge):
        build_layout(11, max_size=10)


@pytest.mark.parametrize("n", range(3, 10))
def test_slice_depths(n):
    L = build_layout(n)
    assert len(L.generators) == 6 + 6 * L.K
    for (f, k), d in L.slice_table.items():
        assert d == (1 if k == 0 else n // 2 + 1 - k)
    if n % 2:
        # the middle slice never rotates
        assert all(d != (n + 1) // 2 for d in L.slice_table.values())


def test_circle_of_center_cells():
    n = 7
    L = build_layout(n)
    m = lambda i: abs(i - (n - 1) / 2)  # noqa: E731
    for f in range(n * n):
        r, c = divmod(f, n)
        if 0 < r < n - 1 and 0 < c < n - 1:
            k = int(max(m(r), m(c)))
            assert L.facet_circle[f] == k
            if k:
                assert L.facet_class[f] == (CENTER_CORNER if m(r) == m(c) else CENTER_EDGE)


@pytest.mark.parametrize("n", range(4, 10))
def test_wing_pairs_mirror_and_straddle(n):
    L = build_layout(n)
    for k in range(1, L.K + 1):
        slots = L.wing_slots[k]
        types = [w.type for w in slots]
        assert types.count("a") == 12
        for i, w in enumerate(slots):
            assert slots[w.partner].partner == i
            assert slots[w.partner].edge == w.edge
            assert types[w.partner] != types[i]
        assert typing_components(L, k) == 1


@pytest.mark.parametrize("n", range(4, 10))
def test_typing_is_chirality(n):
    L = build_layout(n)
    for k in range(1, L.K + 1):
        hand = wing_handedness(L, k)
        types = [w.type for w in L.wing_slots[k]]
        assert len(set(zip(types, hand))) == 2


def test_five_cube_a_slots_under_r_and_cf():
    L = build_layout(5)
    act = wing_position_actions(L)[1]
    types = [w.type for w in L.wing_slots[1]]
    assert act[("R", 0)] and all(types[j] == types[i] for i, j in act[("R", 0)].items())
    assert act[("F", 1)] and all(types[j] != types[i] for i, j in act[("F", 1)].items())


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_slab_moves_are_bijections_of_order_four(n):
    for f in "ULFRBD":
        for d in range(1, n + 1):
            dest = slab_move(n, f, d)
            assert np.array_equal(np.sort(dest), np.arange(6 * n * n))
            x = np.arange(6 * n * n)
            for _ in range(4):
                x = dest[x]
            assert np.array_equal(x, np.arange(6 * n * n))


def test_layout_is_cached_and_deterministic():
    assert build_layout(6) is build_layout(6)
    assert [w.type for w in build_layout(6).wing_slots[2]] == [w.type for w in build_layout(6).wing_slots[2]]
