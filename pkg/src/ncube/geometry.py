"""Facet layout of the n x n x n cube.

Facets are indexed ``face * n**2 + row * n + col`` with faces ordered
``U L F R B D``.  Every face is read from outside the cube with the following
orientation:

* ``U`` from above, ``B`` at the top of the grid;
* ``F``, ``R``, ``B``, ``L`` from outside, ``U`` at the top;
* ``D`` from below, ``F`` at the top.

Internally each facet also carries the doubled, centred coordinates of its
cubie (``2 * pos - (n - 1)``) and its outward normal, which makes slab
rotations exact integer arithmetic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .errors import SizeTooLarge, SizeTooSmall, TypingInconsistent, UnknownGenerator

FACES = "ULFRBD"
MAX_SIZE = 64

NORMALS = {
    "U": (0, 1, 0),
    "L": (-1, 0, 0),
    "F": (0, 0, 1),
    "R": (1, 0, 0),
    "B": (0, 0, -1),
    "D": (0, -1, 0),
}
_NORMAL_TO_FACE = {v: k for k, v in NORMALS.items()}

# Wing and single-edge reference facet: the U/D facet, else the F/B facet.
_REF_RANK = {"U": 0, "D": 0, "F": 1, "B": 1, "L": 2, "R": 2}

# Faces whose quarter turns keep wing types; every other generator swaps them.
TYPE_PRESERVING_FACES = frozenset("RLUD")

EDGE_NAMES = ("UB", "UL", "UR", "UF", "FL", "FR", "BL", "BR", "DF", "DL", "DR", "DB")

CORNER = "corner"
EDGE = "edge"
WING = "wing"
CENTER_CORNER = "center_corner"
CENTER_EDGE = "center_edge"
FIXED = "fixed"


@dataclass(frozen=True)
class WingSlot:
    facets: tuple[int, int]
    edge: int
    partner: int
    type: str | None = None


@dataclass(frozen=True)
class CenterOrbit:
    """24 center facets that a rotation of the face grid keeps together.

    ``key`` is the canonical offset of the facet from the face middle (in
    doubled units for even n), ``circle`` the ring it lies on.
    """

    key: tuple[int, int]
    circle: int
    kind: str
    facets: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Layout:
    n: int
    parity: str
    K: int
    corner_slots: tuple[tuple[int, int, int], ...]
    edge_slots: tuple[tuple[int, int], ...]
    wing_slots: dict[int, tuple[WingSlot, ...]]
    center_corner_slots: dict[int, tuple[int, ...]]
    center_edge_slots: dict[int, tuple[int, ...]]
    fixed_centers: tuple[int, ...]
    center_orbits: tuple[CenterOrbit, ...]
    slice_table: dict[tuple[str, int], int]
    facet_class: np.ndarray = field(repr=False)
    facet_circle: np.ndarray = field(repr=False)

    @property
    def g(self) -> int:
        return 6 * self.n * self.n

    @property
    def odd(self) -> bool:
        return self.parity == "odd"

    @property
    def generators(self) -> tuple[tuple[str, int], ...]:
        return tuple(self.slice_table)

    def z(self, k: int) -> int:
        return len(self.center_edge_slots[k])

    def depth(self, face: str, k: int) -> int:
        try:
            return self.slice_table[(face, k)]
        except KeyError:
            raise UnknownGenerator(f"no generator ({face}, {k}) on the {self.n}-cube") from None

    def classes(self):
        """Yield ``(class_id, slots)`` for every movable piece class.

        ``class_id`` is ``(kind, circle)``; each slot is a tuple of facet
        indices (one facet for centers).
        """
        yield (CORNER, 0), self.corner_slots
        if self.odd:
            yield (EDGE, 0), self.edge_slots
        for k in range(1, self.K + 1):
            yield (WING, k), tuple(w.facets for w in self.wing_slots[k])
        for k in range(1, self.K + 1):
            yield (CENTER_CORNER, k), tuple((f,) for f in self.center_corner_slots[k])
        for k in range(1, self.K + 1):
            if self.center_edge_slots[k]:
                yield (CENTER_EDGE, k), tuple((f,) for f in self.center_edge_slots[k])

    def slots_of(self, class_id) -> tuple[tuple[int, ...], ...]:
        for cid, slots in self.classes():
            if cid == tuple(class_id):
                return slots
        raise KeyError(class_id)


def _face_frame(n: int):
    """Map (face, row, col) to integer cubie coordinates in 0..n-1."""
    m = n - 1

    def pos(face, r, c):
        if face == "U":
            return c, m, r
        if face == "L":
            return 0, m - r, c
        if face == "F":
            return c, m - r, m
        if face == "R":
            return m, m - r, m - c
        if face == "B":
            return m - c, m - r, 0
        return c, 0, m - r  # D

    return pos


@lru_cache(maxsize=None)
def _facet_geometry(n: int):
    pos = _face_frame(n)
    g = 6 * n * n
    coords = np.empty((g, 3), dtype=np.int64)
    normals = np.empty((g, 3), dtype=np.int64)
    for fi, face in enumerate(FACES):
        for r in range(n):
            for c in range(n):
                idx = fi * n * n + r * n + c
                coords[idx] = [2 * v - (n - 1) for v in pos(face, r, c)]
                normals[idx] = NORMALS[face]
    lookup = {(tuple(coords[i]), tuple(normals[i])): i for i in range(g)}
    coords.setflags(write=False)
    normals.setflags(write=False)
    return coords, normals, lookup


def _rotate_cw(vec, axis):
    # quarter turn clockwise as seen from the tip of ``axis``
    ax, ay, az = axis
    vx, vy, vz = vec
    cross = (ay * vz - az * vy, az * vx - ax * vz, ax * vy - ay * vx)
    dot = ax * vx + ay * vy + az * vz
    return tuple(-cross[i] + axis[i] * dot for i in range(3))


@lru_cache(maxsize=None)
def slab_move(n: int, face: str, depth: int) -> np.ndarray:
    """Destination map of a clockwise quarter turn of one slab.

    ``dest[j]`` is the facet position the sticker at ``j`` is carried to.
    ``depth`` counts layers from ``face`` (1 is the face layer itself).
    """
    if face not in NORMALS:
        raise UnknownGenerator(face)
    if not 1 <= depth <= n:
        raise UnknownGenerator(f"depth {depth} outside 1..{n}")
    coords, normals, lookup = _facet_geometry(n)
    axis = NORMALS[face]
    level = n + 1 - 2 * depth
    dest = np.arange(6 * n * n, dtype=np.int64)
    along = coords @ np.asarray(axis)
    for j in np.flatnonzero(along == level):
        p = _rotate_cw(tuple(coords[j]), axis)
        q = _rotate_cw(tuple(normals[j]), axis)
        dest[j] = lookup[(p, q)]
    dest.setflags(write=False)
    return dest


@lru_cache(maxsize=None)
def rotation_move(n: int, face: str) -> np.ndarray:
    """Destination map of a clockwise quarter turn of the whole cube about ``face``."""
    dest = np.arange(6 * n * n, dtype=np.int64)
    for depth in range(1, n + 1):
        d = slab_move(n, face, depth)
        moved = d != np.arange(d.size)
        dest[moved] = d[moved]
    dest.setflags(write=False)
    return dest


def circle_of_depth(n: int, depth: int) -> int:
    return n // 2 + 1 - depth


def _ring(n: int, i: int) -> int:
    # ring distance of grid line ``i`` from the face middle
    return (abs(2 * i - (n - 1)) + (n % 2 == 0)) // 2


def _orbit_key(n: int, r: int, c: int) -> tuple[int, int]:
    a, b = 2 * r - (n - 1), 2 * c - (n - 1)
    if n % 2:
        a, b = a // 2, b // 2
        while not (a > 0 and b >= 0):
            a, b = -b, a
        return a, b
    while not (a > 0 and b > 0):
        a, b = -b, a
    return (a + 1) // 2, (b + 1) // 2


def _cubie_facets(n: int):
    coords, normals, _ = _facet_geometry(n)
    cubies: dict[tuple, list[int]] = {}
    for i in range(6 * n * n):
        p = tuple((coords[i] + (n - 1)) // 2)
        cubies.setdefault(p, []).append(i)
    return cubies


def _face_of(n: int, facet: int) -> str:
    return FACES[facet // (n * n)]


def _edge_id(n: int, facets) -> int:
    faces = {_face_of(n, f) for f in facets}
    for i, name in enumerate(EDGE_NAMES):
        if set(name) == faces:
            return i
    raise AssertionError(faces)


def _order_edge(n: int, facets) -> tuple[int, int]:
    a, b = facets
    if _REF_RANK[_face_of(n, a)] > _REF_RANK[_face_of(n, b)]:
        a, b = b, a
    return a, b


def _order_corner(n: int, facets) -> tuple[int, int, int]:
    _, normals, _ = _facet_geometry(n)
    ref = next(f for f in facets if _face_of(n, f) in "UD")
    a, b = (f for f in facets if f != ref)
    # clockwise seen from outside <=> det(n_ref, n_next, n_last) == -1
    if round(np.linalg.det(np.array([normals[ref], normals[a], normals[b]]))) != -1:
        a, b = b, a
    return ref, a, b


def build_layout(n: int, max_size: int = MAX_SIZE) -> Layout:
    """Classify all ``6 n^2`` facets of the n-cube."""
    if not isinstance(n, (int, np.integer)) or n < 3:
        raise SizeTooSmall(f"n={n}: cubes below 3x3x3 are not supported")
    if n > max_size:
        raise SizeTooLarge(f"n={n} exceeds the cap of {max_size}")
    return _build_layout(int(n))


@lru_cache(maxsize=16)
def _build_layout(n: int) -> Layout:
    odd = n % 2 == 1
    K = (n - 3) // 2 if odd else n // 2 - 1
    g = 6 * n * n
    coords, _, _ = _facet_geometry(n)

    facet_class = np.empty(g, dtype=object)
    facet_circle = np.zeros(g, dtype=np.int64)

    corners, edges = [], []
    wings: dict[int, list] = {k: [] for k in range(1, K + 1)}
    for pos, facets in _cubie_facets(n).items():
        if len(facets) == 3:
            corners.append(_order_corner(n, facets))
        elif len(facets) == 2:
            axis = next(i for i in range(3) if 0 < pos[i] < n - 1)
            p = pos[axis]
            k = circle_of_depth(n, min(p, n - 1 - p) + 1)
            ordered = _order_edge(n, facets)
            if k == 0:
                edges.append(ordered)
            else:
                wings[k].append((ordered, _edge_id(n, facets), pos, axis))
    corners.sort()
    edges.sort()
    for c in corners:
        facet_class[list(c)] = CORNER
    for e in edges:
        facet_class[list(e)] = EDGE

    wing_slots = {}
    for k in range(1, K + 1):
        items = sorted(wings[k])
        index = {it[2]: i for i, it in enumerate(items)}
        slots = []
        for ordered, eid, pos, axis in items:
            mirror = list(pos)
            mirror[axis] = n - 1 - pos[axis]
            slots.append(WingSlot(ordered, eid, index[tuple(mirror)]))
            facet_class[list(ordered)] = WING
            facet_circle[list(ordered)] = k
        wing_slots[k] = tuple(slots)

    cc = {k: [] for k in range(1, K + 1)}
    ce = {k: [] for k in range(1, K + 1)}
    fixed = []
    orbit_facets: dict[tuple[int, int], list[int]] = {}
    for f in range(g):
        rc = f % (n * n)
        r, c = divmod(rc, n)
        if not (0 < r < n - 1 and 0 < c < n - 1):
            continue
        mr, mc = _ring(n, r), _ring(n, c)
        k = max(mr, mc)
        facet_circle[f] = k
        if k == 0:
            fixed.append(f)
            facet_class[f] = FIXED
            continue
        if mr == mc:
            cc[k].append(f)
            facet_class[f] = CENTER_CORNER
        else:
            ce[k].append(f)
            facet_class[f] = CENTER_EDGE
        orbit_facets.setdefault(_orbit_key(n, r, c), []).append(f)

    orbits = tuple(
        CenterOrbit(key, max(key), CENTER_CORNER if key[0] == key[1] else CENTER_EDGE, tuple(fs))
        for key, fs in sorted(orbit_facets.items(), key=lambda kv: (max(kv[0]), kv[0]))
    )

    slice_table = {(f, 0): 1 for f in FACES}
    for k in range(1, K + 1):
        for f in FACES:
            slice_table[(f, k)] = n // 2 + 1 - k

    facet_class.setflags(write=False)
    facet_circle.setflags(write=False)
    layout = Layout(
        n=n,
        parity="odd" if odd else "even",
        K=K,
        corner_slots=tuple(corners),
        edge_slots=tuple(edges),
        wing_slots=wing_slots,
        center_corner_slots={k: tuple(v) for k, v in cc.items()},
        center_edge_slots={k: tuple(v) for k, v in ce.items()},
        fixed_centers=tuple(fixed),
        center_orbits=orbits,
        slice_table=slice_table,
        facet_class=facet_class,
        facet_circle=facet_circle,
    )
    return wing_typing(layout, wing_position_actions(layout))


def wing_position_actions(layout: Layout) -> dict[int, dict[tuple[str, int], dict[int, int]]]:
    """Restrict every generator to the wing slots of each circle.

    Returns ``{k: {gen: {slot: image_slot}}}`` listing only moved slots.
    """
    n = layout.n
    out = {}
    for k in range(1, layout.K + 1):
        slots = layout.wing_slots[k]
        by_facet = {}
        for i, w in enumerate(slots):
            for f in w.facets:
                by_facet[f] = i
        per_gen = {}
        for gen, depth in layout.slice_table.items():
            dest = slab_move(n, gen[0], depth)
            action = {}
            for i, w in enumerate(slots):
                j = by_facet.get(int(dest[w.facets[0]]))
                if j is not None and j != i:
                    action[i] = j
            per_gen[gen] = action
        out[k] = per_gen
    return out


def wing_typing(layout: Layout, position_actions) -> Layout:
    """Two-colour the wing slots of every circle.

    Images under R, L, U, D keep the colour, images under F, B and the inner
    slices swap it.  The class holding the lowest-indexed slot of each
    connected component is called ``"a"``.
    """
    typed = {}
    for k in range(1, layout.K + 1):
        slots = layout.wing_slots[k]
        adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(slots))}
        for gen, action in position_actions[k].items():
            flip = 0 if (gen[1] == 0 and gen[0] in TYPE_PRESERVING_FACES) else 1
            for i, j in action.items():
                adj[i].append((j, flip))
                adj[j].append((i, flip))
        colour: dict[int, int] = {}
        for start in range(len(slots)):
            if start in colour:
                continue
            colour[start] = 0
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j, flip in adj[i]:
                    want = colour[i] ^ flip
                    if j not in colour:
                        colour[j] = want
                        queue.append(j)
                    elif colour[j] != want:
                        raise TypingInconsistent(f"circle {k}: slots {i} and {j} conflict")
        typed[k] = tuple(replace(w, type="ab"[colour[i]]) for i, w in enumerate(slots))
    return replace(layout, wing_slots=typed)


def typing_components(layout: Layout, k: int) -> int:
    """Number of connected components of the circle-``k`` constraint graph."""
    actions = wing_position_actions(layout)[k]
    parent = list(range(len(layout.wing_slots[k])))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for action in actions.values():
        for i, j in action.items():
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(parent))})


def wing_handedness(layout: Layout, k: int) -> tuple[int, ...]:
    """Chirality (+1/-1) of each circle-``k`` slot's (reference, other) facet order."""
    coords, normals, _ = _facet_geometry(layout.n)
    out = []
    for w in layout.wing_slots[k]:
        a, b = w.facets
        offset = coords[a] * (1 - np.abs(normals[a]) - np.abs(normals[b]))
        det = np.linalg.det(np.array([normals[a], normals[b], offset]))
        out.append(1 if det > 0 else -1)
    return tuple(out)


def piece_counts(n: int) -> dict:
    """Closed-form piece counts for the n-cube (no layout construction)."""
    if n < 3:
        raise SizeTooSmall(f"n={n}")
    odd = n % 2 == 1
    K = (n - 3) // 2 if odd else n // 2 - 1
    z = {k: (24 * (2 * k - 1) if odd else 48 * (k - 1)) for k in range(1, K + 1)}
    return {"n": n, "c": 6 * (n - 2) ** 2, "e": 12 * (n - 2), "g": 6 * n * n, "K": K, "z": z}
