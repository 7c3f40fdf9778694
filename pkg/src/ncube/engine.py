"""Facet permutations, generator moves and per-class analysis.

A :class:`Permutation` is stored in *state form*: ``image[i]`` is the solved
position of the sticker that currently sits at position ``i``.  The solved
state is the identity and applying a move to a state is ``state * move``;
products read left to right, so ``apply(apply(s, p), q) == apply(s, p * q)``.
"""
from __future__ import annotations

from functools import lru_cache
from math import lcm

import numpy as np

from .errors import ClassNotPreserved, SizeMismatch, SliceOutOfRange, UnknownGenerator
from .geometry import FACES, Layout, slab_move


class Permutation:
    """Immutable bijection of ``{0, ..., degree - 1}``."""

    __slots__ = ("image", "_hash")

    def __init__(self, image, check: bool = True):
        arr = np.array(image, dtype=np.int64)
        if check:
            if arr.ndim != 1 or not np.array_equal(np.sort(arr), np.arange(arr.size)):
                raise ValueError("image is not a permutation")
        arr.setflags(write=False)
        self.image = arr
        self._hash = None

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(np.arange(degree), check=False)

    @property
    def degree(self) -> int:
        return self.image.size

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise SizeMismatch(f"degrees {self.degree} and {other.degree}")
        return Permutation(self.image[other.image], check=False)

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.image)
        inv[self.image] = np.arange(self.degree)
        return Permutation(inv, check=False)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.image, other.image)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.image.tobytes())
        return self._hash

    def __len__(self) -> int:
        return self.degree

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return f"Permutation.identity({self.degree})"
        return "Permutation(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc[:6]) + ("...)" if len(cyc) > 6 else ")")

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.image, np.arange(self.degree)))

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.image != np.arange(self.degree))

    def cycles(self) -> list[tuple[int, ...]]:
        return cycles_of(self.image)

    def sign(self) -> int:
        return parity_sign(self.image)

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def tolist(self) -> list[int]:
        return self.image.tolist()


LabelledState = Permutation


def cycles_of(arr) -> list[tuple[int, ...]]:
    """Nontrivial cycles of a permutation given as an index array."""
    arr = np.asarray(arr)
    seen = np.zeros(arr.size, dtype=bool)
    out = []
    for start in range(arr.size):
        if seen[start] or arr[start] == start:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(int(i))
            i = int(arr[i])
        out.append(tuple(cyc))
    return out


def parity_sign(arr) -> int:
    arr = np.asarray(arr)
    if arr.size == 0:
        return 1
    transpositions = sum(len(c) - 1 for c in cycles_of(arr))
    return -1 if transpositions % 2 else 1


def solved(layout: Layout) -> Permutation:
    return Permutation.identity(layout.g)


@lru_cache(maxsize=None)
def _generator_cached(n: int, face: str, depth: int) -> Permutation:
    dest = slab_move(n, face, depth)
    image = np.empty_like(dest)
    image[dest] = np.arange(dest.size)
    return Permutation(image, check=False)


def generator_permutation(layout: Layout, gen) -> Permutation:
    """Quarter turn of face ``gen[0]`` (``gen[1] == 0``) or of slice ``C_{f,k}``."""
    face, k = gen
    if face not in FACES:
        raise UnknownGenerator(f"unknown face {face!r}")
    if k < 0 or k > layout.K:
        raise SliceOutOfRange(f"slice index {k} outside 1..{layout.K} for n={layout.n}")
    return _generator_cached(layout.n, face, layout.depth(face, k))


def generators(layout: Layout) -> list[Permutation]:
    return [generator_permutation(layout, g) for g in layout.generators]


def compile(layout: Layout, word) -> Permutation:  # noqa: A001 - mirrors the move-word vocabulary
    """Evaluate a move word (tree or text) into a facet permutation."""
    from . import notation

    if isinstance(word, str):
        word = notation.parse(word)
    ident = Permutation.identity(layout.g)

    def ev(node):
        if isinstance(node, notation.Generator):
            if node.k > layout.K:
                raise SliceOutOfRange(f"{notation.render(node)} needs circle {node.k}, n={layout.n} has {layout.K}")
            return generator_permutation(layout, (node.face, node.k))
        if isinstance(node, notation.Inverse):
            return ev(node.word).inverse()
        if isinstance(node, notation.Power):
            return ev(node.word) ** node.exponent
        if isinstance(node, notation.Sequence):
            out = ident
            for item in node.items:
                out = out * ev(item)
            return out
        if isinstance(node, notation.Commutator):
            a, b = ev(node.left), ev(node.right)
            return a * b * a.inverse() * b.inverse()
        raise TypeError(f"not a move word: {node!r}")

    return ev(word)


def apply(state: Permutation, perm: Permutation) -> Permutation:
    if state.degree != perm.degree:
        raise SizeMismatch(f"state of degree {state.degree}, move of degree {perm.degree}")
    return state * perm


@lru_cache(maxsize=None)
def _slot_index(layout: Layout, class_id) -> tuple[np.ndarray, tuple[frozenset, ...]]:
    slots = layout.slots_of(class_id)
    owner = np.full(layout.g, -1, dtype=np.int64)
    for i, s in enumerate(slots):
        owner[list(s)] = i
    owner.setflags(write=False)
    return owner, tuple(frozenset(s) for s in slots)


def induced_piece_action(perm: Permutation, layout: Layout, class_id) -> np.ndarray:
    """Permutation of piece positions within one class, as ``home -> current``."""
    class_id = tuple(class_id)
    owner, sets = _slot_index(layout, class_id)
    slots = layout.slots_of(class_id)
    img = perm.image
    sigma = np.full(len(slots), -1, dtype=np.int64)
    for q, facets in enumerate(slots):
        homes = img[list(facets)]
        p = owner[homes[0]]
        if p < 0 or frozenset(homes.tolist()) != sets[p]:
            raise ClassNotPreserved(f"{class_id}: slot {q} holds facets {homes.tolist()}")
        if sigma[p] >= 0:
            raise ClassNotPreserved(f"{class_id}: piece {p} seen twice")
        sigma[p] = q
    return sigma


def sign_on_class(perm: Permutation, layout: Layout, class_id) -> int:
    return parity_sign(induced_piece_action(perm, layout, class_id))


def cycle_structure(perm: Permutation, layout: Layout) -> dict:
    """Nontrivial cycle lengths of the induced action on every class.

    Classes on which the permutation acts trivially are omitted.
    """
    out = {}
    for class_id, _ in layout.classes():
        lengths = sorted(len(c) for c in cycles_of(induced_piece_action(perm, layout, class_id)))
        if lengths:
            out[class_id] = lengths
    return out


def facet_change_count(perm: Permutation) -> int:
    return int(perm.support().size)
