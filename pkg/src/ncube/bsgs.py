"""Schreier-Sims stabilizer chains over the facet positions.

Permutations are index arrays acting on points by ``p -> perm[p]``.  A chain
is built by random Schreier-Sims and then certified by sifting every
Schreier generator of every level, bottom level first; any residue is added
and the certification starts over.  Orders returned by a chain are
therefore exact.

Transversals are stored as explicit tables: ``U[r]`` maps the level's base
point to an orbit point and ``Uinv[r]`` is its inverse.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from math import prod

import numpy as np
from numba import njit

from .engine import Permutation
from .errors import DegreeMismatch

__all__ = [
    "StabilizerChain",
    "build_chain",
    "chain_order",
    "member",
    "pointwise_stabilizer_order",
    "class_major_order",
    "load_or_build",
]


@njit(cache=True)
def _sift(h, start, base, idx, uinv):
    """Sift ``h`` from level ``start``; returns (stop level, residue)."""
    h = h.copy()
    nlev = base.shape[0]
    deg = h.shape[0]
    for lev in range(start, nlev):
        r = idx[lev, h[base[lev]]]
        if r < 0:
            return lev, h
        row = uinv[r]
        for p in range(deg):
            h[p] = row[h[p]]
    return nlev, h


@njit(cache=True)
def _is_identity(h):
    for p in range(h.shape[0]):
        if h[p] != p:
            return False
    return True


@njit(cache=True)
def _check_level(lev, gens, orbit_rows, base, idx, U, uinv):
    """Sift all Schreier generators of one level through the levels below.

    Returns (-1, -1, dummy) when all sift to the identity, else the stop
    level and the residue of the first failure.
    """
    deg = U.shape[1]
    t = np.empty(deg, dtype=U.dtype)
    for oi in range(orbit_rows.shape[0]):
        u = U[orbit_rows[oi]]
        gamma = u[base[lev]]
        for si in range(gens.shape[0]):
            s = gens[si]
            delta = s[gamma]
            back = uinv[idx[lev, delta]]
            for p in range(deg):
                t[p] = back[s[u[p]]]
            stop, res = _sift(t, lev + 1, base, idx, uinv)
            if not _is_identity(res):
                return stop, 0, res
    return -1, -1, t


@dataclass
class _Level:
    point: int
    gens: list = field(default_factory=list)  # indices into chain.strong
    rows: dict = field(default_factory=dict)  # orbit point -> transversal row


class StabilizerChain:
    """Base, strong generators and transversals of a permutation group."""

    def __init__(self, degree: int, hint=None):
        self.degree = degree
        order = list(hint) if hint is not None else []
        seen = set(order)
        order += [p for p in range(degree) if p not in seen]
        self._rank = {p: i for i, p in enumerate(order)}
        self._order = order
        self.levels: list[_Level] = []
        self.strong: list[np.ndarray] = []
        self._U: list[np.ndarray] = []
        self._Uinv: list[np.ndarray] = []
        self._packed = None

    # -- structure -------------------------------------------------------
    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def orbit_sizes(self) -> list[int]:
        return [len(lv.rows) for lv in self.levels]

    def order(self) -> int:
        return prod(self.orbit_sizes())

    def _add_level(self, point: int) -> None:
        ident = np.arange(self.degree, dtype=np.int32)
        lv = _Level(point)
        lv.rows[point] = self._new_row(ident, ident)
        self.levels.append(lv)
        self._packed = None

    def _new_row(self, u: np.ndarray, uinv: np.ndarray) -> int:
        self._U.append(u)
        self._Uinv.append(uinv)
        return len(self._U) - 1

    def _grow_orbit(self, lv: _Level, new_gens: list[int]) -> None:
        # existing points under the new generators, then everything under all
        queue = [(p, g) for p in list(lv.rows) for g in new_gens]
        all_gens = lv.gens
        while queue:
            p, g = queue.pop()
            s = self.strong[g]
            q = int(s[p])
            if q in lv.rows:
                continue
            u = s[self._U[lv.rows[p]]]
            uinv = np.empty_like(u)
            uinv[u] = np.arange(self.degree, dtype=u.dtype)
            lv.rows[q] = self._new_row(u, uinv)
            queue.extend((q, h) for h in all_gens)
        self._packed = None

    def _add_strong(self, h: np.ndarray, upto: int) -> None:
        """Add ``h`` (fixing the first ``upto`` base points) as a strong generator."""
        if upto == len(self.levels):
            moved = np.flatnonzero(h != np.arange(self.degree))
            self._add_level(min(moved.tolist(), key=self._rank.__getitem__))
        self.strong.append(h.astype(np.int32))
        gi = len(self.strong) - 1
        for lv in self.levels[: upto + 1]:
            lv.gens.append(gi)
            self._grow_orbit(lv, [gi])

    def pack(self):
        if self._packed is None:
            base = np.array(self.base, dtype=np.int64)
            idx = np.full((len(self.levels), self.degree), -1, dtype=np.int64)
            for i, lv in enumerate(self.levels):
                for p, r in lv.rows.items():
                    idx[i, p] = r
            U = np.array(self._U, dtype=np.int32).reshape(-1, self.degree)
            Uinv = np.array(self._Uinv, dtype=np.int32).reshape(-1, self.degree)
            self._packed = (base, idx, U, Uinv)
        return self._packed

    # -- queries -----------------------------------------------------------
    def sift(self, perm) -> tuple[int, np.ndarray]:
        base, idx, _, Uinv = self.pack()
        h = np.asarray(perm, dtype=np.int32)
        if not self.levels:
            return 0, h
        return _sift(h, 0, base, idx, Uinv)

    def contains(self, perm) -> bool:
        arr = _as_array(perm)
        if arr.size != self.degree:
            raise DegreeMismatch(f"degree {arr.size}, chain degree {self.degree}")
        _, res = self.sift(arr)
        return bool(_is_identity(res))

    def stabilizer_order(self, prefix: int) -> int:
        """Order of the stabilizer of the first ``prefix`` base points."""
        return prod(self.orbit_sizes()[prefix:])

    # -- construction --------------------------------------------------------
    def _absorb(self, h: np.ndarray, start: int = 0) -> bool:
        base, idx, _, Uinv = self.pack()
        if self.levels:
            stop, res = _sift(h.astype(np.int32), start, base, idx, Uinv)
        else:
            stop, res = 0, h.astype(np.int32)
        if _is_identity(res):
            return False
        self._add_strong(res, stop)
        return True

    def verify(self) -> int:
        """Certify the chain; returns the number of residues added."""
        added = 0
        lev = len(self.levels) - 1
        while lev >= 0:
            lv = self.levels[lev]
            if lv.gens:
                base, idx, U, Uinv = self.pack()
                gens = np.array([self.strong[g] for g in lv.gens], dtype=np.int32)
                rows = np.array(list(lv.rows.values()), dtype=np.int64)
                stop, _, res = _check_level(lev, gens, rows, base, idx, U, Uinv)
                if stop >= 0:
                    self._add_strong(res, stop)
                    added += 1
                    lev = len(self.levels) - 1
                    continue
            lev -= 1
        return added

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "base": self.base,
            "strong": [s.tolist() for s in self.strong],
            "order": str(self.order()),
        }


def _as_array(perm) -> np.ndarray:
    if isinstance(perm, Permutation):
        return perm.image
    return np.asarray(perm, dtype=np.int64)


def _random_schreier_sims(chain: StabilizerChain, gens: list[np.ndarray], rng, patience: int) -> None:
    for g in gens:
        chain._absorb(g)
    if not chain.strong:
        return
    # product replacement
    pool = [g.astype(np.int32) for g in gens]
    while len(pool) < 10:
        pool.append(pool[len(pool) % len(gens)].copy())
    acc = pool[0].copy()
    for _ in range(50):
        i, j = rng.choice(len(pool), 2, replace=False)
        pool[i] = pool[i][pool[j]]
        acc = acc[pool[i]]
    quiet = 0
    while quiet < patience:
        i, j = rng.choice(len(pool), 2, replace=False)
        pool[i] = pool[i][pool[j]] if rng.random() < 0.5 else pool[j][pool[i]]
        acc = acc[pool[i]]
        quiet = 0 if chain._absorb(acc) else quiet + 1


def build_chain(generators, base_hint=None, seed=0, patience: int = 24, prefix=None) -> StabilizerChain:
    """Certified stabilizer chain of the group generated by ``generators``.

    ``prefix`` forces the first base points (used for pointwise
    stabilizers); the remaining base points follow ``base_hint``.
    """
    arrays = [_as_array(g) for g in generators]
    if not arrays:
        raise ValueError("need at least one generator")
    degree = arrays[0].size
    for a in arrays:
        if a.size != degree:
            raise DegreeMismatch(f"generators of degree {degree} and {a.size}")
    chain = StabilizerChain(degree, base_hint)
    for p in prefix or ():
        chain._add_level(int(p))
    rng = np.random.default_rng(seed)
    _random_schreier_sims(chain, arrays, rng, patience)
    chain.verify()
    return chain


def chain_order(chain: StabilizerChain) -> int:
    return chain.order()


def member(chain: StabilizerChain, perm) -> bool:
    return chain.contains(perm)


def pointwise_stabilizer_order(generators, fixed_points, seed=0, base_hint=None) -> int:
    """Order of the subgroup fixing every point of ``fixed_points``."""
    fixed = sorted({int(p) for p in fixed_points})
    arrays = [_as_array(g) for g in generators]
    degree = arrays[0].size if arrays else 0
    if any(p < 0 or p >= degree for p in fixed):
        raise DegreeMismatch(f"fixed points outside 0..{degree - 1}")
    # points every generator fixes add nothing to the prefix
    moved = np.zeros(degree, dtype=bool)
    for a in arrays:
        moved |= a != np.arange(degree)
    prefix = [p for p in fixed if moved[p]]
    chain = build_chain(arrays, base_hint=base_hint, seed=seed, prefix=prefix)
    return chain.stabilizer_order(len(prefix))


def class_major_order(layout) -> list[int]:
    """Facets listed class by class: corners, edges, wings, center corners, center edges."""
    out: list[int] = []
    for _, slots in layout.classes():
        for s in slots:
            out.extend(int(f) for f in s)
    return out


def generator_key(generators) -> str:
    h = hashlib.sha256()
    for g in generators:
        h.update(np.asarray(_as_array(g), dtype=np.int64).tobytes())
    return h.hexdigest()[:16]


def load_or_build(n: int, generators, cache_dir=None, seed=0, base_hint=None) -> tuple[StabilizerChain, bool]:
    """Build a chain, reusing a cached strong generating set when present.

    A cached set is only a starting point: the chain is rebuilt from it and
    certified again, and its order must match the recorded one.
    """
    cache_dir = cache_dir or os.environ.get("NCUBE_CACHE")
    arrays = [_as_array(g) for g in generators]
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, f"chain-n{n}-{generator_key(arrays)}.json")
        if os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh)
            chain = StabilizerChain(arrays[0].size, base_hint)
            for p in data["base"]:
                chain._add_level(int(p))
            for s in data["strong"]:
                chain._absorb(np.asarray(s, dtype=np.int32))
            # the cached set must generate the same group as the generators
            for a in arrays:
                chain._absorb(a)
            chain.verify()
            if str(chain.order()) == data["order"] and all(chain.contains(a) for a in arrays):
                return chain, True
    chain = build_chain(arrays, base_hint=base_hint, seed=seed)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w") as fh:
            json.dump(chain.to_dict(), fh)
    return chain, False
