"""Validity of configurations and solvability of colour-only states.

``validate`` checks the solvability conditions on a labelled configuration:

odd n
    1. sgn sigma = sgn tau = sgn rho_c[k] for every circle k
    2. sgn tau_k = sgn sigma * sgn rho_e[k] for every circle k
    3. sum(x) = 0 mod 3
    4. sum(z) = 0 mod 2
    5. every wing is flipped iff its type differs from its slot's type

even n
    1. sgn sigma = sgn rho_c[k] for every circle k
    2. sum(x) = 0 mod 3
    3. the wing flip rule of odd condition 5
    4. sgn rho_e[k] = +1 for 2 <= k <= K

From n = 6 (even) and n = 7 (odd) on, a circle's center edges fall into
several orbits of 24 that no move mixes.  ``complete=True`` adds the two
conditions this needs: centers stay in their orbit, and each orbit's sign
is sgn sigma times sgn tau_k for every circle k that matches exactly one of
the orbit's two ring coordinates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .codec import AssemblyModel, Configuration, check_shape, extract, wing_types
from .engine import Permutation, parity_sign
from .errors import IllegalColorMultiset
from .geometry import CENTER_CORNER, FACES, Layout, rotation_move

ODD_CONDITIONS = {
    "1": "sgn(sigma) = sgn(tau) = sgn(rho_c[k])",
    "2": "sgn(tau_k) = sgn(sigma) sgn(rho_e[k])",
    "3": "sum(x) = 0 mod 3",
    "4": "sum(z) = 0 mod 2",
    "5": "y = 1 - delta(slot type, wing type)",
}
EVEN_CONDITIONS = {
    "1": "sgn(sigma) = sgn(rho_c[k])",
    "2": "sum(x) = 0 mod 3",
    "3": "y = 1 - delta(slot type, wing type)",
    "4": "sgn(rho_e[k]) = +1 for k >= 2",
}
ORBIT_CONDITIONS = {
    "orbits": "centers stay in their 24-facet orbit",
    "orbit-signs": "sign of every center orbit",
}


@dataclass
class ConditionResult:
    id: str
    passed: bool
    detail: str = ""


@dataclass
class Verdict:
    conditions: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failed(self) -> list[str]:
        return [c.id for c in self.conditions if not c.passed]

    def add(self, cid: str, passed, detail: str = "") -> None:
        self.conditions.append(ConditionResult(cid, bool(passed), detail))

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "conditions": [{"id": c.id, "pass": c.passed, "detail": c.detail} for c in self.conditions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _sgn(perm) -> int:
    return parity_sign(np.asarray(perm, dtype=np.int64))


def _bit(sign: int) -> int:
    return 0 if sign == 1 else 1


def _wing_rule(config: Configuration, layout: Layout) -> tuple[bool, str]:
    for k in range(1, layout.K + 1):
        t = wing_types(layout, k)
        tk = np.asarray(config.tau_k[k - 1])
        want = (t[tk] != t).astype(np.int64)
        bad = np.flatnonzero(np.asarray(config.y[k - 1]) != want)
        if bad.size:
            return False, f"circle {k}: wings {bad.tolist()} have the wrong flip"
    return True, ""


@lru_cache(maxsize=None)
def orbit_indices(layout: Layout) -> tuple:
    """``(key, circle, kind, indices)`` for every center orbit.

    ``indices`` are positions inside ``rho_c[k]`` or ``rho_e[k]``.
    """
    out = []
    for orb in layout.center_orbits:
        k = orb.circle
        slots = layout.center_corner_slots[k] if orb.kind == CENTER_CORNER else layout.center_edge_slots[k]
        where = {f: i for i, f in enumerate(slots)}
        idx = np.array(sorted(where[f] for f in orb.facets), dtype=np.int64)
        idx.setflags(write=False)
        out.append((orb.key, k, orb.kind, idx))
    return tuple(out)


def orbit_sign_bit(key, sigma_bit: int, wing_bits: dict) -> int:
    """Expected parity bit of a center orbit from the corner and wing parities."""
    bit = sigma_bit
    for k, b in wing_bits.items():
        if (key[0] == k) != (key[1] == k):
            bit ^= b
    return bit


def _orbit_conditions(config: Configuration, layout: Layout, verdict: Verdict) -> None:
    sigma_bit = _bit(_sgn(config.sigma))
    wing_bits = {k: _bit(_sgn(config.tau_k[k - 1])) for k in range(1, layout.K + 1)}
    stray, wrong = [], []
    for key, k, kind, idx in orbit_indices(layout):
        rho = np.asarray(config.rho_c[k - 1] if kind == CENTER_CORNER else config.rho_e[k - 1], dtype=np.int64)
        image = rho[idx]
        if not np.array_equal(np.sort(image), idx):
            stray.append(key)
            continue
        local = np.searchsorted(idx, image)
        if _bit(_sgn(local)) != orbit_sign_bit(key, sigma_bit, wing_bits):
            wrong.append(key)
    verdict.add("orbits", not stray, f"orbits left: {stray}" if stray else "")
    verdict.add("orbit-signs", not wrong, f"orbits with the wrong sign: {wrong}" if wrong else "")


def validate(config: Configuration, layout: Layout, complete: bool = False) -> Verdict:
    """Check every condition; never repairs the configuration."""
    check_shape(config, layout)
    v = Verdict()
    K = layout.K
    s_sigma = _sgn(config.sigma)
    rc = [_sgn(config.rho_c[k]) for k in range(K)]
    re = [_sgn(config.rho_e[k]) for k in range(K)]
    x_sum = sum(config.x) % 3
    wing_ok, wing_detail = _wing_rule(config, layout)
    if layout.odd:
        s_tau = _sgn(config.tau)
        bad1 = [k + 1 for k in range(K) if rc[k] != s_sigma]
        ok1 = s_sigma == s_tau and not bad1
        v.add("1", ok1, "" if ok1 else f"sgn sigma={s_sigma}, sgn tau={s_tau}, circles off: {bad1}")
        bad2 = [k + 1 for k in range(K) if _sgn(config.tau_k[k]) != s_sigma * re[k]]
        v.add("2", not bad2, f"circles off: {bad2}" if bad2 else "")
        v.add("3", x_sum == 0, f"sum(x) = {x_sum} mod 3" if x_sum else "")
        z_sum = sum(config.z) % 2
        v.add("4", z_sum == 0, "sum(z) is odd" if z_sum else "")
        v.add("5", wing_ok, wing_detail)
    else:
        bad1 = [k + 1 for k in range(K) if rc[k] != s_sigma]
        v.add("1", not bad1, f"circles off: {bad1}" if bad1 else "")
        v.add("2", x_sum == 0, f"sum(x) = {x_sum} mod 3" if x_sum else "")
        v.add("3", wing_ok, wing_detail)
        bad4 = [k + 1 for k in range(1, K) if re[k] != 1]
        v.add("4", not bad4, f"odd center edges on circles {bad4}" if bad4 else "")
    if complete:
        _orbit_conditions(config, layout, v)
    return v


def validate_state(state: Permutation, layout: Layout, complete: bool = False) -> Verdict:
    return validate(extract(state, layout), layout, complete)


# ---------------------------------------------------------------- colour states


@dataclass
class _Reading:
    """What a colour state determines about the pieces."""

    sigma: np.ndarray
    x: np.ndarray
    tau: np.ndarray | None
    z: np.ndarray | None
    wings: dict  # k -> (tau_k with an arbitrary pair labelling, y)
    centers_ok: bool
    frame_ok: bool


@lru_cache(maxsize=None)
def _piece_keys(layout: Layout):
    """For every multi-facet class: face tuple of each piece in facet order."""
    n2 = layout.n * layout.n

    def faces(slots):
        return [tuple(int(f) // n2 for f in s) for s in slots]

    out = {"corner": faces(layout.corner_slots), "edge": faces(layout.edge_slots)}
    for k in range(1, layout.K + 1):
        out[("wing", k)] = faces([w.facets for w in layout.wing_slots[k]])
    return out


def _read_oriented(colors, slots, keys, what, allow_pairs=False):
    lookup: dict = {}
    for p, key in enumerate(keys):
        lookup.setdefault(frozenset(key), []).append(p)
    w = len(keys[0])
    perm = np.full(len(keys), -1, dtype=np.int64)
    orient = np.zeros(len(keys), dtype=np.int64)
    for q, s in enumerate(slots):
        seen = tuple(int(colors[f]) for f in s)
        cands = lookup.get(frozenset(seen))
        if not cands or len(set(seen)) != w:
            raise IllegalColorMultiset(f"{what}: no piece has colours {seen}")
        free = [p for p in cands if perm[p] < 0]
        if not free:
            raise IllegalColorMultiset(f"{what}: colours {seen} appear too often")
        p = free[0]
        key = keys[p]
        o = seen.index(key[0])
        if any(seen[(o + j) % w] != key[j] for j in range(w)):
            raise IllegalColorMultiset(f"{what}: slot {q} shows a mirrored piece {seen}")
        perm[p] = q
        orient[p] = o
    return perm, orient


def _read(colors: np.ndarray, layout: Layout) -> _Reading:
    n2 = layout.n * layout.n
    if colors.shape != (layout.g,):
        raise IllegalColorMultiset(f"expected {layout.g} facets, got {colors.size}")
    if colors.min() < 0 or colors.max() > 5 or not (np.bincount(colors, minlength=6) == n2).all():
        raise IllegalColorMultiset("every colour must appear n^2 times")
    keys = _piece_keys(layout)
    sigma, x = _read_oriented(colors, layout.corner_slots, keys["corner"], "corners")
    tau = z = None
    if layout.odd:
        tau, z = _read_oriented(colors, layout.edge_slots, keys["edge"], "edges")
    wings = {}
    for k in range(1, layout.K + 1):
        slots = [w.facets for w in layout.wing_slots[k]]
        wings[k] = _read_oriented(colors, slots, keys[("wing", k)], f"wings {k}")
    centers_ok = True
    for k in range(1, layout.K + 1):
        for cls in (layout.center_corner_slots[k], layout.center_edge_slots[k]):
            if cls and not (np.bincount(colors[list(cls)], minlength=6) == len(cls) // 6).all():
                raise IllegalColorMultiset(f"circle {k}: center colours unbalanced")
    for orb in layout.center_orbits:
        if not (np.bincount(colors[list(orb.facets)], minlength=6) == 4).all():
            centers_ok = False
    frame_ok = all(int(colors[f]) == f // n2 for f in layout.fixed_centers)
    return _Reading(sigma, x, tau, z, wings, centers_ok, frame_ok)


def _pair_misses(layout: Layout, k: int, tau_k, y) -> np.ndarray:
    t = wing_types(layout, k)
    return np.asarray(y) ^ (t[np.asarray(tau_k)] != t)


def _observable_verdict(colors: np.ndarray, layout: Layout, model: AssemblyModel) -> Verdict:
    r = _read(colors, layout)
    v = Verdict()
    if layout.odd:
        v.add("frame", r.frame_ok, "" if r.frame_ok else "fixed centers do not match their faces")
        s1, s2 = parity_sign(r.sigma), parity_sign(r.tau)
        v.add("1", s1 == s2, "" if s1 == s2 else f"sgn sigma={s1}, sgn tau={s2}")
    x_sum = int(r.x.sum()) % 3
    v.add("3" if layout.odd else "2", x_sum == 0, f"sum(x) = {x_sum} mod 3" if x_sum else "")
    if layout.odd:
        z_sum = int(r.z.sum()) % 2
        v.add("4", z_sum == 0, "sum(z) is odd" if z_sum else "")
    wid = "5" if layout.odd else "3"
    if model is AssemblyModel.MECHANICAL:
        v.add(wid, True, "wing flips forced by the mechanism")
    else:
        bad = []
        for k, (tk, y) in r.wings.items():
            miss = _pair_misses(layout, k, tk, y)
            for p, w in enumerate(layout.wing_slots[k]):
                # either labelling works iff both members agree
                if p < w.partner and miss[p] != miss[w.partner]:
                    bad.append((k, p))
        v.add(wid, not bad, f"unsatisfiable wing pairs (circle, wing): {bad}" if bad else "")
    v.add("centers", r.centers_ok, "" if r.centers_ok else "a center orbit has unbalanced colours")
    return v


@lru_cache(maxsize=None)
def frame_rotations(n: int) -> tuple:
    """The 24 whole-cube rotations as destination maps, identity first."""
    ident = np.arange(6 * n * n)
    quarter = [rotation_move(n, f) for f in FACES]
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for d in frontier:
            for q in quarter:
                e = q[d]
                if e.tobytes() not in seen:
                    seen[e.tobytes()] = e
                    nxt.append(e)
        frontier = nxt
    return tuple(seen.values())


def _recolor(colors: np.ndarray, dest: np.ndarray) -> np.ndarray:
    out = np.empty_like(colors)
    out[dest] = colors
    return out


def validate_observable(colors, layout: Layout, model=AssemblyModel.STICKER, up_to_rotation: bool = False) -> Verdict:
    """Solvability of a colour-only state.

    Center labels are invisible, so their sign conditions can always be met
    by swapping two same-coloured labels; only corner, edge and wing
    information remains.
    """
    model = AssemblyModel(model)
    colors = np.asarray(colors, dtype=np.int64)
    verdict = _observable_verdict(colors, layout, model)
    if verdict.valid or not up_to_rotation:
        return verdict
    for dest in frame_rotations(layout.n)[1:]:
        rotated = _recolor(colors, dest)
        try:
            v = _observable_verdict(rotated, layout, model)
        except IllegalColorMultiset:
            continue
        if v.valid:
            v.add("rotation", True, "valid after reorienting the whole cube")
            return v
    return verdict


def compatible_labelling(colors, layout: Layout) -> Permutation:
    """A labelled state showing ``colors`` that is valid whenever any is.

    Wing pairs get the labelling that satisfies the flip rule where one
    exists, and two same-coloured center labels are swapped wherever an
    orbit's sign needs fixing.
    """
    colors = np.asarray(colors, dtype=np.int64)
    r = _read(colors, layout)
    n2 = layout.n * layout.n
    img = np.arange(layout.g, dtype=np.int64)

    def place(slots, keys_slots, perm, orient):
        w = len(slots[0])
        for p, q in enumerate(perm):
            for j in range(w):
                img[slots[q][(orient[p] + j) % w]] = keys_slots[p][j]

    place(layout.corner_slots, layout.corner_slots, r.sigma, r.x)
    if layout.odd:
        place(layout.edge_slots, layout.edge_slots, r.tau, r.z)
    for k, (tk, y) in r.wings.items():
        tk, y = tk.copy(), y.copy()
        miss = _pair_misses(layout, k, tk, y)
        for p, w in enumerate(layout.wing_slots[k]):
            q = w.partner
            if p < q and miss[p] and miss[q]:
                # swapping the labels of identical pieces flips both requirements
                tk[[p, q]] = tk[[q, p]]
                y[[p, q]] = y[[q, p]]
        slots = [s.facets for s in layout.wing_slots[k]]
        place(slots, slots, tk, y)
    # centers: fill each orbit by colour, class-wide when an orbit is unbalanced
    groups = [list(o.facets) for o in layout.center_orbits] if r.centers_ok else [
        list(s) for k in range(1, layout.K + 1) for s in (layout.center_corner_slots[k], layout.center_edge_slots[k]) if s
    ]
    for facets in groups:
        pool = {c: [f for f in facets if f // n2 == c] for c in range(6)}
        for f in facets:
            img[f] = pool[int(colors[f])].pop(0)
    state = Permutation(img, check=False)
    if not r.centers_ok:
        return state
    cfg = extract(state, layout)
    sigma_bit = _bit(_sgn(cfg.sigma))
    wing_bits = {k: _bit(_sgn(cfg.tau_k[k - 1])) for k in range(1, layout.K + 1)}
    for orb, (key, k, kind, idx) in zip(layout.center_orbits, orbit_indices(layout)):
        rho = np.asarray(cfg.rho_c[k - 1] if kind == CENTER_CORNER else cfg.rho_e[k - 1])
        local = np.searchsorted(idx, rho[idx])
        if _bit(_sgn(local)) != orbit_sign_bit(key, sigma_bit, wing_bits):
            c0 = int(colors[orb.facets[0]])
            a, b = [f for f in orb.facets if colors[f] == c0][:2]
            img[a], img[b] = img[b], img[a]
    return Permutation(img, check=False)
