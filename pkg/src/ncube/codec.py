"""Labelled states <-> configuration tuples, colour projection and sampling.

Permutation components map a piece's home slot to the slot it occupies now.
Orientation vectors are indexed by piece (home slot):

* corner twist ``x[p]`` is the position of piece ``p``'s reference sticker
  within the cyclic facet order of the slot it sits in;
* edge flip ``z[p]`` and wing flip ``y[k][p]`` are 0 iff the piece's first
  sticker lies on the slot's first facet.

Slot facet orders come from :mod:`ncube.geometry`, so the solved state is the
all-identity, all-zero configuration.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .engine import Permutation
from .errors import ClassNotPreserved, MalformedConfiguration, NotAConfiguration
from .geometry import CENTER_CORNER, CENTER_EDGE, CORNER, EDGE, WING, Layout


class AssemblyModel(str, Enum):
    STICKER = "sticker"
    MECHANICAL = "mech"


@dataclass
class Configuration:
    n: int
    sigma: list
    x: list
    tau_k: list = field(default_factory=list)
    y: list = field(default_factory=list)
    rho_c: list = field(default_factory=list)
    rho_e: list = field(default_factory=list)
    tau: list | None = None
    z: list | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.tau is None:
            del d["tau"], d["z"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Configuration":
        try:
            return cls(
                n=int(d["n"]),
                sigma=list(d["sigma"]),
                x=list(d["x"]),
                tau_k=[list(v) for v in d.get("tau_k", [])],
                y=[list(v) for v in d.get("y", [])],
                rho_c=[list(v) for v in d.get("rho_c", [])],
                rho_e=[list(v) for v in d.get("rho_e", [])],
                tau=list(d["tau"]) if d.get("tau") is not None else None,
                z=list(d["z"]) if d.get("z") is not None else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedConfiguration(f"bad configuration record: {exc}") from None


def initial(layout: Layout) -> Configuration:
    K = layout.K
    ident = lambda m: list(range(m))  # noqa: E731
    return Configuration(
        n=layout.n,
        sigma=ident(8),
        x=[0] * 8,
        tau_k=[ident(24) for _ in range(K)],
        y=[[0] * 24 for _ in range(K)],
        rho_c=[ident(24) for _ in range(K)],
        rho_e=[ident(layout.z(k)) for k in range(1, K + 1)],
        tau=ident(12) if layout.odd else None,
        z=[0] * 12 if layout.odd else None,
    )


def _check_perm(values, size: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.shape != (size,) or not np.array_equal(np.sort(arr), np.arange(size)):
        raise MalformedConfiguration(f"{name} is not a permutation of {size} slots")
    return arr


def _check_vec(values, size: int, mod: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.shape != (size,) or arr.size and (arr.min() < 0 or arr.max() >= mod):
        raise MalformedConfiguration(f"{name} must hold {size} values in 0..{mod - 1}")
    return arr


def check_shape(config: Configuration, layout: Layout) -> None:
    """Raise :class:`MalformedConfiguration` unless ``config`` fits ``layout``."""
    if config.n != layout.n:
        raise MalformedConfiguration(f"configuration for n={config.n}, layout for n={layout.n}")
    K = layout.K
    _check_perm(config.sigma, 8, "sigma")
    _check_vec(config.x, 8, 3, "x")
    if layout.odd:
        if config.tau is None or config.z is None:
            raise MalformedConfiguration("odd cubes need tau and z")
        _check_perm(config.tau, 12, "tau")
        _check_vec(config.z, 12, 2, "z")
    elif config.tau is not None or config.z is not None:
        raise MalformedConfiguration("even cubes have no single edges")
    for name in ("tau_k", "y", "rho_c", "rho_e"):
        if len(getattr(config, name)) != K:
            raise MalformedConfiguration(f"{name} needs one entry per circle ({K})")
    for k in range(1, K + 1):
        _check_perm(config.tau_k[k - 1], 24, f"tau_{k}")
        _check_vec(config.y[k - 1], 24, 2, f"y_{k}")
        _check_perm(config.rho_c[k - 1], 24, f"rho_c{k}")
        _check_perm(config.rho_e[k - 1], layout.z(k), f"rho_e{k}")


# ---------------------------------------------------------------- extraction


def _owner(layout: Layout, slots) -> np.ndarray:
    owner = np.full(layout.g, -1, dtype=np.int64)
    for i, s in enumerate(slots):
        owner[list(s)] = i
    return owner


@lru_cache(maxsize=None)
def _tables(layout: Layout):
    """Slot facet arrays and facet -> slot maps for every class."""
    out = {}
    for cid, slots in layout.classes():
        arr = np.array(slots, dtype=np.int64).reshape(len(slots), -1)
        arr.setflags(write=False)
        out[cid] = (arr, _owner(layout, slots))
    return out


def _oriented(img: np.ndarray, slots: np.ndarray, owner: np.ndarray, what: str):
    """Positions and orientations of multi-facet pieces."""
    homes = img[slots]  # homes[q, j]: home facet of the sticker on facet j of slot q
    m, w = slots.shape
    piece = owner[homes[:, 0]]
    if (piece < 0).any():
        raise NotAConfiguration(f"{what}: slot holds a sticker from another class")
    perm = np.full(m, -1, dtype=np.int64)
    orient = np.zeros(m, dtype=np.int64)
    for q in range(m):
        p = piece[q]
        if perm[p] >= 0:
            raise NotAConfiguration(f"{what}: piece {p} appears twice")
        ref = slots[p, 0]
        hits = np.flatnonzero(homes[q] == ref)
        if hits.size != 1:
            raise NotAConfiguration(f"{what}: slot {q} mixes stickers of different pieces")
        o = int(hits[0])
        # the remaining stickers must follow in cyclic order
        if any(homes[q, (o + j) % w] != slots[p, j] for j in range(w)):
            raise NotAConfiguration(f"{what}: slot {q} holds a mirrored or mixed piece")
        perm[p] = q
        orient[p] = o
    return perm, orient


def _centers(img: np.ndarray, slots: np.ndarray, owner: np.ndarray, what: str) -> np.ndarray:
    piece = owner[img[slots[:, 0]]]
    if (piece < 0).any():
        raise NotAConfiguration(f"{what}: slot holds a sticker from another class")
    perm = np.full(len(slots), -1, dtype=np.int64)
    perm[piece] = np.arange(len(slots))
    if (perm < 0).any():
        raise NotAConfiguration(f"{what}: a piece appears twice")
    return perm


def extract(state: Permutation, layout: Layout) -> Configuration:
    """Read the configuration tuple off a labelled state."""
    img = np.asarray(state.image if isinstance(state, Permutation) else state, dtype=np.int64)
    if img.shape != (layout.g,):
        raise NotAConfiguration(f"state has {img.size} facets, expected {layout.g}")
    fixed = list(layout.fixed_centers)
    if fixed and not np.array_equal(img[fixed], fixed):
        raise NotAConfiguration("fixed centers moved")
    t = _tables(layout)
    sigma, x = _oriented(img, *t[(CORNER, 0)], "corners")
    cfg = initial(layout)
    cfg.sigma, cfg.x = sigma.tolist(), x.tolist()
    if layout.odd:
        tau, z = _oriented(img, *t[(EDGE, 0)], "edges")
        cfg.tau, cfg.z = tau.tolist(), z.tolist()
    for k in range(1, layout.K + 1):
        tk, yk = _oriented(img, *t[(WING, k)], f"wings {k}")
        cfg.tau_k[k - 1], cfg.y[k - 1] = tk.tolist(), yk.tolist()
        cfg.rho_c[k - 1] = _centers(img, *t[(CENTER_CORNER, k)], f"center corners {k}").tolist()
        if layout.z(k):
            cfg.rho_e[k - 1] = _centers(img, *t[(CENTER_EDGE, k)], f"center edges {k}").tolist()
    return cfg


def is_configuration(state: Permutation, layout: Layout) -> bool:
    try:
        extract(state, layout)
    except (NotAConfiguration, ClassNotPreserved):
        return False
    return True


# ---------------------------------------------------------------- assembly


def _place(img: np.ndarray, slots: np.ndarray, perm, orient) -> None:
    w = slots.shape[1]
    perm = np.asarray(perm, dtype=np.int64)
    orient = np.asarray(orient, dtype=np.int64)
    for j in range(w):
        # reference sticker at slot position orient, the rest follow cyclically
        img[slots[perm, (orient + j) % w]] = slots[:, j]


def assemble(config: Configuration, layout: Layout) -> Permutation:
    """Build the labelled state of a configuration; inverse of :func:`extract`."""
    check_shape(config, layout)
    img = np.arange(layout.g, dtype=np.int64)
    t = _tables(layout)
    _place(img, t[(CORNER, 0)][0], config.sigma, config.x)
    if layout.odd:
        _place(img, t[(EDGE, 0)][0], config.tau, config.z)
    for k in range(1, layout.K + 1):
        _place(img, t[(WING, k)][0], config.tau_k[k - 1], config.y[k - 1])
        cc = t[(CENTER_CORNER, k)][0][:, 0]
        img[cc[np.asarray(config.rho_c[k - 1], dtype=np.int64)]] = cc
        if layout.z(k):
            ce = t[(CENTER_EDGE, k)][0][:, 0]
            img[ce[np.asarray(config.rho_e[k - 1], dtype=np.int64)]] = ce
    return Permutation(img, check=False)


def compose(a: Configuration, b: Configuration, layout: Layout) -> Configuration:
    """Configuration of ``assemble(a) * assemble(b)``, computed componentwise.

    Positions compose as ``pi_ab = pi_b o pi_a``; orientations add up along
    the way: ``o_ab[p] = o_a[p] + o_b[pi_a[p]]``.
    """

    def perm(pa, pb):
        return np.asarray(pb, dtype=np.int64)[np.asarray(pa, dtype=np.int64)].tolist()

    def orient(oa, ob, pa, mod):
        pa = np.asarray(pa, dtype=np.int64)
        return ((np.asarray(oa) + np.asarray(ob)[pa]) % mod).tolist()

    out = initial(layout)
    out.sigma = perm(a.sigma, b.sigma)
    out.x = orient(a.x, b.x, a.sigma, 3)
    if layout.odd:
        out.tau = perm(a.tau, b.tau)
        out.z = orient(a.z, b.z, a.tau, 2)
    for i in range(layout.K):
        out.tau_k[i] = perm(a.tau_k[i], b.tau_k[i])
        out.y[i] = orient(a.y[i], b.y[i], a.tau_k[i], 2)
        out.rho_c[i] = perm(a.rho_c[i], b.rho_c[i])
        out.rho_e[i] = perm(a.rho_e[i], b.rho_e[i])
    return out


# ---------------------------------------------------------------- colours


def observable(state: Permutation, layout: Layout, color_scheme=None) -> np.ndarray:
    """Colour of every facet: the colour of the face its sticker belongs to."""
    img = np.asarray(state.image if isinstance(state, Permutation) else state, dtype=np.int64)
    faces = img // (layout.n * layout.n)
    if color_scheme is None:
        return faces
    return np.asarray(color_scheme, dtype=np.int64)[faces]


# ---------------------------------------------------------------- sampling


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def wing_types(layout: Layout, k: int) -> np.ndarray:
    """1 for a-slots and 0 for b-slots of circle ``k``."""
    return np.array([w.type == "a" for w in layout.wing_slots[k]], dtype=np.int64)


def forced_wing_flips(layout: Layout, k: int, tau_k) -> list:
    """The flips ``y`` that make condition 5 hold for wing positions ``tau_k``."""
    t = wing_types(layout, k)
    return (t[np.asarray(tau_k)] != t).astype(np.int64).tolist()


def sample_configuration(layout: Layout, model=AssemblyModel.STICKER, seed=None) -> Configuration:
    """Uniform random assembly under the given model."""
    model = AssemblyModel(model)
    rng = _rng(seed)
    cfg = initial(layout)
    cfg.sigma = rng.permutation(8).tolist()
    cfg.x = rng.integers(0, 3, 8).tolist()
    if layout.odd:
        cfg.tau = rng.permutation(12).tolist()
        cfg.z = rng.integers(0, 2, 12).tolist()
    for k in range(1, layout.K + 1):
        tk = rng.permutation(24)
        cfg.tau_k[k - 1] = tk.tolist()
        if model is AssemblyModel.STICKER:
            cfg.y[k - 1] = rng.integers(0, 2, 24).tolist()
        else:
            cfg.y[k - 1] = forced_wing_flips(layout, k, tk)
        cfg.rho_c[k - 1] = rng.permutation(24).tolist()
        cfg.rho_e[k - 1] = rng.permutation(layout.z(k)).tolist()
    return cfg


def parity_bits(perms: np.ndarray) -> np.ndarray:
    """Row-wise parity (0 even, 1 odd) of a batch of permutations."""
    perms = np.asarray(perms)
    m = perms.shape[1]
    inv = np.zeros(perms.shape[0], dtype=np.int64)
    for i in range(m - 1):
        inv += (perms[:, i : i + 1] > perms[:, i + 1 :]).sum(axis=1)
    return inv & 1


def sample_observable_batch(layout: Layout, model, size: int, rng) -> dict:
    """Vectorised batch of random assemblies reduced to what colours reveal.

    Returns arrays keyed ``sigma_parity``, ``tau_parity``, ``x_sum``,
    ``z_sum`` and ``pairs_ok`` (all wing pairs admit a labelling satisfying
    condition 5).  Centers carry no information: same-coloured labels can
    always be relabelled to fix their signs.  Center pieces are assumed to
    stay inside their own 24-facet orbit, which only restricts anything for
    n >= 6.
    """
    model = AssemblyModel(model)
    rng = _rng(rng)
    out = {
        "sigma_parity": parity_bits(rng.permuted(np.tile(np.arange(8), (size, 1)), axis=1)),
        "x_sum": rng.integers(0, 3, (size, 8)).sum(axis=1) % 3,
    }
    if layout.odd:
        out["tau_parity"] = parity_bits(rng.permuted(np.tile(np.arange(12), (size, 1)), axis=1))
        out["z_sum"] = rng.integers(0, 2, (size, 12)).sum(axis=1) % 2
    ok = np.ones(size, dtype=bool)
    for k in range(1, layout.K + 1):
        if model is AssemblyModel.MECHANICAL:
            continue
        t = wing_types(layout, k)
        tk = rng.permuted(np.tile(np.arange(24), (size, 1)), axis=1)
        y = rng.integers(0, 2, (size, 24))
        miss = y ^ (t[tk] != t)
        partner = np.array([w.partner for w in layout.wing_slots[k]])
        ok &= (miss == miss[:, partner]).all(axis=1)
    out["pairs_ok"] = ok
    return out


# ---------------------------------------------------------------- state files


def state_to_dict(state: Permutation, layout: Layout) -> dict:
    return {"n": layout.n, "kind": "labelled", "faces": "ULFRBD", "facets": state.tolist()}


def color_to_dict(colors, layout: Layout) -> dict:
    return {"n": layout.n, "kind": "color", "faces": "ULFRBD", "facets": np.asarray(colors).tolist()}
