"""Executable checks of the structural claims about the n-cube group.

Each suite returns a :class:`Report`.  Checks marked ``hard`` decide whether
the suite passes; soft checks are observations about generalised families.
Every expected value carries a provenance tag: ``paper`` for published
constants quoted for that exact instance, ``derived`` for values computed
from the piece-orbit structure.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, sqrt

import numpy as np

from . import bsgs, codec, counting, engine, law, notation
from .codec import AssemblyModel
from .errors import NotApplicable
from .geometry import (
    CENTER_CORNER,
    CENTER_EDGE,
    CORNER,
    EDGE,
    TYPE_PRESERVING_FACES,
    WING,
    Layout,
    build_layout,
    typing_components,
    wing_handedness,
    wing_position_actions,
)

PAPER = "paper"
DERIVED = "derived"


@dataclass
class Check:
    claim: str
    expected: object
    observed: object
    passed: bool
    provenance: str = DERIVED
    hard: bool = True


@dataclass
class Report:
    suite: str
    n: int
    seed: int | None = None
    trials: int | None = None
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.hard)

    def check(self, claim, expected, observed, provenance=DERIVED, hard=True, passed=None) -> Check:
        ok = expected == observed if passed is None else passed
        c = Check(claim, expected, observed, bool(ok), provenance, hard)
        self.checks.append(c)
        return c

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.hard and not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "n": self.n,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "checks": [
                {
                    "claim": c.claim,
                    "expected": _jsonable(c.expected),
                    "observed": _jsonable(c.observed),
                    "pass": c.passed,
                    "provenance": c.provenance,
                    "hard": c.hard,
                }
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(v):
    if isinstance(v, dict):
        return {_key(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int) and abs(v) > 2**53:
        return str(v)
    return v


def _key(k):
    if isinstance(k, tuple):
        return ":".join(str(x) for x in k)
    return str(k)


def _class_name(cid) -> str:
    kind, k = cid
    return kind if k == 0 else f"{kind}:{k}"


# ---------------------------------------------------------------- named moves

# (n, name) -> expected single 3-cycle class, or "parity" with its wing circle
NAMED_CLAIMS = {
    (5, "z"): (CENTER_CORNER, 1),
    (5, "e"): (WING, 1),
    (5, "w"): (CENTER_EDGE, 1),
    (6, "z1"): (CENTER_CORNER, 1),
    (6, "z2"): (CENTER_CORNER, 2),
    (6, "p"): (CENTER_EDGE, 2),
    (6, "e1"): (WING, 1),
    (6, "e2"): (WING, 2),
    (6, "m"): ("parity", 1),
    (6, "n2"): ("parity", 2),
}

FAMILY_CLASS = {"z": CENTER_CORNER, "e": WING, "w": CENTER_EDGE}


def _three_cycle_check(report, layout, label, word, target, hard, provenance):
    perm = engine.compile(layout, word)
    observed = {_class_name(c): v for c, v in engine.cycle_structure(perm, layout).items()}
    expected = {_class_name(target): [3]}
    report.check(f"{label} is one 3-cycle on {_class_name(target)} only", expected, observed, provenance, hard)


def _parity_check(report, layout, label, word, k, hard, provenance):
    perm = engine.compile(layout, word)
    observed = {_class_name(c): engine.sign_on_class(perm, layout, c) for c, _ in layout.classes()}
    expected = {name: (-1 if name == _class_name((WING, k)) else 1) for name in observed}
    report.check(f"{label} is odd on wing circle {k} and even elsewhere", expected, observed, provenance, hard)


def verify_named_moves(n: int) -> Report:
    layout = build_layout(n)
    report = Report("named-moves", n)
    for (size, name), target in NAMED_CLAIMS.items():
        if size != n:
            continue
        word = notation.named_move(name, n)
        if target[0] == "parity":
            _parity_check(report, layout, name, word, target[1], True, PAPER)
        else:
            _three_cycle_check(report, layout, name, word, target, True, PAPER)
    # generalised families: observations only
    for k in range(1, layout.K + 1):
        for fam, kind in FAMILY_CLASS.items():
            if kind == CENTER_EDGE and not layout.z(k):
                continue
            try:
                word = notation.family_move(fam, k, n)
            except NotApplicable:
                continue
            _three_cycle_check(report, layout, f"{fam}({k})", word, (kind, k), False, DERIVED)
        _parity_check(report, layout, f"parity({k})", notation.family_move("parity", k, n), k, False, DERIVED)
        for i in range(1, layout.K + 1):
            if i != k and layout.z(max(i, k)):
                word = notation.cross_move(i, k, n)
                _three_cycle_check(report, layout, f"p({i},{k})", word, (CENTER_EDGE, max(i, k)), False, DERIVED)
    return report


# ---------------------------------------------------------------- sign table


def expected_sign(layout: Layout, gen, cid) -> int:
    """Sign of a generator on a piece class, from the slab geometry.

    A face turn carries every ring of its face and one row of each
    neighbour; an inner slice only crosses one circle.
    """
    face, g = gen
    kind, k = cid
    odd = layout.odd
    if g == 0:
        if kind in (CORNER, EDGE, CENTER_CORNER):
            return -1
        if kind == WING:
            return 1
        # circle k center edges: 2k-1 four-cycles (odd n) or 2k-2 (even n)
        return -1 if odd else 1
    if kind in (CORNER, EDGE, CENTER_CORNER):
        return 1
    if kind == WING:
        return -1 if k == g else 1
    return -1 if (k == g and odd) else 1


def verify_sign_table(n: int) -> Report:
    layout = build_layout(n)
    report = Report("signs", n)
    for gen in layout.generators:
        perm = engine.generator_permutation(layout, gen)
        for cid, _ in layout.classes():
            observed = engine.sign_on_class(perm, layout, cid)
            label = gen[0] if gen[1] == 0 else f"C{gen[0]}{gen[1]}"
            prov = PAPER if n in (5, 6) else DERIVED
            report.check(f"sign of {label} on {_class_name(cid)}", expected_sign(layout, gen, cid), observed, prov)
    return report


# ---------------------------------------------------------------- law


def random_word(layout: Layout, rng, lo: int = 20, hi: int = 200) -> engine.Permutation:
    gens = engine.generators(layout)
    length = int(rng.integers(lo, hi + 1))
    img = np.arange(layout.g)
    for i in rng.integers(0, len(gens), size=length):
        img = img[gens[i].image]
    return engine.Permutation(img, check=False)


def _swap(values, i, j):
    values = list(values)
    values[i], values[j] = values[j], values[i]
    return values


def _orbit_pair(layout: Layout, kind: str, k: int) -> tuple[int, int]:
    for key, circle, knd, idx in law.orbit_indices(layout):
        if knd == kind and circle == k:
            return int(idx[0]), int(idx[1])
    raise ValueError((kind, k))


def mutations(layout: Layout) -> dict:
    """One targeted mutation per applicable condition: ``{condition: fn}``."""
    out = {}
    odd, K = layout.odd, layout.K

    def rho_swap(name, kind, k):
        i, j = _orbit_pair(layout, kind, k)

        def fn(c):
            rows = [list(r) for r in getattr(c, name)]
            rows[k - 1] = _swap(rows[k - 1], i, j)
            setattr(c, name, rows)

        return fn

    def x_twist(c):
        c.x = [(c.x[0] + 1) % 3] + list(c.x[1:])

    def y_flip(c):
        rows = [list(r) for r in c.y]
        rows[0][0] ^= 1
        c.y = rows

    if odd:
        if K:
            out["1"] = rho_swap("rho_c", CENTER_CORNER, 1)
            out["2"] = rho_swap("rho_e", CENTER_EDGE, 1)
        else:
            out["1"] = lambda c: setattr(c, "tau", _swap(c.tau, 0, 1))
        out["3"] = x_twist

        def z_flip(c):
            c.z = [c.z[0] ^ 1] + list(c.z[1:])

        out["4"] = z_flip
        if K:
            out["5"] = y_flip
    else:
        out["1"] = rho_swap("rho_c", CENTER_CORNER, 1)
        out["2"] = x_twist
        out["3"] = y_flip
        if K >= 2:
            out["4"] = rho_swap("rho_e", CENTER_EDGE, 2)
    return out


def mutate(config: codec.Configuration, layout: Layout, condition: str) -> codec.Configuration:
    c = codec.Configuration.from_dict(config.to_dict())
    mutations(layout)[condition](c)
    return c


def verify_law_preservation(n: int, trials: int = 1000, seed: int = 0) -> Report:
    layout = build_layout(n)
    report = Report("law", n, seed, trials)
    rng = np.random.default_rng(seed)
    paper_ok = complete_ok = 0
    base = None
    for _ in range(trials):
        cfg = codec.extract(random_word(layout, rng), layout)
        paper_ok += law.validate(cfg, layout).valid
        complete_ok += law.validate(cfg, layout, complete=True).valid
        base = cfg
    report.check("random scrambles satisfy every condition", trials, paper_ok, PAPER)
    report.check("random scrambles satisfy the orbit-complete law", trials, complete_ok, DERIVED)
    base = base or codec.initial(layout)
    for cond in mutations(layout):
        failed = law.validate(mutate(base, layout, cond), layout).failed()
        report.check(f"mutation aimed at condition {cond} breaks exactly that condition", [cond], failed, PAPER)
    return report


# ---------------------------------------------------------------- typing


def verify_wing_typing(n: int) -> Report:
    layout = build_layout(n)
    report = Report("typing", n)
    actions = wing_position_actions(layout)
    if not layout.K:
        report.check("no wings, nothing to type", 0, len(layout.wing_slots), DERIVED)
    for k in range(1, layout.K + 1):
        slots = layout.wing_slots[k]
        types = [w.type for w in slots]
        report.check(f"circle {k}: constraint graph is connected", 1, typing_components(layout, k))
        report.check(f"circle {k}: 12 a-slots and 12 b-slots", 12, types.count("a"))
        straddle = all(types[i] != types[w.partner] for i, w in enumerate(slots))
        report.check(f"circle {k}: every pair has one a and one b slot", True, straddle)
        for gen, action in actions[k].items():
            keep = gen[1] == 0 and gen[0] in TYPE_PRESERVING_FACES
            ok = all((types[i] == types[j]) == keep for i, j in action.items())
            label = gen[0] if gen[1] == 0 else f"C{gen[0]}{gen[1]}"
            verb = "keeps" if keep else "swaps"
            report.check(f"circle {k}: {label} {verb} slot types", True, ok, PAPER if n == 5 else DERIVED)
        hand = wing_handedness(layout, k)
        same = len({(t, h) for t, h in zip(types, hand)}) == 2
        report.check(f"circle {k}: types coincide with slot chirality", True, same, DERIVED, hard=False)
    return report


# ---------------------------------------------------------------- membership


def repair(config: codec.Configuration, layout: Layout, rng=None) -> codec.Configuration:
    """Adjust a random configuration until it satisfies the orbit-complete law."""
    c = codec.Configuration.from_dict(config.to_dict())
    c.x = list(c.x[:7]) + [(-sum(c.x[:7])) % 3]
    if layout.odd:
        c.z = list(c.z[:11]) + [sum(c.z[:11]) % 2]
        if law._sgn(c.tau) != law._sgn(c.sigma):
            c.tau = _swap(c.tau, 0, 1)
    for k in range(1, layout.K + 1):
        c.y[k - 1] = codec.forced_wing_flips(layout, k, c.tau_k[k - 1])
    # centers: keep each orbit inside itself, then fix its sign
    sigma_bit = law._bit(law._sgn(c.sigma))
    wing_bits = {k: law._bit(law._sgn(c.tau_k[k - 1])) for k in range(1, layout.K + 1)}
    rng = np.random.default_rng(rng)
    rows = {"c": [list(r) for r in c.rho_c], "e": [list(r) for r in c.rho_e]}
    for key, k, kind, idx in law.orbit_indices(layout):
        row = rows["c" if kind == CENTER_CORNER else "e"][k - 1]
        local = rng.permutation(len(idx))
        if law._bit(law._sgn(local)) != law.orbit_sign_bit(key, sigma_bit, wing_bits):
            local[[0, 1]] = local[[1, 0]]
        for a, b in zip(idx, idx[local]):
            row[a] = int(b)
    c.rho_c, c.rho_e = rows["c"], rows["e"]
    return c


def mixed_configurations(layout: Layout, trials: int, seed: int):
    """Yield ``(kind, config)``: scrambles, sticker samples, repaired samples and near misses."""
    rng = np.random.default_rng(seed)
    conds = list(mutations(layout))
    kinds = ["word", "sticker", "repaired", "near-miss"]
    split = _split_class(layout)
    if split:
        kinds.append("cross-orbit")
    for i in range(trials):
        kind = kinds[i % len(kinds)]
        if kind == "word":
            yield kind, codec.extract(random_word(layout, rng), layout)
            continue
        cfg = codec.sample_configuration(layout, AssemblyModel.STICKER, rng)
        if kind == "sticker":
            yield kind, cfg
            continue
        cfg = repair(cfg, layout, rng)
        if kind == "near-miss":
            cfg = mutate(cfg, layout, conds[int(rng.integers(len(conds)))])
        elif kind == "cross-orbit":
            # two swaps between orbits of one class keep every class sign
            k, a, b = split
            row = list(cfg.rho_e[k - 1])
            row[a[0]], row[b[0]] = row[b[0]], row[a[0]]
            row[a[1]], row[b[1]] = row[b[1]], row[a[1]]
            cfg.rho_e = [list(r) for r in cfg.rho_e]
            cfg.rho_e[k - 1] = row
        yield kind, cfg


def _split_class(layout: Layout):
    """A center-edge circle made of several orbits, with index pairs from two of them."""
    by_circle: dict = {}
    for key, k, kind, idx in law.orbit_indices(layout):
        if kind == CENTER_EDGE:
            by_circle.setdefault(k, []).append(idx)
    for k, groups in sorted(by_circle.items()):
        if len(groups) >= 2:
            return k, groups[0][:2].tolist(), groups[1][:2].tolist()
    return None


def cross_validate_membership(n: int, trials: int = 200, seed: int = 0, chain=None) -> Report:
    layout = build_layout(n)
    report = Report("membership", n, seed, trials)
    if chain is None:
        chain = bsgs.build_chain(engine.generators(layout), bsgs.class_major_order(layout), seed=seed)
    agree = agree_complete = 0
    tally: dict = {}
    for kind, cfg in mixed_configurations(layout, trials, seed):
        inside = chain.contains(codec.assemble(cfg, layout))
        agree += law.validate(cfg, layout).valid == inside
        agree_complete += law.validate(cfg, layout, complete=True).valid == inside
        t = tally.setdefault(kind, [0, 0])
        t[0] += 1
        t[1] += inside
    report.check("solved state is a member and valid", True, chain.contains(engine.solved(layout)), DERIVED)
    report.check("validate agrees with chain membership", trials, agree, DERIVED, hard=layout.n < 6)
    report.check("orbit-complete validate agrees with chain membership", trials, agree_complete, DERIVED)
    report.check("sample mix (kind: [count, members])", None, tally, DERIVED, hard=False, passed=True)
    return report


# ---------------------------------------------------------------- subgroups


# published stabilizer orders for the two sizes with quoted values
PAPER_SUBGROUPS = {
    5: {
        (CORNER, 0): factorial(8) * 3**7 // 2,
        (EDGE, 0): factorial(12) * 2**10,
        (WING, 1): factorial(24) // 2,
        (CENTER_CORNER, 1): factorial(24) // 2,
        (CENTER_EDGE, 1): factorial(24) // 2,
    },
    6: {
        (WING, 1): factorial(24),
        (WING, 2): factorial(24),
        (CENTER_EDGE, 2): factorial(48) // 2,
    },
}


def derived_subgroup_order(layout: Layout, cid) -> int:
    kind, k = cid
    if kind == CORNER:
        return factorial(8) * 3**7 // 2
    if kind == EDGE:
        return factorial(12) * 2**10
    if kind in (WING, CENTER_CORNER):
        return factorial(24) // 2
    orbits = sum(1 for o in layout.center_orbits if o.kind == CENTER_EDGE and o.circle == k)
    return (factorial(24) // 2) ** orbits


def verify_subgroup_orders(n: int, seed: int = 0) -> Report:
    layout = build_layout(n)
    report = Report("subgroups", n, seed)
    gens = engine.generators(layout)
    hint = bsgs.class_major_order(layout)
    every = set(range(layout.g))
    paper = PAPER_SUBGROUPS.get(n, {})
    for cid, slots in layout.classes():
        keep = {f for s in slots for f in s}
        order = bsgs.pointwise_stabilizer_order(gens, every - keep, seed=seed, base_hint=hint)
        name = _class_name(cid)
        if cid in paper:
            report.check(f"{name}: order of the subgroup moving only this class", paper[cid], order, PAPER)
        report.check(
            f"{name}: orbit-structure prediction",
            derived_subgroup_order(layout, cid),
            order,
            DERIVED,
            hard=cid not in paper,
        )
    return report


# ---------------------------------------------------------------- estimates

CHUNK = 1_000_000


def acceptance_mask(batch: dict, odd: bool) -> np.ndarray:
    ok = (batch["x_sum"] == 0) & batch["pairs_ok"]
    if odd:
        ok &= (batch["sigma_parity"] == batch["tau_parity"]) & (batch["z_sum"] == 0)
    return ok


def estimate_probability(n: int, model=AssemblyModel.STICKER, samples: int = 1_000_000, seed: int = 0) -> Report:
    layout = build_layout(n)
    model = AssemblyModel(model)
    report = Report("estimate", n, seed, samples)
    chunks = -(-samples // CHUNK)
    streams = np.random.SeedSequence(seed).spawn(chunks)
    hits = 0
    for i, ss in enumerate(streams):
        size = min(CHUNK, samples - i * CHUNK)
        batch = codec.sample_observable_batch(layout, model, size, np.random.default_rng(ss))
        hits += int(acceptance_mask(batch, layout.odd).sum())
    exact = counting.solvability_probability(n, model.value)
    p = float(exact)
    est = hits / samples
    sigma = sqrt(p * (1 - p) / samples)
    report.check(
        f"{model.value} acceptance within 3 sigma of {exact}",
        {"p": str(exact), "band": [p - 3 * sigma, p + 3 * sigma]},
        {"hits": hits, "estimate": est, "z": (est - p) / sigma if sigma else 0.0},
        PAPER if n == 5 else DERIVED,
        passed=abs(est - p) <= 3 * sigma,
    )
    return report


# ---------------------------------------------------------------- dispatch

SUITES = ("named-moves", "signs", "law", "typing", "membership", "subgroups")


def run_suite(name: str, n: int, seed: int = 0, trials: int | None = None) -> list[Report]:
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, n, seed, trials)]
    if name == "named-moves":
        return [verify_named_moves(n)]
    if name == "signs":
        return [verify_sign_table(n)]
    if name == "law":
        return [verify_law_preservation(n, trials or 1000, seed)]
    if name == "typing":
        return [verify_wing_typing(n)]
    if name == "membership":
        return [cross_validate_membership(n, trials or 200, seed)]
    if name == "subgroups":
        return [verify_subgroup_orders(n, seed)]
    raise ValueError(f"unknown suite {name!r}")
