"""Command line interface; every command prints one JSON document.

Exit status: 0 success or valid, 1 invalid verdict or failed suite,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bsgs, codec, counting, engine, harness, law, notation
from .errors import CubeError
from .geometry import FACES, build_layout

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _dump(payload, pretty: bool) -> str:
    return json.dumps(payload, sort_keys=True, indent=2 if pretty else None, ensure_ascii=False)


# ---------------------------------------------------------------- state files


def load_state(path: str):
    """Read a state file; returns ``(layout, kind, facets)``."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        n, kind, facets = int(data["n"]), data["kind"], np.asarray(data["facets"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a state file ({exc})") from None
    if data.get("faces", FACES) != FACES:
        raise InputError(f"{path}: face order must be {FACES}")
    layout = build_layout(n)
    if facets.shape != (layout.g,):
        raise InputError(f"{path}: expected {layout.g} facets, got {facets.size}")
    if kind == "labelled":
        if not np.array_equal(np.sort(facets), np.arange(layout.g)):
            raise InputError(f"{path}: labelled facets must be a permutation")
        return layout, kind, engine.Permutation(facets, check=False)
    if kind == "color":
        return layout, kind, facets
    raise InputError(f"{path}: kind must be 'labelled' or 'color'")


def _write(payload: dict, out: str | None, pretty: bool) -> None:
    text = _dump(payload, pretty)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


# ---------------------------------------------------------------- commands


def cmd_layout(args) -> int:
    layout = build_layout(args.N)
    counts = counting.piece_counts(layout.n)
    payload = {
        "n": layout.n,
        "parity": layout.parity,
        "K": layout.K,
        "c": counts["c"],
        "e": counts["e"],
        "g": counts["g"],
        "z": {str(k): layout.z(k) for k in range(1, layout.K + 1)},
        "classes": {f"{kind}:{k}" if k else kind: len(slots) for (kind, k), slots in layout.classes()},
        "fixed_centers": list(layout.fixed_centers),
        "center_orbits": [{"key": list(o.key), "circle": o.circle, "kind": o.kind} for o in layout.center_orbits],
        "slice_depths": {(f if k == 0 else f"C{f}{k}"): d for (f, k), d in layout.slice_table.items()},
        "wing_types": {str(k): "".join(w.type for w in layout.wing_slots[k]) for k in range(1, layout.K + 1)},
    }
    print(_dump(payload, args.pretty))
    return EXIT_OK


def _perm_summary(layout, perm) -> dict:
    return {
        "cycle_structure": {
            (kind if k == 0 else f"{kind}:{k}"): v for (kind, k), v in engine.cycle_structure(perm, layout).items()
        },
        "signs": {
            (kind if k == 0 else f"{kind}:{k}"): engine.sign_on_class(perm, layout, (kind, k))
            for (kind, k), _ in layout.classes()
        },
        "facets_moved": engine.facet_change_count(perm),
    }


def cmd_named(args) -> int:
    layout = build_layout(args.n)
    word = notation.named_move(args.NAME, args.n)
    payload = {"n": args.n, "name": args.NAME, "word": notation.render(word)}
    payload.update(_perm_summary(layout, engine.compile(layout, word)))
    print(_dump(payload, args.pretty))
    return EXIT_OK


def _tree(node):
    if isinstance(node, notation.Generator):
        return {"gen": node.face, "k": node.k}
    if isinstance(node, notation.Inverse):
        return {"inverse": _tree(node.word)}
    if isinstance(node, notation.Power):
        return {"power": _tree(node.word), "exponent": node.exponent}
    if isinstance(node, notation.Sequence):
        return {"sequence": [_tree(i) for i in node.items]}
    return {"commutator": [_tree(node.left), _tree(node.right)]}


def cmd_parse(args) -> int:
    word = notation.parse(args.WORD)
    print(_dump({"render": notation.render(word), "tree": _tree(word)}, args.pretty))
    return EXIT_OK


def cmd_apply(args) -> int:
    if args.state:
        layout, kind, state = load_state(args.state)
        if layout.n != args.n:
            raise InputError(f"state is for n={layout.n}, --n is {args.n}")
    else:
        layout, kind, state = build_layout(args.n), "labelled", engine.solved(build_layout(args.n))
    perm = engine.compile(layout, args.moves)
    if kind == "labelled":
        payload = codec.state_to_dict(engine.apply(state, perm), layout)
    else:
        payload = codec.color_to_dict(np.asarray(state)[perm.image], layout)
    _write(payload, args.out, args.pretty)
    return EXIT_OK


def _random_moves(layout, length: int, rng) -> str:
    names = [f if k == 0 else f"C{f}" + ("" if k == 1 else str(k)) for f, k in layout.generators]
    picks = rng.integers(0, len(names), size=length)
    return " ".join(names[i] + ("'" if flip else "") for i, flip in zip(picks, rng.integers(0, 2, size=length)))


def cmd_scramble(args) -> int:
    layout = build_layout(args.n)
    moves = _random_moves(layout, args.length, np.random.default_rng(args.seed))
    payload = codec.state_to_dict(engine.compile(layout, moves), layout)
    payload["moves"] = moves
    _write(payload, args.out, args.pretty)
    return EXIT_OK


def cmd_assemble_random(args) -> int:
    layout = build_layout(args.n)
    cfg = codec.sample_configuration(layout, args.model, args.seed)
    payload = codec.state_to_dict(codec.assemble(cfg, layout), layout)
    payload["configuration"] = cfg.to_dict()
    _write(payload, args.out, args.pretty)
    return EXIT_OK


def cmd_check(args) -> int:
    layout, kind, state = load_state(args.state)
    if kind == "color" or args.observable:
        colors = state if kind == "color" else codec.observable(state, layout)
        verdict = law.validate_observable(colors, layout, args.model, args.up_to_rotation)
    else:
        verdict = law.validate(codec.extract(state, layout), layout, complete=args.complete)
    print(_dump(verdict.to_dict(), args.pretty))
    return EXIT_OK if verdict.valid else EXIT_INVALID


COUNTERS = {
    "cardinality": (counting.conf_cardinality, counting.conf_cardinality_factored),
    "orbits": (counting.orbit_count, counting.orbit_count_factored),
    "order": (counting.group_order, counting.group_order_factored),
}


def cmd_count(args) -> int:
    payload = {"n": args.n, "what": args.what}
    if args.what == "probability":
        p = counting.solvability_probability(args.n, args.model)
        payload.update(model=args.model, value=str(p))
    elif args.what == "conditions":
        payload["value"] = str(counting.condition_orbit_count(args.n))
        payload["factors"] = [[name, str(f)] for name, f in counting.condition_factors(args.n)]
    else:
        value, factored = COUNTERS[args.what]
        payload["value"] = str(value(args.n))
        if args.factored:
            payload["factored"] = str(factored(args.n))
    print(_dump(payload, args.pretty))
    return EXIT_OK


def cmd_order(args) -> int:
    layout = build_layout(args.n)
    formula = counting.group_order(args.n)
    payload = {"n": args.n, "formula": str(formula), "factored": str(counting.group_order_factored(args.n))}
    if args.bsgs:
        gens = engine.generators(layout)
        chain, cached = bsgs.load_or_build(
            args.n, gens, cache_dir=args.cache, seed=args.seed, base_hint=bsgs.class_major_order(layout)
        )
        payload.update(
            chain_order=str(chain.order()),
            match=chain.order() == formula,
            base_length=len(chain.base),
            strong_generators=len(chain.strong),
            cached=cached,
        )
    print(_dump(payload, args.pretty))
    return EXIT_OK if payload.get("match", True) else EXIT_INVALID


def cmd_verify(args) -> int:
    reports = harness.run_suite(args.suite, args.n, args.seed, args.trials)
    ok = all(r.passed for r in reports)
    print(_dump({"n": args.n, "suite": args.suite, "passed": ok, "reports": [r.to_dict() for r in reports]}, args.pretty))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_estimate(args) -> int:
    report = harness.estimate_probability(args.n, args.model, args.samples, args.seed)
    print(_dump(report.to_dict(), args.pretty))
    return EXIT_OK if report.passed else EXIT_INVALID


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent JSON output")

    p = argparse.ArgumentParser(prog="ncube", description="Solvability tools for the n x n x n cube.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    models = [m.value for m in codec.AssemblyModel]

    sp = add("layout", cmd_layout, "facet classification summary")
    sp.add_argument("N", type=int)

    sp = add("named", cmd_named, "a named move and its effect")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("NAME")

    sp = add("parse", cmd_parse, "parse a move word")
    sp.add_argument("WORD")

    sp = add("apply", cmd_apply, "apply moves to a state file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--state", help="state file (default: solved)")
    sp.add_argument("--moves", required=True)
    sp.add_argument("--out")

    sp = add("scramble", cmd_scramble, "random scramble from solved")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--length", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = add("assemble-random", cmd_assemble_random, "random reassembly")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--model", choices=models, default="sticker")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = add("check", cmd_check, "check a state against the law")
    sp.add_argument("--state", required=True)
    sp.add_argument("--observable", action="store_true", help="judge the colours only")
    sp.add_argument("--model", choices=models, default="sticker")
    sp.add_argument("--up-to-rotation", action="store_true")
    sp.add_argument("--complete", action="store_true", help="add the per-orbit center conditions")

    sp = add("count", cmd_count, "exact counts")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--what", choices=["cardinality", "orbits", "order", "probability", "conditions"], required=True)
    sp.add_argument("--model", choices=models, default="sticker")
    sp.add_argument("--factored", action="store_true")

    sp = add("order", cmd_order, "group order, optionally certified by a stabilizer chain")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bsgs", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cache", default=os.environ.get("NCUBE_CACHE"))

    sp = add("verify", cmd_verify, "run verification suites")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--suite", choices=list(harness.SUITES) + ["all"], default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int)

    sp = add("estimate", cmd_estimate, "Monte Carlo solvability estimate")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--model", choices=models, default="sticker")
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.pretty = getattr(args, "pretty", False)
    try:
        return args.func(args)
    except (CubeError, InputError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "offset", None) is not None:
            err["offset"] = exc.offset
        print(_dump(err, args.pretty), file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
