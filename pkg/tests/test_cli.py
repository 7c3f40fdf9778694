import json
import subprocess
import sys

import pytest

from ncube.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_layout(capsys):
    code, out, _ = call(capsys, "layout", "5")
    d = json.loads(out)
    assert code == 0 and d["K"] == 1 and d["g"] == 150


def test_count_order_factored(capsys):
    code, out, _ = call(capsys, "count", "--n", "5", "--what", "order", "--factored")
    assert code == 0 and json.loads(out)["factored"] == "(24!)^3·2^8·12!·8!·3^7"


def test_count_probability(capsys):
    _, out, _ = call(capsys, "count", "--n", "5", "--what", "probability", "--model", "mech")
    assert json.loads(out)["value"] == "1/12"


def test_parse_and_named(capsys):
    code, out, _ = call(capsys, "parse", "[R,U]2")
    assert code == 0 and json.loads(out)["render"] == "[R,U]2"
    code, out, _ = call(capsys, "named", "--n", "5", "z")
    d = json.loads(out)
    assert code == 0 and d["facets_moved"] == 3


def test_scramble_check_roundtrip(capsys, tmp_path):
    path = tmp_path / "s.json"
    assert call(capsys, "scramble", "--n", "4", "--seed", "1", "--out", str(path))[0] == 0
    code, out, _ = call(capsys, "check", "--state", str(path))
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = call(capsys, "check", "--state", str(path), "--observable")
    assert code == 0


def test_invalid_assembly_exit_one(capsys, tmp_path):
    # find a seed whose random assembly is not solvable
    path = tmp_path / "a.json"
    for seed in range(20):
        call(capsys, "assemble-random", "--n", "3", "--seed", str(seed), "--out", str(path))
        code, out, _ = call(capsys, "check", "--state", str(path))
        if code == 1:
            assert not json.loads(out)["valid"]
            return
    pytest.fail("no invalid assembly in 20 seeds")


def test_apply_then_undo(capsys, tmp_path):
    path = tmp_path / "a.json"
    call(capsys, "apply", "--n", "5", "--moves", "R U CF", "--out", str(path))
    _, out, _ = call(capsys, "apply", "--n", "5", "--state", str(path), "--moves", "CF' U' R'")
    assert json.loads(out)["facets"] == list(range(150))


def test_usage_errors_exit_two(capsys, tmp_path):
    assert call(capsys, "layout", "1")[0] == 2
    code, _, err = call(capsys, "parse", "[R,")
    assert code == 2 and "error" in json.loads(err)
    assert call(capsys, "check", "--state", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 3, "kind": "labelled", "facets": [0] * 54}))
    assert call(capsys, "check", "--state", str(bad))[0] == 2
    assert call(capsys, "apply", "--n", "3", "--moves", "C R")[0] == 2
    assert call(capsys, "count", "--n", "3")[0] == 2


def test_order_bsgs(capsys, tmp_path):
    code, out, _ = call(capsys, "order", "--n", "3", "--bsgs", "--cache", str(tmp_path))
    d = json.loads(out)
    assert code == 0 and d["match"] and not d["cached"]
    _, out, _ = call(capsys, "order", "--n", "3", "--bsgs", "--cache", str(tmp_path))
    assert json.loads(out)["cached"]


def test_verify_exit_codes(capsys):
    assert call(capsys, "verify", "--n", "6", "--suite", "named-moves")[0] == 0
    assert call(capsys, "verify", "--n", "5", "--suite", "named-moves")[0] == 1


def test_output_is_byte_identical():
    cmd = [sys.executable, "-m", "ncube", "assemble-random", "--n", "5", "--seed", "9"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_pretty(capsys):
    _, out, _ = call(capsys, "count", "--n", "3", "--what", "order", "--pretty")
    assert out.startswith("{\n  ")
