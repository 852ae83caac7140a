import json

import pytest

from torusalg import category_a as ca
from torusalg import demos
from torusalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_maps_table(capsys):
    code, out, _ = run(capsys, "maps", "S0", "S0", "--window", "-2:2")
    assert code == 0
    assert "Q^1 <all n>" in out


def test_maps_json(capsys):
    code, out, _ = run(capsys, "maps", "Sigma(3)", "S0", "--window", "-1:1", "--output", "json")
    assert code == 0
    assert json.loads(out)["total"]["exceptional"] == {"3": {"0": 1}}


def test_pia_orbit(capsys):
    code, out, _ = run(capsys, "pia", "orbit:6")
    assert code == 0
    assert "4 summand(s)" in out


def test_normalize_round_trips_a_file(tmp_path, capsys):
    p = tmp_path / "x.json"
    x = ca.validate(ca.direct_sum(ca.sphere({1: 2}), ca.sigma(3)))
    p.write_text(json.dumps(ca.obj_to_json(x)))
    code, out, _ = run(capsys, "normalize", str(p), "--output", "json")
    assert code == 0
    assert ca.obj_from_json(json.loads(out)).equals(x)


def test_tensor_and_dual(capsys):
    code, out, _ = run(capsys, "tensor", "sphere:1=1", "sphere:1=-1", "--output", "json")
    assert code == 0 and ca.obj_from_json(json.loads(out)).equals(ca.unit())
    code, out, _ = run(capsys, "dual", "sphere:2=3", "--output", "json")
    assert code == 0 and ca.obj_from_json(json.loads(out)).equals(ca.sphere({2: -3}))


def test_refusal_exit_code(capsys):
    code, out, _ = run(capsys, "is-dualizable", "sigma:2")
    assert code == 1
    assert "torsion" in out


def test_window_too_small_exit_code(capsys, tmp_path):
    p = tmp_path / "t.json"
    x = ca.validate(ca.make_obj(ca.GradedVS(), {2: (ca.GMod.of(torsion=[(9, 3)]), [])},
                                (ca.GMod(), [])))
    p.write_text(json.dumps(ca.obj_to_json(x)))
    code, _, err = run(capsys, "ext", "S0", str(p), "--window", "-4:4")
    assert code == 1
    assert "--window -4:9" in err


@pytest.mark.parametrize("argv", [
    ["normalize", "nonexistent.json"],
    ["maps", "Sigma(0)", "S0"],
    ["hom", "S0", "S0", "--window", "3:1"],
    ["frobnicate"],
])
def test_malformed_exit_code(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_bad_json_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"vertex": [[0, 1]], "tail": {"module": {"free": [0]}, "beta": [["c"]]}}')
    code, _, err = run(capsys, "normalize", str(p))
    assert code == 2
    assert "tail.beta[0][0]" in err


def test_cone_and_verify_cofibre(capsys):
    code, out, _ = run(capsys, "cone", "S0", "sphere:1=1")
    assert code == 0 and "n=1: Q<2>" in out
    code, out, _ = run(capsys, "verify-cofibre", "S0", "sphere:1=1", "sigma:1", "--window", "-4:4")
    assert code == 1 and "fail" in out


def test_gamma_of_a_builtin(capsys):
    code, out, _ = run(capsys, "gamma", "sphere:2=1", "--output", "json")
    assert code == 0
    assert ca.obj_from_json(json.loads(out)).equals(ca.sphere({2: 1}))


@pytest.mark.parametrize("suite", sorted(demos.SUITES))
def test_demo_suites(capsys, suite):
    code, out, _ = run(capsys, "demo", suite, "--seed", "3")
    assert code == 0
    assert "FAIL" not in out
