import io
import json
import subprocess
import sys

import pytest

from pcrit.cli import dumps, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call("--output", "json", *argv)
    return code, json.loads(out) if out else None, err


def text_values(text):
    return dict(line.split(" = ", 1) for line in text.splitlines())


def flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


@pytest.fixture
def toy_model(tmp_path):
    path = tmp_path / "toy.json"
    path.write_text(
        json.dumps(
            {
                "vertices": [{"r": 1, "m": 1, "p": "0"}, {"r": 1, "m": 1, "p": "0"}],
                "arrows": [{"src": 0, "dst": 1, "count": 1}],
                "point": {"0-1-0": [[[1.0, 0.0]]]},
            }
        )
    )
    return str(path)


def test_example_blp2_report():
    code, rep, _ = call_json("example-blp2", "--eps1", "0", "--eps2", "0")
    assert code == 0
    assert rep["A"] == "0"
    assert rep["solvable"] == {"E0": True, "E1": False, "E2": False}
    ratios = rep["song"]["L1"]["ratios"] + rep["song"]["L2"]["ratios"]
    assert ratios == ["1/2", "1/11", "1/4", "1/2"]
    assert rep["song"]["L1"]["threshold"] == "5/8"


def test_example_blp2_positive_A():
    code, rep, _ = call_json("example-blp2", "--eps1", "1/10", "--eps2", "0")
    assert code == 0 and rep["A"] == "1/2560"
    assert rep["solvable"] == {"E0": False, "E1": False, "E2": True}


def test_p_value_j_on_L1():
    code, rep, _ = call_json("p-value", "--ring", "blp2", "--zeta", "j", "--bundle", "L1")
    assert code == 0 and rep["p_value"] == "0"
    code, text, _ = call("p-value", "--ring", "blp2", "--zeta", "j", "--bundle", "L1")
    assert text_values(text)["p_value"] == "0"


def test_classify_and_cone():
    code, rep, _ = call_json("classify", "--zeta", "rescaled", "--family", "E1", "--eps2=-1/100")
    assert code == 0 and rep["verdict"] == "stable"
    code, rep, _ = call_json("cone", "--zeta", "rescaled", "--family", "E1", "--direction", "eps2", "--point=-1/10")
    assert code == 0
    assert rep["cone"]["A"] == [["24/5"]]
    assert rep["membership"]["region"] == "interior"


def test_ring_check_pairing():
    code, rep, _ = call_json("ring-check", "--integrate", "13H-11D", "13H-11D")
    assert code == 0
    assert rep["pairing"]["H*H"] == "1" and rep["pairing"]["D*D"] == "-1"
    assert rep["integral"] == "48"


def test_flow_json_monotone(toy_model, tmp_path):
    trace = tmp_path / "trace.csv"
    code, rep, _ = call_json("flow", "--model", toy_model, "--trace-csv", str(trace))
    assert code == 0
    assert rep["monotone"] is True and rep["converged"] is True
    assert rep["classification"]["kind"] == "polystable"
    fs = [row[1] for row in rep["trajectory"]]
    assert all(b <= a for a, b in zip(fs, fs[1:]))
    assert trace.read_text().splitlines()[0] == "t,f,grad_norm"


def test_flow_no_convergence_exit_code(toy_model):
    code, rep, _ = call_json("flow", "--model", toy_model, "--tmax", "1")
    assert code == 1 and rep["error"] == "NoConvergence"


def test_oracle_and_one_ps(toy_model):
    code, rep, _ = call_json("oracle", "--model", toy_model)
    assert code == 0 and rep["agree"] is True
    assert rep["oracle"]["verdict"] == "semistable"
    code, rep, _ = call_json("one-ps", "--model", toy_model, "--xi", "1,-1", "--t", "0.5")
    assert code == 0
    assert rep["weight"] == pytest.approx(float(f"{2.718281828459045 ** -2:.12g}"))
    assert rep["limit"]["exists"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["p-value", "--zeta", "j", "--bundle", "L9"],
        ["p-value", "--zeta", "nonsense", "--bundle", "L1"],
        ["flow", "--model", "/nonexistent.json"],
        ["no-such-command"],
        ["example-blp2", "--eps1", "one"],
    ],
)
def test_malformed_input_exit_2(argv):
    code, _, _ = call(*argv)
    assert code == 2


def test_computation_error_exit_1():
    code, rep, _ = call_json("example-blp2", "--eps1", "0", "--eps2", "1")
    assert code == 1 and rep["error"] == "OutOfValidityBox"


def test_malformed_model_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("flow", "--model", str(bad))[0] == 2
    bad.write_text(json.dumps({"vertices": [{"r": 1, "m": 1, "p": "1"}]}))
    assert call("oracle", "--model", str(bad))[0] == 1  # level imbalance is a computation error


@pytest.mark.parametrize(
    "argv",
    [
        ["example-blp2", "--eps1", "1/10", "--eps2=-1/20"],
        ["song"],
        ["ring-check"],
        ["classify", "--zeta", "dhym", "--family", "E0"],
    ],
)
def test_json_round_trip_and_text_agreement(argv):
    code, out, _ = call("--output", "json", *argv)
    assert code == 0
    assert dumps(json.loads(out)) + "\n" == out
    _, text, _ = call(*argv)
    tv = text_values(text)
    for key, value in flatten(json.loads(out)):
        expected = "null" if value is None else json.dumps(value) if isinstance(value, bool) else str(value)
        assert tv[key] == expected


def test_flow_seed_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"vertices": [{"r": 1, "m": 1, "p": "1"}, {"r": 1, "m": 1, "p": "-1"}],
                                "arrows": [{"src": 0, "dst": 1}]}))
    monkeypatch.setenv("PCRIT_SEED", "5")
    a = call_json("flow", "--model", str(path))[1]
    b = call_json("flow", "--model", str(path))[1]
    assert a == b and a["converged"]
    monkeypatch.setenv("PCRIT_SEED", "x")
    assert call("flow", "--model", str(path))[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pcrit.cli", "--output", "json", "p-value", "--zeta", "hym", "--bundle", "E"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["p_value"] == "0"
