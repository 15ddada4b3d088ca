import copy
import json
import math
import pathlib

import jsonschema
import pytest

import stlreach

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCENARIOS = ROOT / "scenarios"
SCHEMA = json.loads((ROOT / "schemas" / "scenario.schema.json").read_text())

BASE = {
    "system": {"rhs": ["0"]},
    "initial_box": [[0.0, 0.5]],
    "predicates": {"p": {"region": [[-1, 1]]}},
    "formula": "G[0,1] p",
    "horizon": 2,
}


def piece(t0, t1, value, markers=()):
    return {"t_start": t0, "t_end": t1, "value": value, "markers": list(markers)}


@pytest.mark.parametrize("name", ["vanderpol.json", "decay.json", "constant.json"])
def test_bundled_scenarios_match_schema(name):
    jsonschema.validate(json.loads((SCENARIOS / name).read_text()), SCHEMA)


def test_schema_rejects_what_the_parser_rejects():
    bad = copy.deepcopy(BASE)
    bad["extra"] = 1
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, SCHEMA)
    with pytest.raises(stlreach.ConfigError):
        stlreach.verify(bad)


def test_interval_arithmetic_encloses():
    x = stlreach.Interval(0.1, 0.2)
    y = x * x - x
    assert y.lo <= 0.1 * 0.1 - 0.2 and y.hi >= 0.2 * 0.2 - 0.1
    e = stlreach.exp(stlreach.Interval(1.0))
    assert e.lo <= math.e <= e.hi
    assert stlreach.Interval(1.0, 0.0).is_empty()
    with pytest.raises(stlreach.EvaluationError):
        stlreach.log(stlreach.Interval(-1.0, 1.0))


def test_formula_helpers():
    f = "G[0,1] (G[0,2] !p & (q -> F[1,2] w))"
    assert stlreach.format_formula(f) == f
    assert stlreach.minimal_horizon(f) == 3.0
    assert stlreach.rewrite_formula("F[1,2] a") == "T U[1,2] a"
    with pytest.raises(stlreach.ParseError):
        stlreach.format_formula("G[0,1 p")
    assert issubclass(stlreach.ParseError, stlreach.Error)


def test_until_hand_case():
    top = [piece(0, 10, "true")]
    right = [piece(0, 4, "false"), piece(4, 6, "unknown", [3]), piece(6, 10, "false")]
    r = stlreach.until(top, right, 1, 2)
    assert r[0] == piece(0, 2, "false")
    assert r[1] == piece(2, 5, "unknown", [3])
    assert r[2]["value"] == "false"


def test_eval_signals_example():
    signals = json.loads((SCENARIOS / "signals_example.json").read_text())
    root = stlreach.eval_signals("G[0,1] (G[0,2] !p & (q -> F[1,2] w))", signals)
    assert root == [
        piece(0, 3, "true"),
        piece(3, 7, "unknown", [4]),
        piece(7, 9, "true"),
        piece(9, 12, "unknown", [-1]),
    ]
    with pytest.raises(stlreach.BindingError):
        stlreach.eval_signals("r", signals)


def test_verify_verdicts():
    assert stlreach.verify(BASE)["verdict"] == "true"
    f = copy.deepcopy(BASE)
    f["predicates"]["p"]["region"] = [[2, 3]]
    assert stlreach.verify(f)["verdict"] == "false"
    b = copy.deepcopy(BASE)
    b["formula"] = "G[0,1] r"
    with pytest.raises(stlreach.BindingError):
        stlreach.verify(b)


def test_vanderpol_refinement_removes_unknown():
    r = stlreach.verify(SCENARIOS / "vanderpol.json")
    assert r["uncertain_duration_initial"] > 1.0
    assert r["uncertain_duration_final"] <= 0.2 * r["uncertain_duration_initial"]
    assert r["root_signal"][-1]["t_end"] == 10


def test_simulate_decay_brackets_closed_form():
    tube = stlreach.simulate(SCENARIOS / "decay.json")
    last = tube["segments"][-1]
    assert last["t_end"] == 3.0
    lo, hi = last["endpoint"][0]
    assert lo <= math.exp(-3.0) <= hi
