"""Tests for run documents and the built-in problem catalog."""

import json
import math

import pytest

from cli.catalog import load_problem, problem_names
from cli.config import ReferenceSpec, parse_config, serialize_config
from common.errors import ConfigError, ExprSyntaxError, ValidationError
from discretize import Method
from problems import ProblemKind, eval_coeff

HAYES = {
    "problem": {"kind": "rfde", "dim": 1, "max_delay": 1, "discrete": [{"delay": 1, "B": [["-(pi/2)"]]}]},
    "disc": {"M": 21, "N": 20, "h": 1},
}


def _doc(**changes):
    doc = json.loads(json.dumps(HAYES))
    for path, value in changes.items():
        section, key = path.split("__")
        doc[section][key] = value
    return json.dumps(doc)


# Tests the minimal Hayes document.
def test_parse_minimal_hayes():
    spec = parse_config(json.dumps(HAYES))
    assert spec.problem.kind is ProblemKind.RFDE
    assert spec.problem.dim == 1 and spec.problem.max_delay == 1.0
    assert eval_coeff(spec.problem.discrete[0].B, 0.0)[0, 0] == pytest.approx(-math.pi / 2)
    assert spec.disc.method is Method.COLLOCATION and spec.disc.s == 0.0
    assert spec.n_list == () and spec.reference is None


# Tests that a missing max_delay is reported by key path.
def test_missing_max_delay():
    doc = json.loads(json.dumps(HAYES))
    del doc["problem"]["max_delay"]
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(doc))
    assert info.value.key_path == "problem.max_delay"


# Tests that unknown keys are rejected wherever they appear.
@pytest.mark.parametrize("text, key_path", [
    (_doc(problem__typo=1), "problem.typo"),
    (_doc(disc__order=3), "disc.order"),
    (json.dumps({**HAYES, "extra": {}}), "extra"),
    (json.dumps({**HAYES, "run": {"reference": {"kind": "value", "value": 1, "note": "x"}}}), "run.reference.note"),
])
def test_unknown_keys(text, key_path):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.key_path == key_path


# Tests type errors and the paths they report.
@pytest.mark.parametrize("text, key_path", [
    (_doc(problem__dim="1"), "problem.dim"),
    (_doc(problem__kind="dde"), "problem.kind"),
    (_doc(disc__method="galerkin"), "disc.method"),
    (_doc(disc__M=True), "disc.M"),
    (json.dumps({**HAYES, "run": {"n_list": [5, "10"]}}), "run.n_list[1]"),
    (json.dumps({**HAYES, "run": {"refine": "twice"}}), "run.refine"),
])
def test_type_errors(text, key_path):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.key_path == key_path


# Tests that malformed JSON is a configuration error.
def test_invalid_json():
    with pytest.raises(ConfigError):
        parse_config("{\"problem\": ")


# Tests that expression errors carry the entry's key path.
def test_expression_error_path():
    doc = json.loads(json.dumps(HAYES))
    doc["problem"]["discrete"][0]["B"] = [["1 +"]]
    with pytest.raises(ExprSyntaxError) as info:
        parse_config(json.dumps(doc))
    assert info.value.key_path == "problem.discrete[0].B[0][0]"


# Tests that problem and discretization checks run during parsing.
def test_validation_propagates():
    with pytest.raises(ValidationError) as info:
        parse_config(_doc(disc__M=20))
    assert info.value.key_path == "disc.M"
    with pytest.raises(ValidationError):
        parse_config(_doc(problem__max_delay=2))


# Tests the three reference kinds.
def test_reference_kinds():
    def with_run(reference):
        return parse_config(json.dumps({**HAYES, "run": {"reference": reference}})).reference

    value = with_run({"kind": "value", "value": [0, 1], "provenance": "root"})
    assert value == ReferenceSpec("value", value=1j, provenance="root")
    roots = with_run({"kind": "char-roots", "re_range": [-1, 1], "im_range": [0, 2]})
    assert roots.region.grid == (8, 8)
    brute = with_run({"kind": "bruteforce", "M": 20, "steps": 2048})
    assert (brute.M, brute.steps) == (20, 2048)
    with pytest.raises(ConfigError) as info:
        with_run({"kind": "char-roots", "re_range": [1, 1], "im_range": [0, 2]})
    assert info.value.key_path == "run.reference"


# Tests that oracle settings the oracles would refuse are rejected while parsing.
@pytest.mark.parametrize("reference, key_path", [
    ({"kind": "bruteforce", "M": 0, "steps": 2048}, "run.reference.M"),
    ({"kind": "bruteforce", "M": 20, "steps": 10}, "run.reference.steps"),
    ({"kind": "char-roots", "re_range": [-1, 1], "im_range": [0, 2]}, "run.reference"),
])
def test_reference_rejected_for_problem(reference, key_path):
    doc = json.loads(load_problem("delayed-mathieu"))
    doc["run"]["reference"] = reference
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(doc))
    assert info.value.key_path == key_path


# Tests that serializing and parsing again reaches a fixed point.
@pytest.mark.parametrize("name", ["hayes", "ode", "re-basic", "delayed-mathieu"])
def test_roundtrip(name):
    spec = parse_config(load_problem(name))
    text = serialize_config(spec)
    again = parse_config(text)
    assert again == spec
    assert serialize_config(again) == text


# Tests the catalog listing and an unknown name.
def test_catalog():
    assert problem_names() == ["delayed-mathieu", "hayes", "ode", "re-basic"]
    with pytest.raises(ConfigError) as info:
        load_problem("../cli/catalog/hayes")
    assert info.value.key_path == "--problem"
