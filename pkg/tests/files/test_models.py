"""Tests the `models` Module.

This module provides full unit test coverage for the `models` module,
testing all branches of all functions.
"""


# Standard
import json
import pathlib
from fractions import Fraction

# Third-Party
import pydantic
import pytest

# Local
from faltertide import discrete, errors, hol, models
from faltertide.interp import Interpretation, Signature
from faltertide.models import FunctionSpec, ModelFile, ReparamFile, TraceFile
from faltertide.syntax import parse
from faltertide.traces import Reparam, State
from tests import conftest as conf

# Typing
from typing import Any, Dict, Tuple


def test_load_pair(pair: Tuple[Signature, Interpretation]) -> None:
    """Tests the shipped `pair` model."""
    # Unpack Model
    (sig, interp) = pair

    # Assert
    assert sig.functions == {"succ": 1, "0": 0, "1": 0, "2": 0}
    assert sig.relations == {"low": 1}
    assert sig.flexible == ("x", "y")
    assert interp.domain == ("0", "1", "2")
    assert interp.functions["succ"] == {("0",): "1", ("1",): "2", ("2",): "0"}
    assert interp.relations["low"] == frozenset({("0",)})


def test_load_counter(counter: Tuple[Signature, Interpretation]) -> None:
    """Tests the shipped `counter` model reads tables and rows."""
    # Unpack Model
    (sig, interp) = counter

    # Assert
    assert sig.flexible == ("n",)
    assert interp.functions["inc"][("4",)] == "0"
    assert interp.functions["max"][("1", "3")] == "3"
    assert len(interp.functions["max"]) == 25
    assert ("1", "3") in interp.relations["le"]
    assert ("3", "1") not in interp.relations["le"]


@pytest.mark.parametrize(
    ("spec", "expected"),
    [
        (dict(arity=0, table="1"),                             {(): "1"}),
        (dict(arity=1, table=["1", "0"]),                      {("0",): "1", ("1",): "0"}),
        (dict(arity=2, table=[["0", "1"], ["1", "1"]]),        {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "1"}),
        (dict(arity=1, rows=[{"args": ["0"], "value": "1"}]),  {("0",): "1"}),
    ],
)
def test_function_entries(spec: Dict[str, Any], expected: Dict[Tuple[str, ...], str]) -> None:
    """Tests `models.FunctionSpec.entries` reads nested arrays and rows.

    Args:
        spec (Dict[str, Any]): Function specification.
        expected (Dict[Tuple[str, ...], str]): Expected table.
    """
    # Assert
    assert FunctionSpec(**spec).entries(("0", "1")) == expected


@pytest.mark.parametrize(
    ("spec", "message"),
    [
        (dict(arity=1, table=["0"]),              "table must have 2 entries per dimension"),
        (dict(arity=2, table=["0", "1"]),         "table must have 2 entries per dimension"),
        (dict(arity=1, table=[["0"], "1"]),       "table cell \\(0,\\) is not a domain element"),
        (dict(arity=0, table=["0", "1"]),         "table cell \\(\\) is not a domain element"),
    ],
)
def test_function_entries_invalid(spec: Dict[str, Any], message: str) -> None:
    """Tests `models.FunctionSpec.entries` rejects malformed tables.

    Args:
        spec (Dict[str, Any]): Function specification.
        message (str): Expected message pattern.
    """
    # Assert
    with pytest.raises(errors.ModelError, match=message):
        FunctionSpec(**spec).entries(("0", "1"))


@pytest.mark.parametrize(
    "content",
    [
        '{"domain": []}',
        '{"domain": ["0"], "colour": "red"}',
        '{"domain": ["0"], "functions": {"f": {"arity": 0}}}',
        '{"domain": ["0"], "functions": {"f": {"arity": 0, "table": "0", "rows": []}}}',
        '{"domain": ["0"], "functions": {"f": {"arity": -1, "table": "0"}}}',
        '{"domain": ["0"',
    ],
)
def test_load_model_schema(content: str, tmp_path: pathlib.Path) -> None:
    """Tests model files must follow the schema.

    Args:
        content (str): File contents.
        tmp_path (pathlib.Path): Temporary directory.
    """
    # Write File
    path = conf.write_json(tmp_path, "model.json", content)

    # Assert
    with pytest.raises(pydantic.ValidationError):
        models.load_model(path)


def test_load_model_tables(tmp_path: pathlib.Path) -> None:
    """Tests table errors name the model file."""
    # Write File
    path = conf.write_json(tmp_path, "model.json", '{"domain": ["0", "1"], "functions": {"f": {"arity": 1, "table": ["0", "7"]}}}')

    # Assert
    with pytest.raises(errors.ModelError, match="outside the domain") as info:
        models.load_model(path)
    assert info.value.source == str(path)
    with pytest.raises(errors.ModelError, match="cannot read"):
        models.load_model(tmp_path / "missing.json")


def test_model_shadows_constants() -> None:
    """Tests a function named like a domain element replaces the constant."""
    # Build Model
    (sig, interp) = ModelFile(domain=["0", "1"], functions={"0": FunctionSpec(arity=0, table="1")}).build()

    # Assert
    assert sig.functions == {"0": 0, "1": 0}
    assert interp.functions["0"] == {(): "1"}


def test_trace_file_discrete() -> None:
    """Tests discrete trace files give behaviors and unit-step traces."""
    # Load File
    file = models.load_trace_file(conf.LASSOS / "03_settle.json")

    # Assert
    assert not file.continuous
    assert file.to_behavior() == conf.behavior([(0, 0), (1, 0)], [(2, 2)])
    assert file.to_trace() == conf.trace([(0, 0, 1), (1, 0, 1)], [(2, 2, 1)])


def test_trace_file_continuous() -> None:
    """Tests timed trace files give traces and sampled behaviors."""
    # Load File
    file = models.load_trace_file(conf.TRACES / "timed.json")
    trace = conf.trace([(0, 0, Fraction(1, 2)), (1, 0, Fraction(3, 2))], [(2, 1, 1), (0, 1, Fraction(1, 3))])

    # Assert
    assert file.continuous
    assert file.to_trace() == trace
    assert models.load_trace(conf.TRACES / "timed.json") == trace
    assert models.load_behavior(conf.TRACES / "timed.json") == conf.behavior([(0, 0), (1, 0)], [(2, 1), (0, 1)])
    assert TraceFile.of_trace(trace).to_trace() == trace


@pytest.mark.parametrize(
    ("content", "message"),
    [
        ('{"variables": ["x"], "cycle": []}',                                                   "at least 1 item"),
        ('{"variables": ["x"], "cycle": [{"state": {"x": "0"}, "duration": "1"}, {"state": {"x": "1"}}]}', "either every entry"),
        ('{"variables": ["x"], "cycle": [{"state": {"y": "0"}}]}',                              "does not assign exactly"),
        ('{"variables": ["x"], "cycle": [{"state": {"x": "0"}, "duration": 0.5}]}',             "not an exact rational"),
        ('{"variables": ["x"], "cycle": [{"state": {"x": "0"}}], "loop": true}',                "Extra inputs"),
    ],
)
def test_trace_file_schema(content: str, message: str, tmp_path: pathlib.Path) -> None:
    """Tests trace files must follow the schema.

    Args:
        content (str): File contents.
        message (str): Expected message pattern.
        tmp_path (pathlib.Path): Temporary directory.
    """
    # Write File
    path = conf.write_json(tmp_path, "trace.json", content)

    # Assert
    with pytest.raises(pydantic.ValidationError, match=message):
        models.load_trace(path)


def test_trace_file_domain_errors(tmp_path: pathlib.Path) -> None:
    """Tests trace errors raised after validation name the file."""
    # Write File
    path = conf.write_json(tmp_path, "trace.json", '{"variables": ["x"], "cycle": [{"state": {"x": "0"}, "duration": "-1"}]}')

    # Assert
    with pytest.raises(errors.TraceError, match="segment duration must be positive") as info:
        models.load_trace(path)
    assert info.value.source == str(path)
    with pytest.raises(errors.TraceError, match="cannot read"):
        models.load_behavior(tmp_path / "missing.json")


def test_lasso_file(tmp_path: pathlib.Path) -> None:
    """Tests behaviors written by the test helper load back."""
    # Write File
    content = conf.lasso_file(["x", "y"], [{"x": "1", "y": "2"}], prefix=[{"x": "0", "y": "0"}])
    path = conf.write_json(tmp_path, "lasso.json", content)

    # Assert
    assert models.load_behavior(path) == conf.behavior([(0, 0)], [(1, 2)])


def test_reparam_file(tmp_path: pathlib.Path) -> None:
    """Tests reparameterization files use exact rationals."""
    # Write File
    path = conf.write_json(tmp_path, "f.json", '{"offset": "1", "knots": [["0", "0"], ["1", "2"], [2, 3]], "final_slope": "2"}')
    f = models.load_reparam(path)

    # Assert
    assert f(Fraction(1, 2)) == 2
    assert f(3) == 6
    assert json.loads(ReparamFile.of(Reparam.scaling(Fraction(3, 2))).model_dump_json()) == {
        "offset": "0",
        "knots": [["0", "0"]],
        "final_slope": "3/2",
    }
    assert ReparamFile().build() == Reparam.identity()


def test_reparam_file_invalid(tmp_path: pathlib.Path) -> None:
    """Tests invalid reparameterizations are rejected."""
    # Write Files
    floats = conf.write_json(tmp_path, "floats.json", '{"offset": 0.5}')
    backwards = conf.write_json(tmp_path, "backwards.json", '{"knots": [["0", "0"], ["1", "2"], ["1/2", "3"]]}')

    # Assert
    with pytest.raises(pydantic.ValidationError):
        models.load_reparam(floats)
    with pytest.raises(errors.ReparamError, match="increase strictly"):
        models.load_reparam(backwards)


def test_eval_report(pair: Tuple[Signature, Interpretation]) -> None:
    """Tests verdict reports carry the replayable witness chain."""
    # Evaluate
    behavior = models.load_behavior(conf.LASSOS / "02_count.json")
    verdict = discrete.eval_disc(parse("[](x = 0)", pair[0]), {}, behavior, pair[1])
    report = models.EvalReport.of("eval-disc", "[](x = 0)", "02_count.json", "disc", verdict)
    data = json.loads(report.model_dump_json())

    # Assert
    assert data["exit_code"] == 1
    assert data["verdict"] == "FalseWitnessed"
    assert data["flex_bound"] is None
    assert data["witness"]["position"] == 0
    assert data["witness"]["nested"]["step"] == [{"x": "1", "y": "0"}, {"x": "2", "y": "0"}]


def test_witness_report_flexible(pair: Tuple[Signature, Interpretation]) -> None:
    """Tests witnesses on extended behaviors are reported as trace files."""
    # Evaluate
    behavior = models.load_behavior(conf.LASSOS / "01_constant.json")
    verdict = discrete.eval_disc(parse("\\AA z . <>(z = x)", pair[0]), {}, behavior, pair[1])
    assert verdict.witness is not None
    report = models.WitnessReport.of(verdict.witness)

    # Assert
    assert report.variable == "z"
    assert report.nested is not None
    assert report.nested.behavior == TraceFile(variables=["x", "y", "z"], cycle=[models.Entry(state={"x": "0", "y": "0", "z": "1"})])
    assert report.nested.behavior.to_behavior().cycle == (State.of(x=0, y=0, z=1),)


def test_hol_item() -> None:
    """Tests `models.HolItem.of` Method."""
    # Construct Item
    item = models.HolItem.of("d#1", hol.CheckResult(False, "hyp", (0, 1), "a is not a hypothesis"))

    # Assert
    assert item.model_dump() == {"name": "d#1", "ok": False, "rule": "hyp", "path": [0, 1], "reason": "a is not a hypothesis"}
