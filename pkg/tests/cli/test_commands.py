"""Tests the `commands` Module.

This module provides unit test coverage for the `commands` module: resolving
the run configuration, reading inputs, writing reports and running every
subcommand on the shipped data.
"""


# Standard
import json
import pathlib
from fractions import Fraction

# Third-Party
import pytest
import pytest_mock

# Local
from faltertide import discrete, errors
from faltertide.cli import commands
from faltertide.cli.commands import (
    DEFAULT_CORPUS,
    DenoteCommand,
    EvalContCommand,
    EvalDiscCommand,
    EquivCommand,
    HolCheckCommand,
    RunConfig,
    Settings,
)
from faltertide.interp import Interpretation, Signature
from faltertide.verdicts import FlexBound
from tests import conftest as conf

# Typing
from typing import Any, List, Tuple


# Constants
COUNT = conf.LASSOS / "02_count.json"
CONSTANT = conf.LASSOS / "01_constant.json"
TIMED = conf.TRACES / "timed.json"
STUTTER = conf.TRACES / "stutter.json"


def run(capsys: pytest.CaptureFixture[str], command: str, **options: Any) -> Tuple[int, str]:
    """Runs a command on a configuration and returns its status and output."""
    options.setdefault("model", conf.MODELS / "pair.json")
    status = commands.COMMANDS[command](RunConfig(command=command, **options))
    return status, capsys.readouterr().out.rstrip("\n")


def test_resolve_semantics() -> None:
    """Tests the subcommand fixes the semantics and collects the traces."""
    # Resolve
    disc = RunConfig.resolve("eval-disc", EvalDiscCommand(model="m", formula="f", trace="t"), Settings())
    cont = RunConfig.resolve("eval-cont", EvalContCommand(model="m", formula="f", trace="t", samples=["1/2"]), Settings())
    denote = RunConfig.resolve("denote", DenoteCommand(model="m", formula="f", trace="t"), Settings())
    equiv = RunConfig.resolve("equiv", EquivCommand(trace=["a", "b"]), Settings())

    # Assert
    assert (disc.semantics, disc.traces) == ("disc", [pathlib.Path("t")])
    assert (cont.semantics, cont.samples) == ("cont", [Fraction(1, 2)])
    assert denote.semantics == "cont"
    assert (equiv.semantics, equiv.traces) == ("disc", [pathlib.Path("a"), pathlib.Path("b")])


@pytest.mark.parametrize(
    ("settings", "given", "expected"),
    [
        (dict(),                 dict(),                (1, 0, "text")),
        (dict(flex_bound=3),     dict(),                (3, 0, "text")),
        (dict(flex_bound=3),     dict(flex_bound=0),    (0, 0, "text")),
        (dict(seed=9),           dict(format="json"),   (1, 9, "json")),
    ],
)
def test_resolve_precedence(settings: Any, given: Any, expected: Tuple[int, int, str]) -> None:
    """Tests command-line options override settings, which override defaults.

    Args:
        settings (Any): Environment settings.
        given (Any): Command-line options.
        expected (Tuple[int, int, str]): Flexible bound, seed and format.
    """
    # Resolve
    command = EvalDiscCommand(model="m", formula="f", trace="t", **given)
    cfg = RunConfig.resolve("eval-disc", command, Settings(**settings))

    # Assert
    assert (cfg.flex_bound, cfg.seed, cfg.format) == expected
    assert cfg.bound == FlexBound(expected[0])


def test_read_formula(tmp_path: pathlib.Path) -> None:
    """Tests formulas are read from files or taken inline."""
    # Write File
    path = conf.write_json(tmp_path, "f.tla", "[](x = 0)\n")

    # Assert
    assert commands.read_formula(str(path)) == ("[](x = 0)\n", str(path))
    assert commands.read_formula("[](x = 0)") == ("[](x = 0)", "<formula>")


def test_read_corpus(pair: Tuple[Signature, Interpretation], tmp_path: pathlib.Path) -> None:
    """Tests corpus files skip comments and locate malformed lines."""
    # Read Corpus
    formulas = commands.read_corpus(DEFAULT_CORPUS, pair[0])
    path = conf.write_json(tmp_path, "bad.tla", "# comment\nx = 0\n\n  [](x = )\n")

    # Assert
    assert len(formulas) == 35
    assert formulas[0][0] == "x = 0"
    with pytest.raises(errors.ParseError) as info:
        commands.read_corpus(path, pair[0])
    assert (info.value.source, info.value.line) == (str(path), 4)
    assert info.value.column is not None and info.value.column > 2
    with pytest.raises(errors.InputError, match="cannot read corpus"):
        commands.read_corpus(tmp_path / "missing.tla", pair[0])


def test_emit_output_file(tmp_path: pathlib.Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Tests reports are written to the output file when one is given."""
    # Run
    path = tmp_path / "report.json"
    status = commands.cmd_parse(RunConfig(command="parse", model=conf.MODELS / "pair.json", formula="x = 0", format="json", output=path))
    report = json.loads(path.read_text(encoding="utf-8"))

    # Assert
    assert status == 0
    assert capsys.readouterr().out == ""
    assert report["formula"] == "x = 0"
    assert report["command"] == "parse"
    with pytest.raises(errors.InputError, match="cannot write report"):
        commands.cmd_parse(RunConfig(command="parse", model=conf.MODELS / "pair.json", formula="x = 0", output=tmp_path / "no" / "r"))


@pytest.mark.parametrize(
    ("command", "formula", "trace", "status", "first_line"),
    [
        ("eval-disc", "[](x = 0)",                         COUNT,    1, "FalseWitnessed"),
        ("eval-disc", "x = 0",                             COUNT,    0, "True"),
        ("eval-disc", "~(x = 0)",                          COUNT,    1, "False"),
        ("eval-disc", "\\AA z . [](x = x)",                CONSTANT, 2, "TrueWithinBound (flex-bound=1)"),
        ("eval-disc", "\\EE z . [](z = 2 /\\ x = 0)",      COUNT,    4, "FalseWithinBound (flex-bound=1)"),
        ("eval-cont", "[](x' = succ(x))",                  TIMED,    1, "FalseWitnessed"),
        ("eval-cont", "<>(x = 1)",                         TIMED,    0, "True"),
    ],
)
def test_eval(command: str, formula: str, trace: pathlib.Path, status: int, first_line: str, capsys: pytest.CaptureFixture[str]) -> None:
    """Tests verdicts map to exit statuses.

    Args:
        command (str): `eval-disc` or `eval-cont`.
        formula (str): Inline formula.
        trace (pathlib.Path): Trace file.
        status (int): Expected exit status.
        first_line (str): Expected verdict line.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Run
    semantics = "disc" if command == "eval-disc" else "cont"
    (code, out) = run(capsys, command, formula=formula, traces=[trace], semantics=semantics)

    # Assert
    assert code == status
    assert out.splitlines()[0] == first_line


def test_eval_witness(capsys: pytest.CaptureFixture[str]) -> None:
    """Tests refutations print their witness chain."""
    # Run
    (code, out) = run(capsys, "eval-disc", formula="[](x = 0)", traces=[COUNT])

    # Assert
    assert code == 1
    assert out == "FalseWitnessed\n  position 0: [] x = 0\n  position 1: x = 0; step x=1;y=0 -> x=2;y=0"


def test_eval_json(capsys: pytest.CaptureFixture[str]) -> None:
    """Tests the JSON report of an evaluation."""
    # Run
    (code, out) = run(capsys, "eval-disc", formula="[](x = 0)", traces=[COUNT], format="json")
    report = json.loads(out)

    # Assert
    assert code == report["exit_code"] == 1
    assert report["verdict"] == "FalseWitnessed"
    assert report["semantics"] == "disc"
    assert report["witness"]["nested"]["position"] == 1


def test_eval_samples(capsys: pytest.CaptureFixture[str]) -> None:
    """Tests the coherence check at sample instants."""
    # Run
    (code, out) = run(capsys, "eval-cont", formula="x = 0", traces=[TIMED], semantics="cont", samples=["0", "1/2", "7/3"])

    # Assert
    assert code == 0
    assert out == "True\ncoherent"


@pytest.mark.parametrize(
    ("command", "options", "message"),
    [
        ("eval-disc", dict(model=None, formula="x = 0", traces=[COUNT]),                     "a model file is required"),
        ("eval-disc", dict(traces=[COUNT]),                                                   "a formula is required"),
        ("eval-disc", dict(formula="x = 0", traces=[COUNT, CONSTANT]),                        "exactly one trace is required"),
        ("eval-cont", dict(formula="\\AA z . x = z", traces=[TIMED], samples=["0"]),          "--samples needs a formula"),
        ("eval-disc", dict(formula="x = 0", traces=[conf.TRACES / "counter.json"]),           "does not match the declared variables"),
        ("denote",    dict(formula="x = 0", traces=[]),                                       "exactly one trace is required"),
        ("agreement", dict(formula="\\AA z . x = z"),                                         "agreement needs formulas without flexible quantifiers"),
        ("hol-check", dict(),                                                                 "give --derivations, --library or --mutations"),
        ("hol-check", dict(derivations=pathlib.Path("missing.sexp")),                         "cannot read derivations"),
    ],
)
def test_command_errors(command: str, options: Any, message: str, capsys: pytest.CaptureFixture[str]) -> None:
    """Tests commands reject incomplete or inconsistent inputs.

    Args:
        command (str): Subcommand.
        options (Any): Configuration.
        message (str): Expected message pattern.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Assert
    with pytest.raises(errors.InputError, match=message):
        run(capsys, command, **options)


def test_denote(capsys: pytest.CaptureFixture[str]) -> None:
    """Tests `denote` prints the canonical time set."""
    # Run
    (code, out) = run(capsys, "denote", formula="[](y = 1)", traces=[TIMED], semantics="cont")

    # Assert
    assert code == 0
    assert out == "∅ ⟨period=1 from 2: [0,1)⟩"


def test_denote_flexible(capsys: pytest.CaptureFixture[str]) -> None:
    """Tests bounded denotations are marked as such."""
    # Run
    (code, out) = run(capsys, "denote", formula="\\AA z . [](x = x)", traces=[TIMED], semantics="cont")

    # Assert
    assert code == 0
    assert out.endswith("(within flex-bound=1)")


@pytest.mark.parametrize(
    ("semantics", "traces", "status", "first_line"),
    [
        ("disc", [TIMED, STUTTER],   0, "equivalent"),
        ("cont", [TIMED, STUTTER],   0, "equivalent"),
        ("disc", [COUNT, CONSTANT],  1, "not equivalent"),
        ("cont", [COUNT, CONSTANT],  1, "not equivalent"),
    ],
)
def test_equiv(semantics: str, traces: List[pathlib.Path], status: int, first_line: str, capsys: pytest.CaptureFixture[str]) -> None:
    """Tests stuttering equivalence of trace files.

    Args:
        semantics (str): `disc` or `cont`.
        traces (List[pathlib.Path]): The two trace files.
        status (int): Expected exit status.
        first_line (str): Expected first output line.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Run
    (code, out) = run(capsys, "equiv", traces=traces, semantics=semantics)
    lines = out.splitlines()

    # Assert
    assert code == status
    assert lines[0] == first_line
    assert (len(lines) == 2 and lines[1].startswith("stutter ")) is (semantics == "cont" and status == 0)


@pytest.mark.parametrize(
    ("semantics", "formula", "traces", "first_line"),
    [
        ("disc", "[]<>(y = 2)",         [],         "1 formulas x 12 traces x 3 trials: 0 violations"),
        ("disc", "\\AA z . [](x = x)",  [],         "0 formulas x 12 traces x 3 trials: 0 violations"),
        ("cont", "<>(x = 1)",           [TIMED],    "1 formulas x 1 traces x 3 trials: 0 violations"),
    ],
)
def test_invariance(semantics: str, formula: str, traces: List[pathlib.Path], first_line: str, capsys: pytest.CaptureFixture[str]) -> None:
    """Tests the randomized invariance checks find no violation.

    Args:
        semantics (str): `disc` or `cont`.
        formula (str): Inline formula.
        traces (List[pathlib.Path]): Trace files, the shipped lassos if empty.
        first_line (str): Expected summary line.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Run
    (code, out) = run(capsys, "invariance", formula=formula, traces=traces, semantics=semantics, trials=3, seed=4)

    # Assert
    assert code == 0
    assert out == first_line


def test_invariance_reports_violations(
    tmp_path: pathlib.Path,
    capsys: pytest.CaptureFixture[str],
    mocker: pytest_mock.MockerFixture,
) -> None:
    """Tests the invariance command fails once atoms depend on stuttering.

    Args:
        tmp_path (pathlib.Path): Temporary directory.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
        mocker (pytest_mock.MockerFixture): PyTest Mocker Fixture.
    """
    # Read Atoms on the Next Position
    mocker.patch.object(discrete, "next_distinct", lambda behavior, i: behavior.at(i + 1))
    lasso = conf.write_json(tmp_path, "lasso.json", conf.lasso_file(["x", "y"], [{"x": "0", "y": "0"}, {"x": "1", "y": "0"}]))

    # Run
    (code, out) = run(capsys, "invariance", formula="x' = x", traces=[lasso], semantics="disc", trials=20, seed=0)
    lines = out.splitlines()

    # Assert
    assert code == 1
    assert lines[0].startswith("1 formulas x 1 traces x 20 trials: ")
    assert not lines[0].endswith(": 0 violations")
    assert all(line.startswith(f"  x' = x on {lasso}: False became True (repeats []/") for line in lines[1:])


def test_agreement(capsys: pytest.CaptureFixture[str]) -> None:
    """Tests the semantics agree on the shipped corpus and lassos."""
    # Run
    (code, out) = run(capsys, "agreement", format="json")
    report = json.loads(out)

    # Assert
    assert code == 0
    assert (report["formulas"], report["traces"], report["disagreements"]) == (35, 12, [])


def test_agreement_control(capsys: pytest.CaptureFixture[str]) -> None:
    """Tests a subscript missing a variable makes the semantics disagree."""
    # Run
    control = conf.CONTROLS / "disagree.json"
    (code, out) = run(capsys, "agreement", corpus=conf.CONTROLS / "disagree.tla", traces=[control])

    # Assert
    assert code == 1
    assert out == f"1 formulas x 1 lassos: 1 disagreements\n  [][y' = y]_<x> on {control}: True vs FalseWitnessed"


@pytest.mark.parametrize(
    ("options", "summary"),
    [
        (dict(derivations=conf.DERIVATIONS / "top.sexp"),    "2/2 passed"),
        (dict(library=True),                                 "10/10 passed"),
        (dict(mutations=20),                                 "20/20 passed"),
        (dict(library=True, mutations=100),                  "110/110 passed"),
    ],
)
def test_hol_check(options: Any, summary: str, capsys: pytest.CaptureFixture[str]) -> None:
    """Tests derivations check and mutants are rejected.

    Args:
        options (Any): Configuration.
        summary (str): Expected summary line.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Run
    (code, out) = run(capsys, "hol-check", **options)

    # Assert
    assert code == 0
    assert out == summary


def test_hol_check_failure(tmp_path: pathlib.Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Tests a rejected derivation fails the command with its reason."""
    # Write File
    path = conf.write_json(tmp_path, "bad.sexp", "(hyp () (true ((a Prop)) () a))")

    # Run
    (code, out) = run(capsys, "hol-check", derivations=path)

    # Assert
    assert code == 1
    assert out == f"0/1 passed\n  {path}#1: a is not a hypothesis"
