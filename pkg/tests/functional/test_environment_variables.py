"""Tests the `faltertide` Environment Variables Functionality.

This module provides functional regression tests for the `FALTERTIDE_*`
environment variables and their precedence below command-line options.
"""


# Standard
import json
import os

# Third-Party
import pytest
import pytest_mock

# Local
from faltertide.cli import main
from tests import conftest as conf

# Typing
from typing import Dict, List


# Constants
MODEL = str(conf.MODELS / "pair.json")
CONSTANT = str(conf.LASSOS / "01_constant.json")
VALID_FLEXIBLE = ["eval-disc", "--model", MODEL, "--formula", "\\AA z . [](x = x)", "--trace", CONSTANT]
INVARIANCE = ["invariance", "--formula", "[]<>(y = 2)", "--trace", CONSTANT, "--format", "json"]


@pytest.mark.parametrize(
    ("env", "arguments", "first_line"),
    [
        ({},                                 [],                       "TrueWithinBound (flex-bound=1)"),
        ({"FALTERTIDE_FLEX_BOUND": "0"},     [],                       "TrueWithinBound (flex-bound=0)"),
        ({"FALTERTIDE_FLEX_BOUND": "0"},     ["--flex-bound", "2"],    "TrueWithinBound (flex-bound=2)"),
    ],
)
def test_flex_bound(
    env: Dict[str, str],
    arguments: List[str],
    first_line: str,
    mocker: pytest_mock.MockerFixture,
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Tests the flexible-quantifier bound comes from the environment.

    Args:
        env (Dict[str, str]): Environment variables.
        arguments (List[str]): Extra command-line options.
        first_line (str): Expected verdict line.
        mocker (pytest_mock.MockerFixture): PyTest Mocker Fixture.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Set Environment Variables
    mocker.patch.dict(os.environ, env, clear=True)

    # Run
    status = main(VALID_FLEXIBLE + arguments)

    # Assert
    assert status == 2
    assert capsys.readouterr().out.splitlines()[0] == first_line


@pytest.mark.parametrize(
    ("env", "arguments", "seed", "trials"),
    [
        ({},                                                      [],                  0, 20),
        ({"FALTERTIDE_SEED": "7", "FALTERTIDE_TRIALS": "2"},      [],                  7, 2),
        ({"FALTERTIDE_SEED": "7", "FALTERTIDE_TRIALS": "2"},      ["--seed", "3"],     3, 2),
        ({"FALTERTIDE_TRIALS": "2"},                              ["--trials", "1"],   0, 1),
    ],
)
def test_seed_and_trials(
    env: Dict[str, str],
    arguments: List[str],
    seed: int,
    trials: int,
    mocker: pytest_mock.MockerFixture,
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Tests the random seed and trial count come from the environment.

    Args:
        env (Dict[str, str]): Environment variables.
        arguments (List[str]): Extra command-line options.
        seed (int): Expected seed.
        trials (int): Expected trial count.
        mocker (pytest_mock.MockerFixture): PyTest Mocker Fixture.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Set Environment Variables
    mocker.patch.dict(os.environ, env, clear=True)

    # Run
    status = main(INVARIANCE + arguments)
    report = json.loads(capsys.readouterr().out)

    # Assert
    assert status == 0
    assert (report["seed"], report["trials"]) == (seed, trials)


def test_verbose(mocker: pytest_mock.MockerFixture, capsys: pytest.CaptureFixture[str]) -> None:
    """Tests `FALTERTIDE_VERBOSE` turns on debug logging to stderr.

    Args:
        mocker (pytest_mock.MockerFixture): PyTest Mocker Fixture.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Set Environment Variables
    mocker.patch.dict(os.environ, {"FALTERTIDE_VERBOSE": "true"}, clear=True)

    # Run
    main(VALID_FLEXIBLE)

    # Assert
    assert "running eval-disc" in capsys.readouterr().err


@pytest.mark.parametrize(
    ("env", "message"),
    [
        ({"FALTERTIDE_FLEX_BOUND": "-1"},   "environment: flex_bound: Input should be greater than or equal to 0"),
        ({"FALTERTIDE_SEED": "abc"},        "environment: seed: Input should be a valid integer"),
        ({"FALTERTIDE_TRIALS": "0"},        "environment: trials: Input should be greater than or equal to 1"),
    ],
)
def test_invalid_environment(
    env: Dict[str, str],
    message: str,
    mocker: pytest_mock.MockerFixture,
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Tests invalid environment variables are input errors.

    Args:
        env (Dict[str, str]): Environment variables.
        message (str): Expected message.
        mocker (pytest_mock.MockerFixture): PyTest Mocker Fixture.
        capsys (pytest.CaptureFixture[str]): Fixture to capture STDOUT/STDERR.
    """
    # Set Environment Variables
    mocker.patch.dict(os.environ, env, clear=True)

    # Assert Exits
    with pytest.raises(SystemExit) as info:
        main(VALID_FLEXIBLE)

    # Assert
    assert info.value.code == 3
    assert message in capsys.readouterr().err
