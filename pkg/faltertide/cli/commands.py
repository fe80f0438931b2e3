"""Subcommands of the `faltertide` Command-Line Interface.

The `commands` module contains the `pydantic` models describing every
subcommand, the environment `Settings`, the resolved `RunConfig` and the
command implementations. Each implementation takes a `RunConfig`, writes its
report (text or JSON) and returns the process exit status:

    0  true / success         2  true within the flexible-quantifier bound
    1  false / failure        3  input error
                              4  false within the flexible-quantifier bound

Options given on the command line take precedence over `FALTERTIDE_*`
environment variables, which take precedence over the defaults.
"""


# Standard
import logging
import pathlib
import random
import sys
import time

# Third-Party
import pydantic
import pydantic_settings

# Local
from .. import continuous, discrete, hol, hol_library, timeset
from ..errors import InputError
from ..generators import random_falter, random_stutter
from ..interp import Interpretation, Signature
from ..models import (
    AgreementReport,
    DenoteReport,
    Disagreement,
    EquivReport,
    EvalReport,
    HolItem,
    HolReport,
    InvarianceReport,
    ParseReport,
    Rational,
    ReparamFile,
    Report,
    Violation,
    load_behavior,
    load_model,
    load_trace,
)
from ..syntax import Formula, as_tree, is_flex_free, parse
from ..traces import ContTrace, DiscreteBehavior, embed_discrete, stutter_equiv_cont, stutter_equiv_disc, stutter_witness
from ..verdicts import FlexBound

# Typing
from typing import Callable, Dict, List, Literal, Optional, Tuple


# Constants
logger = logging.getLogger(__name__)
DATA = pathlib.Path(__file__).resolve().parent.parent / "data"
DEFAULT_MODEL = DATA / "models" / "pair.json"
DEFAULT_CORPUS = DATA / "corpus.tla"
DEFAULT_LASSOS = DATA / "lassos"
Semantics = Literal["disc", "cont"]
Format = Literal["text", "json"]


# ----------------------------------------------------------------------------
# Configuration
# ----------------------------------------------------------------------------


class Settings(pydantic_settings.BaseSettings):
    """Defaults read from `FALTERTIDE_*` environment variables."""

    model_config = pydantic_settings.SettingsConfigDict(env_prefix="FALTERTIDE_")

    seed: int = 0
    flex_bound: int = pydantic.Field(1, ge=0)
    trials: int = pydantic.Field(20, ge=1)
    verbose: bool = False


class _Command(pydantic.BaseModel):
    """Options shared by every subcommand."""

    model_config = pydantic.ConfigDict(extra="forbid")

    format: Optional[Format] = pydantic.Field(None, description="report format (default: text)")
    output: Optional[pathlib.Path] = pydantic.Field(None, description="write the report to this file")
    verbose: Optional[bool] = pydantic.Field(None, description="log debug output to stderr")


class ParseCommand(_Command):
    """Arguments of `parse`."""

    model: pathlib.Path = pydantic.Field(description="JSON model file")
    formula: str = pydantic.Field(description="formula file or inline formula")


class EvalDiscCommand(_Command):
    """Arguments of `eval-disc`."""

    model: pathlib.Path = pydantic.Field(description="JSON model file")
    formula: str = pydantic.Field(description="formula file or inline formula")
    trace: pathlib.Path = pydantic.Field(description="JSON trace file")
    flex_bound: Optional[int] = pydantic.Field(None, ge=0, description="extra stutters per position for \\AA")


class EvalContCommand(EvalDiscCommand):
    """Arguments of `eval-cont`."""

    samples: Optional[List[str]] = pydantic.Field(None, description="instants to check coherence at")


class DenoteCommand(EvalDiscCommand):
    """Arguments of `denote`."""


class EquivCommand(_Command):
    """Arguments of `equiv`."""

    trace: List[pathlib.Path] = pydantic.Field(description="the two JSON trace files")
    semantics: Optional[Semantics] = pydantic.Field(None, description="compare as behaviors or traces (default: disc)")

    @pydantic.field_validator("trace")
    @classmethod
    def _two(cls, value: List[pathlib.Path]) -> List[pathlib.Path]:
        if len(value) != 2:
            raise ValueError("give exactly two traces")
        return value


class InvarianceCommand(_Command):
    """Arguments of `invariance`."""

    model: Optional[pathlib.Path] = pydantic.Field(None, description="JSON model file (default: shipped)")
    formula: Optional[str] = pydantic.Field(None, description="formula file or inline formula")
    corpus: Optional[pathlib.Path] = pydantic.Field(None, description="formula corpus (default: shipped)")
    trace: Optional[List[pathlib.Path]] = pydantic.Field(None, description="JSON trace files (default: shipped)")
    semantics: Optional[Semantics] = pydantic.Field(None, description="stutter behaviors or falter traces (default: disc)")
    flex_bound: Optional[int] = pydantic.Field(None, ge=0, description="extra stutters per position for \\AA")
    seed: Optional[int] = pydantic.Field(None, description="random seed")
    trials: Optional[int] = pydantic.Field(None, ge=1, description="random trials per formula and trace")


class AgreementCommand(_Command):
    """Arguments of `agreement`."""

    model: Optional[pathlib.Path] = pydantic.Field(None, description="JSON model file (default: shipped)")
    formula: Optional[str] = pydantic.Field(None, description="formula file or inline formula")
    corpus: Optional[pathlib.Path] = pydantic.Field(None, description="formula corpus (default: shipped)")
    trace: Optional[List[pathlib.Path]] = pydantic.Field(None, description="JSON lasso files (default: shipped)")


class HolCheckCommand(_Command):
    """Arguments of `hol-check`."""

    derivations: Optional[pathlib.Path] = pydantic.Field(None, description="S-expression derivation file")
    library: Optional[bool] = pydantic.Field(None, description="check the built-in derivation library")
    mutations: Optional[int] = pydantic.Field(None, ge=1, description="check that this many library mutants are rejected")


class Cli(pydantic.BaseModel):
    """Command-line arguments: exactly one subcommand."""

    parse: Optional[ParseCommand] = pydantic.Field(None, description="print a formula without its sugar")
    eval_disc: Optional[EvalDiscCommand] = pydantic.Field(None, alias="eval-disc", description="evaluate on a discrete behavior")
    eval_cont: Optional[EvalContCommand] = pydantic.Field(None, alias="eval-cont", description="evaluate on a continuous trace")
    denote: Optional[DenoteCommand] = pydantic.Field(None, description="print the instants a formula holds at")
    equiv: Optional[EquivCommand] = pydantic.Field(None, description="decide stuttering equivalence")
    invariance: Optional[InvarianceCommand] = pydantic.Field(None, description="check invariance under stuttering and faltering")
    agreement: Optional[AgreementCommand] = pydantic.Field(None, description="cross-check the two semantics")
    hol_check: Optional[HolCheckCommand] = pydantic.Field(None, alias="hol-check", description="check higher-order logic derivations")

    def selected(self) -> Tuple[str, _Command]:
        """Name and arguments of the chosen subcommand."""
        for (name, field) in type(self).model_fields.items():
            command = getattr(self, name)
            if command is not None:
                return field.alias or name, command
        raise InputError("no command given")


class RunConfig(pydantic.BaseModel):
    """Fully resolved configuration of one command run.

    Attributes:
        command (str): Subcommand name.
        model (Optional[pathlib.Path]): Model file.
        formula (Optional[str]): Formula file or inline formula.
        corpus (Optional[pathlib.Path]): Formula corpus, one formula per line.
        traces (List[pathlib.Path]): Trace files.
        semantics (Semantics): `disc` or `cont`.
        flex_bound (int): Bound of flexible quantifiers.
        samples (List[Fraction]): Instants for the coherence check.
        seed (int): Random seed.
        trials (int): Random trials per item.
        format (Format): Report format.
        output (Optional[pathlib.Path]): Report file, standard output if unset.
        verbose (bool): Whether to log debug output.
        derivations (Optional[pathlib.Path]): Derivation file.
        library (bool): Whether to check the derivation library.
        mutations (Optional[int]): Size of the mutation corpus to check.
    """

    model_config = pydantic.ConfigDict(extra="forbid")

    command: str
    model: Optional[pathlib.Path] = None
    formula: Optional[str] = None
    corpus: Optional[pathlib.Path] = None
    traces: List[pathlib.Path] = []
    semantics: Semantics = "disc"
    flex_bound: int = pydantic.Field(1, ge=0)
    samples: List[Rational] = []
    seed: int = 0
    trials: int = pydantic.Field(20, ge=1)
    format: Format = "text"
    output: Optional[pathlib.Path] = None
    verbose: bool = False
    derivations: Optional[pathlib.Path] = None
    library: bool = False
    mutations: Optional[int] = None

    @classmethod
    def resolve(cls, name: str, command: pydantic.BaseModel, settings: Settings) -> "RunConfig":
        """Merges command-line options over the environment settings.

        Args:
            name (str): Subcommand name.
            command (pydantic.BaseModel): Parsed subcommand arguments; unset
                options are `None`.
            settings (Settings): Environment configuration.

        Returns:
            RunConfig: The resolved configuration.
        """
        given = command.model_dump(exclude_none=True)
        trace = given.pop("trace", [])
        given["traces"] = trace if isinstance(trace, list) else [trace]
        if name in ("eval-disc", "eval-cont"):
            given["semantics"] = "disc" if name == "eval-disc" else "cont"
        if name == "denote":
            given["semantics"] = "cont"
        return cls(**{**settings.model_dump(), **given, "command": name})

    @property
    def bound(self) -> FlexBound:
        """Finitization of flexible quantifiers."""
        return FlexBound(self.flex_bound)


# ----------------------------------------------------------------------------
# Inputs and outputs
# ----------------------------------------------------------------------------


def read_formula(text: str) -> Tuple[str, str]:
    """Contents and source name of a formula given as a file or inline."""
    path = pathlib.Path(text)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8"), str(path)
    except OSError:
        pass
    return text, "<formula>"


def read_corpus(path: pathlib.Path, sig: Signature) -> List[Tuple[str, Formula]]:
    """Formulas of a corpus file, one per line; `#` starts a comment line.

    Raises:
        InputError: If the file cannot be read or a formula is malformed.
    """
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read corpus: {exc.strerror}", str(path)) from None
    formulas = []
    for (number, line) in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            formulas.append((text, parse(text, sig, source=str(path))))
        except InputError as error:
            (error.line, error.column) = (number, (error.column or 1) + len(line) - len(line.lstrip()))
            raise
    return formulas


def _model(cfg: RunConfig) -> Tuple[Signature, Interpretation]:
    if cfg.model is None:
        raise InputError("a model file is required (--model)")
    return load_model(cfg.model)


def _formula(cfg: RunConfig, sig: Signature) -> Tuple[str, Formula]:
    if cfg.formula is None:
        raise InputError("a formula is required (--formula)")
    (text, source) = read_formula(cfg.formula)
    return text.strip(), parse(text, sig, source=source)


def _formulas(cfg: RunConfig, sig: Signature) -> List[Tuple[str, Formula]]:
    if cfg.formula is not None:
        return [_formula(cfg, sig)]
    formulas = read_corpus(cfg.corpus or DEFAULT_CORPUS, sig)
    if not formulas:
        raise InputError("the corpus holds no formulas", str(cfg.corpus or DEFAULT_CORPUS))
    return formulas


def _trace_paths(cfg: RunConfig) -> List[pathlib.Path]:
    return cfg.traces or sorted(DEFAULT_LASSOS.glob("*.json"))


def _behavior(path: pathlib.Path, interp: Interpretation) -> DiscreteBehavior:
    behavior = load_behavior(path)
    try:
        for state in behavior.prefix + behavior.cycle:
            interp.check_state(state)
    except InputError as error:
        raise error.located(str(path)) from None
    return behavior


def _trace(path: pathlib.Path, interp: Interpretation) -> ContTrace:
    trace = load_trace(path)
    try:
        for (state, _) in trace.entries():
            interp.check_state(state)
    except InputError as error:
        raise error.located(str(path)) from None
    return trace


def emit(cfg: RunConfig, report: Report, text: str) -> int:
    """Writes a report and returns its exit status.

    Args:
        cfg (RunConfig): Configuration naming the format and output file.
        report (Report): Report of the command.
        text (str): Human readable rendering of the report.

    Returns:
        int: The report's exit status.
    """
    out = report.model_dump_json(indent=2) if cfg.format == "json" else text
    if cfg.output is None:
        sys.stdout.write(out + "\n")
    else:
        try:
            cfg.output.write_text(out + "\n", encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write report: {exc.strerror}", str(cfg.output)) from None
    logger.debug("%s finished in %.3fs with status %d", report.command, report.seconds, report.exit_code)
    return report.exit_code


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------


def cmd_parse(cfg: RunConfig) -> int:
    """Prints the desugared formula, or its syntax tree as JSON."""
    started = time.perf_counter()
    (sig, _) = _model(cfg)
    (_, formula) = _formula(cfg, sig)
    report = ParseReport(
        command=cfg.command,
        exit_code=0,
        seconds=time.perf_counter() - started,
        formula=str(formula),
        tree=as_tree(formula),
    )
    return emit(cfg, report, str(formula))


def cmd_eval(cfg: RunConfig) -> int:
    """Evaluates a formula on one trace under the configured semantics.

    With `--samples`, the continuous evaluation also checks that membership
    in the denotation matches satisfaction of the suffixes at the samples,
    and fails if it does not.

    Args:
        cfg (RunConfig): Resolved configuration.

    Returns:
        int: Exit status of the verdict (1 if the coherence check fails).
    """
    started = time.perf_counter()
    (sig, interp) = _model(cfg)
    (text, formula) = _formula(cfg, sig)
    if len(cfg.traces) != 1:
        raise InputError("exactly one trace is required (--trace)")
    path = cfg.traces[0]

    coherent = None
    if cfg.semantics == "disc":
        verdict = discrete.eval_disc(formula, {}, _behavior(path, interp), interp, cfg.bound)
    else:
        trace = _trace(path, interp)
        verdict = continuous.sat_cont(formula, {}, trace, interp, cfg.bound)
        if cfg.samples:
            if not is_flex_free(formula):
                raise InputError("--samples needs a formula without flexible quantifiers")
            coherent = continuous.coherence_check(formula, {}, trace, cfg.samples, interp)

    report = EvalReport.of(cfg.command, text, str(path), cfg.semantics, verdict)
    exit_code = 1 if coherent is False else report.exit_code
    report = report.model_copy(
        update={"seconds": time.perf_counter() - started, "coherent": coherent, "exit_code": exit_code}
    )
    lines = [verdict.render()]
    if coherent is not None:
        lines.append("coherent" if coherent else "incoherent: denotation and suffix satisfaction differ")
    return emit(cfg, report, "\n".join(lines))


def cmd_denote(cfg: RunConfig) -> int:
    """Prints the set of instants at which a formula holds on a trace."""
    started = time.perf_counter()
    (sig, interp) = _model(cfg)
    (text, formula) = _formula(cfg, sig)
    if len(cfg.traces) != 1:
        raise InputError("exactly one trace is required (--trace)")
    result = continuous.denote(formula, {}, _trace(cfg.traces[0], interp), interp, cfg.bound)
    rendered = timeset.render(result.set)
    report = DenoteReport(
        command=cfg.command,
        exit_code=0,
        seconds=time.perf_counter() - started,
        formula=text,
        trace=str(cfg.traces[0]),
        timeset=rendered,
        exact=result.exact,
    )
    return emit(cfg, report, rendered if result.exact else f"{rendered} (within {cfg.bound.describe()})")


def cmd_equiv(cfg: RunConfig) -> int:
    """Decides whether two traces are stuttering equivalent."""
    started = time.perf_counter()
    (first, second) = cfg.traces
    stutter = None
    if cfg.semantics == "disc":
        equivalent = stutter_equiv_disc(load_behavior(first), load_behavior(second))
    else:
        (a, b) = (load_trace(first), load_trace(second))
        equivalent = stutter_equiv_cont(a, b)
        witness = stutter_witness(a, b) if equivalent else None
        stutter = None if witness is None else ReparamFile.of(witness)
    report = EquivReport(
        command=cfg.command,
        exit_code=0 if equivalent else 1,
        seconds=time.perf_counter() - started,
        traces=(str(first), str(second)),
        semantics=cfg.semantics,
        equivalent=equivalent,
        stutter=stutter,
    )
    text = "equivalent" if equivalent else "not equivalent"
    if stutter is not None:
        text += f"\nstutter {stutter.build().render()}"
    return emit(cfg, report, text)


def cmd_invariance(cfg: RunConfig) -> int:
    """Checks verdicts under random stutter expansions or falters.

    Discrete runs expand each behavior randomly and compare verdicts;
    continuous runs pull denotations back along random stutters and check
    that true boxes stay true under random falters. Formulas with flexible
    quantifiers are skipped.

    Args:
        cfg (RunConfig): Resolved configuration.

    Returns:
        int: 0 if no violation was found, 1 otherwise.
    """
    started = time.perf_counter()
    (sig, interp) = load_model(cfg.model or DEFAULT_MODEL)
    formulas = _formulas(cfg, sig)
    paths = _trace_paths(cfg)
    rng = random.Random(cfg.seed)  # noqa: S311
    violations: List[Violation] = []
    checked = 0

    for (text, formula) in formulas:
        if not is_flex_free(formula):
            logger.info("skipping %s: flexible quantifiers", text)
            continue
        checked += 1
        for path in paths:
            if cfg.semantics == "disc":
                behavior = _behavior(path, interp)
                expected = discrete.eval_disc(formula, {}, behavior, interp, cfg.bound).kind.value
                found = discrete.stutter_invariance_violations(formula, {}, behavior, interp, cfg.trials, cfg.bound, rng)
                violations.extend(
                    Violation(
                        formula=text,
                        trace=str(path),
                        expected=expected,
                        found=verdict.kind.value,
                        prefix_repeats=list(prefix),
                        cycle_repeats=list(cycle),
                    )
                    for (prefix, cycle, verdict) in found
                )
            else:
                violations.extend(_falter_trials(text, formula, path, _trace(path, interp), interp, cfg.trials, rng))

    report = InvarianceReport(
        command=cfg.command,
        exit_code=1 if violations else 0,
        seconds=time.perf_counter() - started,
        semantics=cfg.semantics,
        seed=cfg.seed,
        trials=cfg.trials,
        checked=checked,
        violations=violations,
    )
    lines = [f"{checked} formulas x {len(paths)} traces x {cfg.trials} trials: {len(violations)} violations"]
    for v in violations:
        how = f"repeats {v.prefix_repeats}/{v.cycle_repeats}" if v.reparam is None else f"reparam {v.reparam.build().render()}"
        lines.append(f"  {v.formula} on {v.trace}: {v.expected} became {v.found} ({how})")
    return emit(cfg, report, "\n".join(lines))


def _falter_trials(
    text: str,
    formula: Formula,
    path: pathlib.Path,
    trace: ContTrace,
    interp: Interpretation,
    trials: int,
    rng: random.Random,
) -> List[Violation]:
    """Random stutter and falter checks of one formula on one trace."""
    out = []
    for _ in range(trials):
        stutter = random_stutter(rng)
        if not continuous.check_reparam_invariance(formula, {}, trace, stutter, interp):
            out.append(Violation(formula=text, trace=str(path), expected="pullback", found="differs", reparam=ReparamFile.of(stutter)))
        falter = random_falter(rng)
        if not continuous.falter_check(formula, {}, trace, falter, interp):
            out.append(Violation(formula=text, trace=str(path), expected="True", found="False", reparam=ReparamFile.of(falter)))
    return out


def cmd_agreement(cfg: RunConfig) -> int:
    """Cross-checks the discrete semantics against the continuous one.

    Every formula is evaluated on every lasso, and on the lasso embedded with
    unit steps; the command fails if any pair of verdicts differs.

    Args:
        cfg (RunConfig): Resolved configuration.

    Returns:
        int: 0 if the semantics agree everywhere, 1 otherwise.
    """
    started = time.perf_counter()
    (sig, interp) = load_model(cfg.model or DEFAULT_MODEL)
    formulas = _formulas(cfg, sig)
    for (text, formula) in formulas:
        if not is_flex_free(formula):
            raise InputError(f"agreement needs formulas without flexible quantifiers: {text}")
    behaviors = [(path, _behavior(path, interp)) for path in _trace_paths(cfg)]
    if not behaviors:
        raise InputError("no lassos given")

    disagreements = []
    for (text, formula) in formulas:
        for (path, behavior) in behaviors:
            disc = discrete.eval_disc(formula, {}, behavior, interp)
            cont = continuous.sat_cont(formula, {}, embed_discrete(behavior), interp)
            if disc.holds != cont.holds:
                logger.debug("%s disagrees on %s", text, path)
                disagreements.append(
                    Disagreement(formula=text, trace=str(path), discrete=disc.kind.value, continuous=cont.kind.value)
                )

    report = AgreementReport(
        command=cfg.command,
        exit_code=1 if disagreements else 0,
        seconds=time.perf_counter() - started,
        formulas=len(formulas),
        traces=len(behaviors),
        disagreements=disagreements,
    )
    lines = [f"{len(formulas)} formulas x {len(behaviors)} lassos: {len(disagreements)} disagreements"]
    lines.extend(f"  {d.formula} on {d.trace}: {d.discrete} vs {d.continuous}" for d in disagreements)
    return emit(cfg, report, "\n".join(lines))


def cmd_hol_check(cfg: RunConfig) -> int:
    """Checks derivations from a file, the built-in library, or its mutants.

    Mutants pass when they are rejected.

    Args:
        cfg (RunConfig): Resolved configuration.

    Returns:
        int: 0 if every derivation checks (and every mutant is rejected).
    """
    started = time.perf_counter()
    if cfg.derivations is None and not cfg.library and cfg.mutations is None:
        raise InputError("give --derivations, --library or --mutations")

    items: List[HolItem] = []
    if cfg.derivations is not None:
        try:
            text = cfg.derivations.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read derivations: {exc.strerror}", str(cfg.derivations)) from None
        for (i, d) in enumerate(hol.parse_sexp(text, str(cfg.derivations))):
            items.append(HolItem.of(f"{cfg.derivations}#{i + 1}", hol.check(d)))
    library = hol_library.library()
    if cfg.library:
        items.extend(HolItem.of(name, hol.check(d)) for (name, d) in library.items())
    if cfg.mutations is not None:
        for (i, mutant) in enumerate(hol_library.mutations(library, cfg.mutations)):
            result = hol.check(mutant)
            items.append(
                HolItem(name=f"mutant#{i + 1}", ok=not result.ok, rule=result.rule, path=list(result.path), reason=result.reason or "accepted")
            )

    failed = [item for item in items if not item.ok]
    report = HolReport(
        command=cfg.command,
        exit_code=1 if failed else 0,
        seconds=time.perf_counter() - started,
        derivations=items,
    )
    lines = [f"{len(items) - len(failed)}/{len(items)} passed"]
    lines.extend(f"  {item.name}: {item.reason}" for item in failed)
    return emit(cfg, report, "\n".join(lines))


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "parse": cmd_parse,
    "eval-disc": cmd_eval,
    "eval-cont": cmd_eval,
    "denote": cmd_denote,
    "equiv": cmd_equiv,
    "invariance": cmd_invariance,
    "agreement": cmd_agreement,
    "hol-check": cmd_hol_check,
}
