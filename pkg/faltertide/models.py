"""File Formats and Reports.

The `models` module contains the `pydantic` schemas of the JSON files the
engine reads (models, traces, reparameterizations) and writes (reports), and
the loaders turning validated files into domain objects.

Exact rationals are written as `"p/q"` strings (integers may be written
plainly); floating point numbers are rejected.
"""


# Standard
import itertools
import logging
import pathlib
from fractions import Fraction

# Third-Party
import pydantic

# Local
from . import hol
from .errors import ModelError, TimeSetError, TraceError
from .interp import Interpretation, Signature
from .timeset import rat, render_rat
from .traces import ContTrace, DiscreteBehavior, Reparam, State, as_behavior
from .verdicts import Verdict, Witness

# Typing
from typing import Annotated, Any, Dict, List, Optional, Tuple, Union


# Constants
logger = logging.getLogger(__name__)


def _rational(value: Any) -> Fraction:
    try:
        return rat(value)
    except TimeSetError as exc:
        raise ValueError(str(exc)) from None


Rational = Annotated[
    Fraction,
    pydantic.BeforeValidator(_rational),
    pydantic.PlainSerializer(render_rat, return_type=str),
]


class _Schema(pydantic.BaseModel):
    """Strict base for file schemas."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)


# ----------------------------------------------------------------------------
# Model files
# ----------------------------------------------------------------------------


class FunctionRow(_Schema):
    """One entry of a function table given row by row."""

    args: List[str]
    value: str


class FunctionSpec(_Schema):
    """Function symbol with its table.

    The table is either an `arity`-dimensional nested array indexed by domain
    positions (a plain value for constants) or a list of rows.
    """

    arity: int = pydantic.Field(ge=0)
    table: Optional[Union[str, List[Any]]] = None
    rows: Optional[List[FunctionRow]] = None

    @pydantic.model_validator(mode="after")
    def _one_table(self) -> "FunctionSpec":
        if (self.table is None) == (self.rows is None):
            raise ValueError("give exactly one of `table` and `rows`")
        return self

    def entries(self, domain: Tuple[str, ...]) -> Dict[Tuple[str, ...], str]:
        """Table as a dictionary from argument tuples to values."""
        if self.rows is not None:
            return {tuple(row.args): row.value for row in self.rows}
        out = {}
        for indices in itertools.product(range(len(domain)), repeat=self.arity):
            cell: Any = self.table
            for i in indices:
                if not isinstance(cell, list) or len(cell) != len(domain):
                    raise ModelError(f"table must have {len(domain)} entries per dimension")
                cell = cell[i]
            if not isinstance(cell, str):
                raise ModelError(f"table cell {indices} is not a domain element")
            out[tuple(domain[i] for i in indices)] = cell
        return out


class RelationSpec(_Schema):
    """Relation symbol with its extension."""

    arity: int = pydantic.Field(ge=0)
    rows: List[List[str]] = []


class ModelFile(_Schema):
    """Signature and finite interpretation.

    Attributes:
        domain (List[str]): Domain elements, in order.
        variables (List[str]): Declared flexible variables.
        functions (Dict[str, FunctionSpec]): Function symbols.
        relations (Dict[str, RelationSpec]): Relation symbols.
    """

    domain: List[str] = pydantic.Field(min_length=1)
    variables: List[str] = []
    functions: Dict[str, FunctionSpec] = {}
    relations: Dict[str, RelationSpec] = {}

    def build(self) -> Tuple[Signature, Interpretation]:
        """Checks the tables and builds the interpretation."""
        domain = tuple(self.domain)
        functions = {name: spec.arity for (name, spec) in self.functions.items()}
        # Domain elements double as constants unless a function shadows them
        functions.update({e: 0 for e in domain if e not in functions and e not in self.relations})
        signature = Signature(
            functions=functions,
            relations={name: spec.arity for (name, spec) in self.relations.items()},
            flexible=tuple(self.variables),
        )
        interp = Interpretation(
            signature=signature,
            domain=domain,
            functions={name: spec.entries(domain) for (name, spec) in self.functions.items()},
            relations={name: frozenset(tuple(r) for r in spec.rows) for (name, spec) in self.relations.items()},
        )
        return signature, interp


# ----------------------------------------------------------------------------
# Trace files
# ----------------------------------------------------------------------------


class Entry(_Schema):
    """A state, held for `duration` in continuous traces."""

    state: Dict[str, str]
    duration: Optional[Rational] = None


class TraceFile(_Schema):
    """Lasso of states, discrete or continuous.

    Without durations the file describes a discrete behavior; with durations
    on every entry it describes a continuous trace. A discrete behavior read
    as a trace holds each state for one time unit.
    """

    variables: List[str]
    prefix: List[Entry] = []
    cycle: List[Entry] = pydantic.Field(min_length=1)

    @pydantic.model_validator(mode="after")
    def _consistent(self) -> "TraceFile":
        timed = {e.duration is not None for e in self.prefix + self.cycle}
        if len(timed) > 1:
            raise ValueError("either every entry or no entry has a duration")
        for entry in self.prefix + self.cycle:
            if sorted(entry.state) != sorted(self.variables):
                raise ValueError(f"state {entry.state} does not assign exactly {self.variables}")
        return self

    @property
    def continuous(self) -> bool:
        """Whether the entries carry durations."""
        return self.cycle[0].duration is not None

    def to_trace(self) -> ContTrace:
        """Continuous trace described by the file."""
        (prefix, cycle) = ([(State.of(e.state), e.duration or Fraction(1)) for e in part] for part in (self.prefix, self.cycle))
        return ContTrace(tuple(prefix), tuple(cycle))

    def to_behavior(self) -> DiscreteBehavior:
        """Discrete behavior described by the file (sampled if continuous)."""
        if self.continuous:
            return as_behavior(self.to_trace())
        return DiscreteBehavior(tuple(State.of(e.state) for e in self.prefix), tuple(State.of(e.state) for e in self.cycle))

    @classmethod
    def of_behavior(cls, behavior: DiscreteBehavior) -> "TraceFile":
        """File describing a discrete behavior."""
        return cls(
            variables=sorted(behavior.variables),
            prefix=[Entry(state=s.as_dict()) for s in behavior.prefix],
            cycle=[Entry(state=s.as_dict()) for s in behavior.cycle],
        )

    @classmethod
    def of_trace(cls, trace: ContTrace) -> "TraceFile":
        """File describing a continuous trace."""
        return cls(
            variables=sorted(trace.variables),
            prefix=[Entry(state=s.as_dict(), duration=d) for (s, d) in trace.segments],
            cycle=[Entry(state=s.as_dict(), duration=d) for (s, d) in trace.cycle],
        )


class ReparamFile(_Schema):
    """Piecewise-linear reparameterization `t -> offset + pl(t)`."""

    offset: Rational = Fraction(0)
    knots: List[Tuple[Rational, Rational]] = [(Fraction(0), Fraction(0))]
    final_slope: Rational = Fraction(1)

    def build(self) -> Reparam:
        """The reparameterization."""
        return Reparam(self.offset, tuple(self.knots), self.final_slope)

    @classmethod
    def of(cls, f: Reparam) -> "ReparamFile":
        """File describing a reparameterization."""
        return cls(offset=f.offset, knots=list(f.knots), final_slope=f.final_slope)


# ----------------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------------


class WitnessReport(_Schema):
    """Replay data of a witness chain."""

    formula: str
    bindings: Dict[str, str] = {}
    position: Optional[int] = None
    time: Optional[Rational] = None
    variable: Optional[str] = None
    behavior: Optional[TraceFile] = None
    trace: Optional[TraceFile] = None
    step: Optional[Tuple[Dict[str, str], Dict[str, str]]] = None
    nested: Optional["WitnessReport"] = None

    @classmethod
    def of(cls, witness: Witness) -> "WitnessReport":
        """Report of a witness and its nested witnesses."""
        return cls(
            formula=str(witness.formula),
            bindings=dict(witness.bindings),
            position=witness.position,
            time=witness.time,
            variable=witness.variable,
            behavior=None if witness.behavior is None else TraceFile.of_behavior(witness.behavior),
            trace=None if witness.trace is None else TraceFile.of_trace(witness.trace),
            step=None if witness.step is None else (witness.step[0].as_dict(), witness.step[1].as_dict()),
            nested=None if witness.nested is None else cls.of(witness.nested),
        )


class Report(_Schema):
    """Fields common to every command report."""

    command: str
    exit_code: int
    seconds: float = 0.0


class EvalReport(Report):
    """Verdict of one formula on one trace."""

    formula: str
    trace: str
    semantics: str
    verdict: str
    flex_bound: Optional[int] = None
    witness: Optional[WitnessReport] = None
    coherent: Optional[bool] = None

    @classmethod
    def of(cls, command: str, formula: str, trace: str, semantics: str, verdict: Verdict) -> "EvalReport":
        """Report of a verdict."""
        return cls(
            command=command,
            exit_code=verdict.exit_code,
            formula=formula,
            trace=trace,
            semantics=semantics,
            verdict=verdict.kind.value,
            flex_bound=None if verdict.bound is None else verdict.bound.max_stutter_expansion,
            witness=None if verdict.witness is None else WitnessReport.of(verdict.witness),
        )


class DenoteReport(Report):
    """Denotation of a formula on a continuous trace."""

    formula: str
    trace: str
    timeset: str
    exact: bool


class ParseReport(Report):
    """Desugared form and syntax tree of a formula."""

    formula: str
    tree: Dict[str, Any]


class EquivReport(Report):
    """Stuttering equivalence of two traces."""

    traces: Tuple[str, str]
    semantics: str
    equivalent: bool
    stutter: Optional[ReparamFile] = None


class Violation(_Schema):
    """Replayable invariance violation."""

    formula: str
    trace: str
    expected: str
    found: str
    prefix_repeats: Optional[List[int]] = None
    cycle_repeats: Optional[List[int]] = None
    reparam: Optional[ReparamFile] = None


class InvarianceReport(Report):
    """Outcome of randomized stuttering and faltering trials."""

    semantics: str
    seed: int
    trials: int
    checked: int
    violations: List[Violation] = []


class Disagreement(_Schema):
    """Formula and lasso on which the two semantics differ."""

    formula: str
    trace: str
    discrete: str
    continuous: str


class AgreementReport(Report):
    """Cross-check of the discrete and continuous semantics."""

    formulas: int
    traces: int
    disagreements: List[Disagreement] = []


class HolItem(_Schema):
    """Outcome of checking one derivation."""

    name: str
    ok: bool
    rule: Optional[str] = None
    path: List[int] = []
    reason: str = ""

    @classmethod
    def of(cls, name: str, result: hol.CheckResult) -> "HolItem":
        """Item of a check result."""
        return cls(name=name, ok=result.ok, rule=result.rule, path=list(result.path), reason=result.reason)


class HolReport(Report):
    """Outcome of checking a set of derivations."""

    derivations: List[HolItem]


# ----------------------------------------------------------------------------
# Loaders
# ----------------------------------------------------------------------------


def _read(path: Union[str, pathlib.Path], error: type) -> str:
    try:
        return pathlib.Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise error(f"cannot read {path}: {exc.strerror}", str(path)) from None


def load_model(path: Union[str, pathlib.Path]) -> Tuple[Signature, Interpretation]:
    """Reads a JSON model file.

    Args:
        path (Union[str, pathlib.Path]): Model file.

    Returns:
        Tuple[Signature, Interpretation]: Signature and interpretation.

    Raises:
        ModelError: If the file cannot be read or its tables are invalid.
        pydantic.ValidationError: If the file does not follow the schema.
    """
    model = ModelFile.model_validate_json(_read(path, ModelError))
    try:
        built = model.build()
    except ModelError as error:
        raise error.located(str(path)) from None
    logger.debug("loaded model %s: %d elements, %d variables", path, len(model.domain), len(model.variables))
    return built


def load_trace_file(path: Union[str, pathlib.Path]) -> TraceFile:
    """Reads a JSON trace file."""
    return TraceFile.model_validate_json(_read(path, TraceError))


def load_behavior(path: Union[str, pathlib.Path]) -> DiscreteBehavior:
    """Reads a discrete behavior."""
    try:
        return load_trace_file(path).to_behavior()
    except TraceError as error:
        raise error.located(str(path)) from None


def load_trace(path: Union[str, pathlib.Path]) -> ContTrace:
    """Reads a continuous trace."""
    try:
        return load_trace_file(path).to_trace()
    except TraceError as error:
        raise error.located(str(path)) from None


def load_reparam(path: Union[str, pathlib.Path]) -> Reparam:
    """Reads a reparameterization."""
    return ReparamFile.model_validate_json(_read(path, TraceError)).build()
