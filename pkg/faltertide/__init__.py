"""Evaluation Engine for the Temporal Logic of Actions.

This is the `faltertide` package. It evaluates TLA formulas over finite
first-order models under two semantics, one over discrete behaviors and one
over continuous piecewise-constant traces, decides stuttering equivalence and
invariance, and checks derivations in an intuitionistic higher-order logic.

The subpackage `cli` holds the `faltertide` command-line interface.
"""


__version__ = "0.1.0"
