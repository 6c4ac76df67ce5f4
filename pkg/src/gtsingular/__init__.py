"""Exact Gelfand-Tsetlin machinery for quantum and classical gl(n).

Subpackages:

* exactalg  -- the exact coefficient field (Laurent objects in Q, X, Y)
* tableaux  -- tableaux, relation sets, admissibility, windows
* action    -- module specs, basis vectors and the gated generator action
* gtcenter  -- Gelfand-Tsetlin subalgebra action, character keys, blocks
* verify    -- executable identity suites
* cli       -- command-line front end
"""

from .exactalg import (
    QUANTUM,
    CLASSICAL,
    FieldElement,
    LaurentPoly,
    LinearExpr,
    bracket,
    dv_operator,
    euler_derivative,
    evaluate_at,
    evaluate_at_singular,
    q_pochhammer_factorial,
    tau_swap,
    DivisionByZero,
    PoleAtEvaluation,
    NegativeArgument,
)
from ._rat import Rat, rat

__all__ = [
    "QUANTUM",
    "CLASSICAL",
    "FieldElement",
    "LaurentPoly",
    "LinearExpr",
    "bracket",
    "dv_operator",
    "euler_derivative",
    "evaluate_at",
    "evaluate_at_singular",
    "q_pochhammer_factorial",
    "tau_swap",
    "DivisionByZero",
    "PoleAtEvaluation",
    "NegativeArgument",
    "Rat",
    "rat",
]
