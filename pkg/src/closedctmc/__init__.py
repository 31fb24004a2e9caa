"""Steady-state probabilities and availability of closed CTMC models.

Closed forms are derived for models built from decision hubs and
sequential chains, and checked against a dense generator-matrix solve and a
trajectory simulator.
"""

__version__ = "0.1.0"

from .derivation import (
    Derivation,
    derive_cycle_rates,
    derive_cycle_sojourn,
    derive_hub,
    derive_tree,
    express_state,
)
from .expr import (
    Const,
    NonFiniteResult,
    Prod,
    Quot,
    RateExpr,
    Recip,
    Sum,
    Sym,
    UnboundSymbol,
    equivalent,
    evaluate,
    read,
    render,
    sample_rates,
)
from .model import (
    ErrorKind,
    GeneratorMatrix,
    Model,
    ModelError,
    State,
    SteadyState,
    Transition,
    availability,
    build_generator,
    exit_rate,
    sojourn_time,
)
from .oracle import SimEstimate, SingularSystem, residual, simulate, solve, solve_steady_state
from .structure import Decomposition, Pattern, UnsupportedStructure, classify
from .text import ParseError, emit_json, parse_model, serialize_model

__all__ = [
    "Const", "Decomposition", "Derivation", "ErrorKind", "GeneratorMatrix", "Model",
    "ModelError", "NonFiniteResult", "ParseError", "Pattern", "Prod", "Quot", "RateExpr",
    "Recip", "SimEstimate", "SingularSystem", "State", "SteadyState", "Sum", "Sym",
    "Transition", "UnboundSymbol", "UnsupportedStructure", "availability",
    "build_generator", "classify", "derive_cycle_rates", "derive_cycle_sojourn",
    "derive_hub", "derive_tree", "emit_json", "equivalent", "evaluate", "exit_rate",
    "express_state", "parse_model", "read", "render", "residual", "sample_rates",
    "serialize_model", "simulate", "sojourn_time", "solve", "solve_steady_state",
]
