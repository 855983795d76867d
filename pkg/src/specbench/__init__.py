"""Benchmark engine for LTL-specified reinforcement learning tasks."""

__version__ = "0.1.0"

from .ltl import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    LassoTrace,
    Next,
    Not,
    Or,
    TrueBool,
    FalseBool,
    Until,
    alphabet,
    format_formula,
    formula_size,
    holds_on_lasso,
    make_trace,
    nnf,
    normalize,
)
from .parser import FormulaSyntaxError, parse
from .progression import Verdict, progress, run_progression, simplify
from .automaton import (
    BuchiAutomaton,
    CompileBudgetExceeded,
    Monitor,
    MonitorStatus,
    accepts,
    compile_formula,
    nonempty_states,
    step_monitor,
)
