"""One-step LTL progression with syntactic simplification.

``progress(phi, sigma)`` rewrites a formula against one observed label set
to the obligation remaining on the trace suffix, satisfying

    holds(phi, sigma . w) == holds(progress(phi, sigma), w)

for every continuation w.  Folding a trace through ``progress`` yields an
online verdict: True means the specification is already satisfied by the
consumed finite prefix, False means no extension can satisfy it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .ltl import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    FalseBool,
    Formula,
    Implies,
    LtlError,
    Next,
    Not,
    Or,
    TrueBool,
    Until,
    conj_members,
    disj_members,
    format_formula,
    nnf,
)


class Verdict(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    OPEN = "open"


def simplify(phi: Formula) -> Formula:
    """Semantics-preserving syntactic cleanup.

    Constant folding, idempotence, absorption, complementary-literal
    collapse, and deterministic ordering of commutative operands.  No
    semantic (BDD/SAT) canonicalization: cost stays linear in formula size,
    and equality checks downstream are structural.
    """
    if isinstance(phi, (TrueBool, FalseBool, Atom)):
        return phi
    if isinstance(phi, Not):
        op = simplify(phi.operand)
        if isinstance(op, TrueBool):
            return FALSE
        if isinstance(op, FalseBool):
            return TRUE
        if isinstance(op, Not):
            return op.operand
        return Not(op)
    if isinstance(phi, (And, Or)):
        return _simplify_junction(phi)
    if isinstance(phi, Implies):
        left = simplify(phi.left)
        right = simplify(phi.right)
        if isinstance(left, TrueBool):
            return right
        if isinstance(left, FalseBool) or isinstance(right, TrueBool):
            return TRUE
        return Implies(left, right)
    if isinstance(phi, Next):
        op = simplify(phi.operand)
        if isinstance(op, (TrueBool, FalseBool)):
            return op
        return Next(op)
    if isinstance(phi, Eventually):
        op = simplify(phi.operand)
        if isinstance(op, (TrueBool, FalseBool)):
            return op
        if isinstance(op, Eventually):
            return op
        return Eventually(op)
    if isinstance(phi, Always):
        op = simplify(phi.operand)
        if isinstance(op, (TrueBool, FalseBool)):
            return op
        if isinstance(op, Always):
            return op
        return Always(op)
    if isinstance(phi, Until):
        left = simplify(phi.left)
        right = simplify(phi.right)
        if isinstance(right, (TrueBool, FalseBool)):
            return right
        if isinstance(left, FalseBool):
            return right
        if left == right:
            return left
        return Until(left, right)
    raise LtlError(f"unknown formula node {phi!r}")


def _complement(phi: Formula) -> Formula | None:
    if isinstance(phi, Not):
        return phi.operand
    if isinstance(phi, Atom):
        return Not(phi)
    return None


def _simplify_junction(phi: Formula) -> Formula:
    is_and = isinstance(phi, And)
    members_of = conj_members if is_and else disj_members
    unit, zero = (TRUE, FALSE) if is_and else (FALSE, TRUE)

    seen: dict[Formula, None] = {}
    for raw in members_of(phi):
        m = simplify(raw)
        for part in members_of(m):
            if part == zero:
                return zero
            if part == unit:
                continue
            seen.setdefault(part, None)
    ops = list(seen)
    if not ops:
        return unit
    # complementary literals: x & !x -> false, x | !x -> true
    opset = set(ops)
    for m in ops:
        comp = _complement(m)
        if comp is not None and comp in opset:
            return zero
    # absorption: x & (x | y) -> x  /  x | (x & y) -> x
    other_members = disj_members if is_and else conj_members
    kept = []
    for m in ops:
        absorbed = False
        if isinstance(m, Or if is_and else And):
            inner = set(other_members(m))
            if any(o is not m and o in inner for o in ops):
                absorbed = True
        if not absorbed:
            kept.append(m)
    kept.sort(key=format_formula)
    out = kept[-1]
    ctor = And if is_and else Or
    for m in reversed(kept[:-1]):
        out = ctor(m, out)
    return out


def progress(phi: Formula, sigma: Iterable[str]) -> Formula:
    """Progress phi over one label set; the result is simplified.

    Callers normally pass formulas in negation normal form (see
    :func:`specbench.ltl.nnf`), but every operator progresses soundly:
    negation and implication commute with progression pointwise.
    """
    labels = frozenset(sigma)
    return simplify(_progress(phi, labels))


def _progress(phi: Formula, sigma: frozenset[str]) -> Formula:
    if isinstance(phi, (TrueBool, FalseBool)):
        return phi
    if isinstance(phi, Atom):
        return TRUE if phi.name in sigma else FALSE
    if isinstance(phi, Not):
        return Not(_progress(phi.operand, sigma))
    if isinstance(phi, And):
        return And(_progress(phi.left, sigma), _progress(phi.right, sigma))
    if isinstance(phi, Or):
        return Or(_progress(phi.left, sigma), _progress(phi.right, sigma))
    if isinstance(phi, Implies):
        return Implies(_progress(phi.left, sigma), _progress(phi.right, sigma))
    if isinstance(phi, Next):
        return phi.operand
    if isinstance(phi, Until):
        return Or(_progress(phi.right, sigma), And(_progress(phi.left, sigma), phi))
    if isinstance(phi, Eventually):
        return Or(_progress(phi.operand, sigma), phi)
    if isinstance(phi, Always):
        return And(_progress(phi.operand, sigma), phi)
    raise LtlError(f"unknown formula node {phi!r}")


@dataclass
class ProgressionState:
    """Mutable fold state for online monitoring of one trace."""

    formula: Formula
    verdict: Verdict = Verdict.OPEN
    steps_to_decision: int | None = None
    _step: int = 0

    def feed(self, sigma: Iterable[str]) -> Verdict:
        self._step += 1
        if self.verdict is not Verdict.OPEN:
            return self.verdict
        self.formula = progress(self.formula, sigma)
        if isinstance(self.formula, TrueBool):
            self.verdict = Verdict.SATISFIED
            self.steps_to_decision = self._step
        elif isinstance(self.formula, FalseBool):
            self.verdict = Verdict.VIOLATED
            self.steps_to_decision = self._step
        return self.verdict


def start_progression(phi: Formula) -> ProgressionState:
    """Normalize phi and pre-resolve constant formulas (decision step 0)."""
    f = simplify(nnf(phi))
    state = ProgressionState(formula=f)
    if isinstance(f, TrueBool):
        state.verdict = Verdict.SATISFIED
        state.steps_to_decision = 0
    elif isinstance(f, FalseBool):
        state.verdict = Verdict.VIOLATED
        state.steps_to_decision = 0
    return state


def run_progression(
    phi: Formula, trace: Sequence[Iterable[str]]
) -> tuple[Verdict, int | None]:
    """Fold ``progress`` over a finite trace.

    Returns the verdict and the 1-based index of the deciding symbol
    (0 if phi was already constant, None while open at trace end).
    """
    state = start_progression(phi)
    for sigma in trace:
        if state.verdict is not Verdict.OPEN:
            break
        state.feed(sigma)
    return state.verdict, state.steps_to_decision
