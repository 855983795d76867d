"""Linear temporal logic core: syntax tree, printing, normal forms, and a
brute-force satisfaction oracle over lasso traces.

Atomic propositions are interned lowercase strings (``[a-z][a-z0-9_]*``).
Formulas are immutable trees built from frozen dataclasses; structural
equality and hashing come for free, so formulas can key dicts and sets.

An infinite trace is represented finitely as a :class:`LassoTrace`
``prefix . loop^omega``; :func:`holds_on_lasso` evaluates the standard LTL
semantics on it exactly and serves as the reference oracle for every other
temporal computation in this package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

PROP_NAME_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


class LtlError(Exception):
    """Base class for errors raised by the LTL layer."""


class UnknownProposition(LtlError):
    def __init__(self, name: str):
        super().__init__(f"proposition {name!r} is not in the declared alphabet")
        self.name = name


def check_prop_name(name: str) -> str:
    """Validate (and return) an atomic-proposition name."""
    if not PROP_NAME_RE.match(name):
        raise LtlError(f"invalid proposition name {name!r}")
    return name


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class TrueBool(Formula):
    pass


@dataclass(frozen=True)
class FalseBool(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


TRUE = TrueBool()
FALSE = FalseBool()

_UNARY_OPS = {Not: "!", Next: "X", Eventually: "F", Always: "G"}
_BINARY_OPS = {And: "&", Or: "|", Until: "U", Implies: "->"}


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Yield phi and every subformula, depth-first, with repeats."""
    yield phi
    if isinstance(phi, (Not, Next, Eventually, Always)):
        yield from subformulas(phi.operand)
    elif isinstance(phi, (And, Or, Until, Implies)):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)


def alphabet(phi: Formula) -> frozenset[str]:
    """The set of atomic propositions occurring in phi."""
    return frozenset(f.name for f in subformulas(phi) if isinstance(f, Atom))


def conj_members(phi: Formula) -> tuple[Formula, ...]:
    """Flatten a nested And chain into its conjuncts."""
    if isinstance(phi, And):
        return conj_members(phi.left) + conj_members(phi.right)
    return (phi,)


def disj_members(phi: Formula) -> tuple[Formula, ...]:
    """Flatten a nested Or chain into its disjuncts."""
    if isinstance(phi, Or):
        return disj_members(phi.left) + disj_members(phi.right)
    return (phi,)


def formula_size(phi: Formula) -> int:
    """Node count of the syntax tree."""
    return sum(1 for _ in subformulas(phi))


def format_formula(phi: Formula) -> str:
    """Fully parenthesized canonical text; inverse of parsing up to
    right-nesting of And/Or chains."""
    if isinstance(phi, TrueBool):
        return "true"
    if isinstance(phi, FalseBool):
        return "false"
    if isinstance(phi, Atom):
        return phi.name
    cls = type(phi)
    if cls in _UNARY_OPS:
        return f"({_UNARY_OPS[cls]} {format_formula(phi.operand)})"
    if cls in _BINARY_OPS:
        return f"({format_formula(phi.left)} {_BINARY_OPS[cls]} {format_formula(phi.right)})"
    raise LtlError(f"unknown formula node {phi!r}")


def normalize(phi: Formula) -> Formula:
    """Right-nest And/Or chains (the shape the parser produces)."""
    if isinstance(phi, (And, Or)):
        cls = type(phi)
        ops = list(_assoc_chain(phi, cls))
        ops = [normalize(f) for f in ops]
        out = ops[-1]
        for f in reversed(ops[:-1]):
            out = cls(f, out)
        return out
    if isinstance(phi, (Not, Next, Eventually, Always)):
        return type(phi)(normalize(phi.operand))
    if isinstance(phi, (Until, Implies)):
        return type(phi)(normalize(phi.left), normalize(phi.right))
    return phi


def _assoc_chain(phi: Formula, cls: type) -> Iterator[Formula]:
    if isinstance(phi, cls):
        yield from _assoc_chain(phi.left, cls)
        yield from _assoc_chain(phi.right, cls)
    else:
        yield phi


def nnf(phi: Formula) -> Formula:
    """Negation normal form.

    Negations are pushed onto atoms, Implies is eliminated, and
    F psi is rewritten to (true U psi).  G survives as a primitive Always
    node; a negated Until expands through its Release-free dual
    ``!(a U b) == G !b | (!b U (!a & !b))``.  The result uses only
    True/False/Atom/Not(Atom)/And/Or/Next/Until/Always.
    """
    if isinstance(phi, (TrueBool, FalseBool, Atom)):
        return phi
    if isinstance(phi, And):
        return And(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, Or):
        return Or(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, Implies):
        return Or(nnf(Not(phi.left)), nnf(phi.right))
    if isinstance(phi, Next):
        return Next(nnf(phi.operand))
    if isinstance(phi, Eventually):
        return Until(TRUE, nnf(phi.operand))
    if isinstance(phi, Always):
        return Always(nnf(phi.operand))
    if isinstance(phi, Until):
        return Until(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, Not):
        inner = phi.operand
        if isinstance(inner, TrueBool):
            return FALSE
        if isinstance(inner, FalseBool):
            return TRUE
        if isinstance(inner, Atom):
            return phi
        if isinstance(inner, Not):
            return nnf(inner.operand)
        if isinstance(inner, And):
            return Or(nnf(Not(inner.left)), nnf(Not(inner.right)))
        if isinstance(inner, Or):
            return And(nnf(Not(inner.left)), nnf(Not(inner.right)))
        if isinstance(inner, Implies):
            return And(nnf(inner.left), nnf(Not(inner.right)))
        if isinstance(inner, Next):
            return Next(nnf(Not(inner.operand)))
        if isinstance(inner, Eventually):
            return Always(nnf(Not(inner.operand)))
        if isinstance(inner, Always):
            return Until(TRUE, nnf(Not(inner.operand)))
        if isinstance(inner, Until):
            nl = nnf(Not(inner.left))
            nr = nnf(Not(inner.right))
            return Or(Always(nr), Until(nr, And(nl, nr)))
    raise LtlError(f"unknown formula node {phi!r}")


def is_nnf(phi: Formula) -> bool:
    for f in subformulas(phi):
        if isinstance(f, (Implies, Eventually)):
            return False
        if isinstance(f, Not) and not isinstance(f.operand, Atom):
            return False
    return True


# ---------------------------------------------------------------------------
# Lasso traces and the satisfaction oracle


@dataclass(frozen=True)
class LassoTrace:
    """The infinite word prefix . loop^omega over label sets."""

    prefix: tuple[frozenset[str], ...]
    loop: tuple[frozenset[str], ...]

    def __post_init__(self):
        if len(self.loop) == 0:
            raise LtlError("lasso loop must be non-empty")

    @property
    def positions(self) -> int:
        return len(self.prefix) + len(self.loop)

    def symbol(self, pos: int) -> frozenset[str]:
        if pos < len(self.prefix):
            return self.prefix[pos]
        return self.loop[pos - len(self.prefix)]

    def next_pos(self, pos: int) -> int:
        nxt = pos + 1
        return len(self.prefix) if nxt >= self.positions else nxt


def make_trace(prefix: Iterable[Iterable[str]], loop: Iterable[Iterable[str]]) -> LassoTrace:
    return LassoTrace(
        tuple(frozenset(s) for s in prefix),
        tuple(frozenset(s) for s in loop),
    )


def holds_on_lasso(phi: Formula, w: LassoTrace) -> bool:
    """Standard LTL satisfaction of phi on the infinite word w, at position 0.

    Each subformula is evaluated to a truth vector over the
    ``len(prefix) + len(loop)`` distinct positions; temporal operators are
    least/greatest fixpoints over the cyclic successor structure, which
    converge within ``positions + 1`` monotone iterations.
    """
    memo: dict[Formula, tuple[bool, ...]] = {}
    return _eval_vec(phi, w, memo)[0]


def _eval_vec(phi: Formula, w: LassoTrace, memo: dict) -> tuple[bool, ...]:
    cached = memo.get(phi)
    if cached is not None:
        return cached
    n = w.positions
    nxt = [w.next_pos(p) for p in range(n)]
    if isinstance(phi, TrueBool):
        vec = (True,) * n
    elif isinstance(phi, FalseBool):
        vec = (False,) * n
    elif isinstance(phi, Atom):
        vec = tuple(phi.name in w.symbol(p) for p in range(n))
    elif isinstance(phi, Not):
        vec = tuple(not v for v in _eval_vec(phi.operand, w, memo))
    elif isinstance(phi, And):
        lv = _eval_vec(phi.left, w, memo)
        rv = _eval_vec(phi.right, w, memo)
        vec = tuple(a and b for a, b in zip(lv, rv))
    elif isinstance(phi, Or):
        lv = _eval_vec(phi.left, w, memo)
        rv = _eval_vec(phi.right, w, memo)
        vec = tuple(a or b for a, b in zip(lv, rv))
    elif isinstance(phi, Implies):
        lv = _eval_vec(phi.left, w, memo)
        rv = _eval_vec(phi.right, w, memo)
        vec = tuple((not a) or b for a, b in zip(lv, rv))
    elif isinstance(phi, Next):
        ov = _eval_vec(phi.operand, w, memo)
        vec = tuple(ov[nxt[p]] for p in range(n))
    elif isinstance(phi, Eventually):
        ov = _eval_vec(phi.operand, w, memo)
        cur = [False] * n
        for _ in range(n + 1):
            cur = [ov[p] or cur[nxt[p]] for p in range(n)]
        vec = tuple(cur)
    elif isinstance(phi, Always):
        ov = _eval_vec(phi.operand, w, memo)
        cur = [True] * n
        for _ in range(n + 1):
            cur = [ov[p] and cur[nxt[p]] for p in range(n)]
        vec = tuple(cur)
    elif isinstance(phi, Until):
        lv = _eval_vec(phi.left, w, memo)
        rv = _eval_vec(phi.right, w, memo)
        cur = [False] * n
        for _ in range(n + 1):
            cur = [rv[p] or (lv[p] and cur[nxt[p]]) for p in range(n)]
        vec = tuple(cur)
    else:
        raise LtlError(f"unknown formula node {phi!r}")
    memo[phi] = vec
    return vec
