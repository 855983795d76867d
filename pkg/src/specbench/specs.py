"""Specification corpora and samplers.

The fixed corpora are the evaluation formulas for each environment,
transliterated into the engine's concrete syntax: in-distribution (IND) and
out-of-distribution (OOD) reach-avoid chains, response / recurrence /
persistence infinite-horizon families, the independent / cooperative /
mixed multi-agent families, and the graded reach-only / reach-avoid
complexity ladder over the letter alphabet.

Samplers generate the same shapes for arbitrary sequence lengths and
disjunction counts; atoms are drawn without replacement across stages so a
stage target never doubles as a later avoid atom.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .ltl import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    LtlError,
    Not,
    Or,
    Until,
    alphabet,
)
from .parser import parse

LETTER_ALPHABET = tuple("abcdefghijkl")
ZONE_ALPHABET = ("b", "g", "m", "y")
ARM_ALPHABET = ZONE_ALPHABET
GRIPPERS_ARM_ALPHABET = tuple(
    f"{part}_{color}" for part in ("g", "a") for color in ("b", "g", "m", "y")
)


def indexed_alphabet(base: Sequence[str], n_agents: int) -> tuple[str, ...]:
    return tuple(f"{p}_{i}" for i in range(n_agents) for p in base)


class Family(enum.Enum):
    IND = "ind"
    OOD = "ood"
    REACH_ONLY = "reach_only"
    REACH_AVOID = "reach_avoid"
    RSP = "rsp"
    REC = "rec"
    PER = "per"
    INDEP = "indep"
    COOP = "coop"
    MIX = "mix"


class HorizonKind(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"


_INFINITE_FAMILIES = {Family.RSP, Family.REC, Family.PER}


class InsufficientAlphabet(LtlError):
    def __init__(self, needed: int, available: int):
        super().__init__(f"sampler needs {needed} distinct atoms, alphabet has {available}")


@dataclass(frozen=True)
class SpecRecord:
    id: str
    formula: Formula
    family: Family
    horizon_kind: HorizonKind
    n_seq: int | None = None
    n_disj: int | None = None

    def __post_init__(self):
        if self.family in _INFINITE_FAMILIES and self.horizon_kind is not HorizonKind.INFINITE:
            raise LtlError(f"{self.family} specs are infinite-horizon")


# ---------------------------------------------------------------------------
# Fixed corpora

_LETTER_IND = [
    "!(a | b) U (c & (!(d | e) U f))",
    "(F b) & (!(c | d) U (e & F f))",
    "!(c | d) U ((!e U l) & (F g))",
    "!d U ((e | k) & (!g U (h & F i)))",
    "!(e | f) U (g & F (h & (!i U j)))",
]

_LETTER_OOD = [
    "(F a) & (!(b | c) U (d & F (e & (!f U (g & F h)))))",
    "(!a U b) & (!(c | d) U (e & F (f & (!g U (h & F i)))))",
    "!b U ((c | d) & (!e U (f & F (g & (!h U (i & F l))))))",
    "!(c | d) U (e & (!f U (g & F (h & (!i U (j & F k))))))",
    "!d U ((e | f) & (!g U (h & F (i & (!j U (k & F l))))))",
]

_LETTER_RSP = [
    "(G F a) & G (a -> (F (b & F c) & (!d U e))) & G !(f | g | h | i)",
    "(G F f) & G (f -> (F (e & F d) & (!c U b))) & G !(a | g | h | i)",
    "(G F i) & G (i -> (F (h & F g) & (!b U a))) & G !(c | d | e | f)",
]

_LETTER_REC = [
    "G F a & G F b & G F c & G F d & G F e & G !(f | g | h | i | j | k)",
    "G F f & G F g & G F h & G F i & G F j & G !(a | b | c | d | e | k)",
    "G F k & G F a & G F b & G F c & G F d & G !(e | f | g | h | i | j)",
]

_ZONE_IND = [
    "!(g | y) U (m & (!g U b))",
    "(F y) & (!(y | g) U (b & F m))",
    "!(g | y) U ((!g U m) & (F b))",
    "!g U ((b | m) & (!g U (y & F b)))",
    "!(g | m) U (b & F (m & (!y U g)))",
]

_ZONE_OOD = [
    "(F y) & (!(y | g) U (b & F (m & (!y U (g & F b)))))",
    "(!g U b) & (!(b | y) U (m & F (g & (!y U (b & F m)))))",
    "!g U ((b | m) & (!g U (y & F (b & (!y U (m & F b))))))",
    "!(y | m) U (b & (!y U (g & F (m & (!g U (y & F b))))))",
    "!m U ((y | g) & (!m U (b & F (m & (!b U (g & F y))))))",
]

_ZONE_RSP = [
    "(G F b) & G (b -> F g) & G !(y | m)",
    "(G F g) & G (g -> F y) & G !(b | m)",
    "(G F m) & G (m -> F y) & G !(g | b)",
]

_ZONE_REC = [
    "G F b & G F g & G !(y | m)",
    "G F g & G F y & G !(b | m)",
    "G F m & G F y & G !(g | b)",
]

_ZONE_PER = [
    "F G y & G !(g | b | m)",
    "F G g & G !(y | b | m)",
    "F G b & G !(y | g | m)",
]

_GRIPPERS_ARM_IND = [
    "!(a_g | a_y) U (g_m & (!a_g U g_b))",
    "(F g_y) & (!(a_y | a_g) U (g_b & F g_m))",
    "!(a_g | a_y) U ((!a_g U g_m) & (F g_b))",
    "!a_g U ((g_b | g_m) & (!a_g U (g_y & F g_b)))",
    "!(a_y | a_m) U (g_b & F (g_m & (!a_y U g_g)))",
]

_GRIPPERS_ARM_OOD = [
    "(F g_y) & (!(a_y | a_g) U (g_b & F (g_m & (!a_y U (g_g & F g_b)))))",
    "(!a_g U g_b) & (!(a_b | a_y) U (g_m & F (g_g & (!a_y U (g_b & F g_m)))))",
    "!a_g U ((g_b | g_m) & (!a_g U (g_y & F (g_b & (!a_y U (g_m & F g_b))))))",
    "!(a_y | a_m) U (g_b & (!a_y U (g_g & F (g_m & (!a_g U (g_y & F g_b))))))",
    "!a_m U ((g_y | g_g) & (!a_m U (g_b & F (g_m & (!a_b U (g_g & F g_y))))))",
]

_MULTI_INDEP = [
    "(!(m_0 | y_0) U (b_0 & F g_0)) & (!(b_1 | g_1) U (m_1 & F y_1))",
    "(F b_0) & (!b_0 U (g_0 & F y_0)) & (F g_1) & (!g_1 U (m_1 & F b_1))",
    "(!g_0 U ((b_0 | m_0) & (!g_0 U y_0))) & (!b_1 U ((g_1 | y_1) & (!b_1 U m_1)))",
]

_MULTI_COOP = [
    "!(m_0 | m_1) U ((b_0 & b_1) & !(y_0 | y_1) U (g_0 & g_1))",
    "F ((b_0 & b_1) & (!(m_0 | m_1) U ((y_0 & y_1) & F (g_0 & g_1))))",
    "F ((b_0 & b_1) & F ((y_0 & y_1) & !(m_0 | m_1) U (g_0 & g_1)))",
]

_MULTI_MIX = [
    "(!m_0 U y_0) & (!b_1 U m_1) & F ((b_0 & g_1) & F (g_0 & m_1))",
    "(!y_0 U (b_0 & F g_0)) & (!b_1 U g_1) & (!(y_0 | y_1) U (b_0 & b_1))",
    "!m_0 U (b_0 & F (m_1 & F (b_0 & b_1))) & !y_1 U (g_1 & F (y_0 & F (b_0 & b_1)))",
]

_MULTI_RSP = [
    "(G F b_0) & (G F g_1) & G (b_0 -> F y_1) & G (g_1 -> F m_0) & G !(y_0 | b_1)",
    "(G F g_0) & (G F m_1) & G (g_0 -> F y_1) & G (m_1 -> F b_0) & G !(b_1 | m_0)",
    "(G F m_0) & (G F y_1) & G (m_0 -> F g_1) & G (y_1 -> g_0) & G !(m_1 | b_0)",
]

_MULTI_REC = [
    "G F (b_0 & g_1) & G F (g_0 & y_1) & G !(y_0 | m_1)",
    "G F (g_0 & y_1) & G F (y_0 & b_1) & G !(b_0 | m_1)",
    "G F (m_0 & b_1) & G F (b_0 & y_1) & G !(g_0 | g_1)",
]

_MULTI_PER = [
    "F G (y_0 & m_1) & G !(g_0 | b_0 | y_1 | b_1)",
    "F G (g_0 & b_1) & G !(y_0 | b_0 | m_1 | y_1)",
    "F G (b_0 & y_1) & G !(y_0 | g_0 | m_1 | b_1)",
]

_SINGLE_AGENT_TABLES = {
    "letter": (
        LETTER_ALPHABET,
        {
            Family.IND: _LETTER_IND,
            Family.OOD: _LETTER_OOD,
            Family.RSP: _LETTER_RSP,
            Family.REC: _LETTER_REC,
        },
    ),
    "zone": (
        ZONE_ALPHABET,
        {
            Family.IND: _ZONE_IND,
            Family.OOD: _ZONE_OOD,
            Family.RSP: _ZONE_RSP,
            Family.REC: _ZONE_REC,
            Family.PER: _ZONE_PER,
        },
    ),
    "arm-grippers": (
        ARM_ALPHABET,
        {
            Family.IND: _ZONE_IND,
            Family.OOD: _ZONE_OOD,
            Family.RSP: _ZONE_RSP,
            Family.REC: _ZONE_REC,
            Family.PER: _ZONE_PER,
        },
    ),
    "arm-grippers-arm": (
        GRIPPERS_ARM_ALPHABET,
        {
            Family.IND: _GRIPPERS_ARM_IND,
            Family.OOD: _GRIPPERS_ARM_OOD,
        },
    ),
    "zone-multi": (
        indexed_alphabet(ZONE_ALPHABET, 2),
        {
            Family.INDEP: _MULTI_INDEP,
            Family.COOP: _MULTI_COOP,
            Family.MIX: _MULTI_MIX,
            Family.RSP: _MULTI_RSP,
            Family.REC: _MULTI_REC,
            Family.PER: _MULTI_PER,
        },
    ),
}

CORPUS_ENVS = tuple(_SINGLE_AGENT_TABLES)


def corpus(env: str) -> list[SpecRecord]:
    """The fixed evaluation corpus for an environment, with stable ids."""
    try:
        env_alphabet, tables = _SINGLE_AGENT_TABLES[env]
    except KeyError:
        raise LtlError(f"unknown corpus environment {env!r}; one of {CORPUS_ENVS}") from None
    records = []
    allowed = frozenset(env_alphabet)
    for family, rows in tables.items():
        horizon = HorizonKind.INFINITE if family in _INFINITE_FAMILIES else HorizonKind.FINITE
        for i, text in enumerate(rows, start=1):
            phi = parse(text, alphabet=allowed)
            records.append(
                SpecRecord(
                    id=f"{env.replace('-', '_')}_{family.value}_{i}",
                    formula=phi,
                    family=family,
                    horizon_kind=horizon,
                )
            )
    return records


_COMPLEXITY_ROWS: list[tuple[Family, int, int, str]] = [
    (Family.REACH_ONLY, 2, 0, "F (a & F l)"),
    (Family.REACH_ONLY, 2, 0, "F (d & F g)"),
    (Family.REACH_ONLY, 2, 0, "F (f & F k)"),
    (Family.REACH_ONLY, 2, 1, "F ((a | b) & F (k | l))"),
    (Family.REACH_ONLY, 2, 1, "F ((c | d) & F (g | h))"),
    (Family.REACH_ONLY, 2, 1, "F ((e | f) & F (i | j))"),
    (Family.REACH_ONLY, 4, 0, "F (a & F (b & F (c & F d)))"),
    (Family.REACH_ONLY, 4, 0, "F (e & F (f & F (g & F h)))"),
    (Family.REACH_ONLY, 4, 0, "F (i & F (j & F (k & F l)))"),
    (Family.REACH_ONLY, 4, 1, "F ((a | b) & F ((c | d) & F ((e | f) & F (g | h))))"),
    (Family.REACH_ONLY, 4, 1, "F ((e | f) & F ((g | h) & F ((i | j) & F (k | l))))"),
    (Family.REACH_ONLY, 4, 1, "F ((i | j) & F ((k | l) & F ((a | b) & F (c | d))))"),
    (Family.REACH_AVOID, 2, 0, "!a U (b & (!c U d))"),
    (Family.REACH_AVOID, 2, 0, "!e U (f & (!g U h))"),
    (Family.REACH_AVOID, 2, 0, "!i U (j & (!k U l))"),
    (Family.REACH_AVOID, 2, 1, "!(a | b) U (c & (!(d | e) U f))"),
    (Family.REACH_AVOID, 2, 1, "!(e | f) U (g & (!(h | i) U j))"),
    (Family.REACH_AVOID, 2, 1, "!(i | j) U (k & (!(l | a) U b))"),
    (Family.REACH_AVOID, 4, 0, "!a U (b & (!c U (d & (!e U (f & (!g U h))))))"),
    (Family.REACH_AVOID, 4, 0, "!e U (f & (!g U (h & (!i U (j & (!k U l))))))"),
    (Family.REACH_AVOID, 4, 0, "!i U (j & (!k U (l & (!a U (b & (!c U d))))))"),
    (Family.REACH_AVOID, 4, 1, "!(a | b) U (c & (!(d | e) U (f & (!(g | h) U (i & (!(j | k) U l))))))"),
    (Family.REACH_AVOID, 4, 1, "!(e | f) U (g & (!(h | i) U (j & (!(k | l) U (a & (!(b | c) U d))))))"),
    (Family.REACH_AVOID, 4, 1, "!(i | j) U (k & (!(l | a) U (b & (!(c | d) U (e & (!(f | g) U h))))))"),
]


def complexity_corpus() -> list[SpecRecord]:
    """The graded reach-only / reach-avoid ladder over the letter alphabet."""
    records = []
    counters: dict[tuple[Family, int, int], int] = {}
    allowed = frozenset(LETTER_ALPHABET)
    for family, n_seq, n_disj, text in _COMPLEXITY_ROWS:
        key = (family, n_seq, n_disj)
        counters[key] = counters.get(key, 0) + 1
        records.append(
            SpecRecord(
                id=f"letter_{family.value}_{n_seq}_{n_disj}_{counters[key]}",
                formula=parse(text, alphabet=allowed),
                family=family,
                horizon_kind=HorizonKind.FINITE,
                n_seq=n_seq,
                n_disj=n_disj,
            )
        )
    return records


def full_corpus() -> list[SpecRecord]:
    out = []
    for env in CORPUS_ENVS:
        out.extend(corpus(env))
    out.extend(complexity_corpus())
    return out


# ---------------------------------------------------------------------------
# Samplers


def _draw_atoms(n: int, atoms: Sequence[str], rng: random.Random) -> list[str]:
    pool = sorted(atoms)
    if n > len(pool):
        raise InsufficientAlphabet(n, len(pool))
    return rng.sample(pool, n)


def _disjunction(atoms: Sequence[str]) -> Formula:
    out: Formula = Atom(atoms[-1])
    for a in reversed(atoms[:-1]):
        out = Or(Atom(a), out)
    return out


def sample_reach_only(
    n_seq: int,
    n_disj: int,
    atoms: Iterable[str],
    rng: random.Random,
    spec_id: str | None = None,
) -> SpecRecord:
    """Nested F-chain of ``n_seq`` stages, each a disjunction of
    ``n_disj + 1`` distinct atoms."""
    if n_seq < 1 or n_disj < 0:
        raise LtlError("n_seq must be >= 1 and n_disj >= 0")
    width = n_disj + 1
    drawn = _draw_atoms(width * n_seq, list(atoms), rng)
    stages = [drawn[i * width : (i + 1) * width] for i in range(n_seq)]
    phi: Formula = Eventually(_disjunction(stages[-1]))
    for stage in reversed(stages[:-1]):
        phi = Eventually(And(_disjunction(stage), phi))
    return SpecRecord(
        id=spec_id or f"reach_only_{n_seq}_{n_disj}",
        formula=phi,
        family=Family.REACH_ONLY,
        horizon_kind=HorizonKind.FINITE,
        n_seq=n_seq,
        n_disj=n_disj,
    )


def sample_reach_avoid(
    n_seq: int,
    n_disj: int,
    atoms: Iterable[str],
    rng: random.Random,
    spec_id: str | None = None,
) -> SpecRecord:
    """Nested until-chain: each stage avoids a disjunction of ``n_disj + 1``
    atoms until its single target (and the remaining chain) holds."""
    if n_seq < 1 or n_disj < 0:
        raise LtlError("n_seq must be >= 1 and n_disj >= 0")
    width = n_disj + 2
    drawn = _draw_atoms(width * n_seq, list(atoms), rng)
    stages = [drawn[i * width : (i + 1) * width] for i in range(n_seq)]

    def stage_formula(i: int) -> Formula:
        avoid = stages[i][: n_disj + 1]
        target: Formula = Atom(stages[i][n_disj + 1])
        if i + 1 < n_seq:
            target = And(target, stage_formula(i + 1))
        return Until(Not(_disjunction(avoid)), target)

    return SpecRecord(
        id=spec_id or f"reach_avoid_{n_seq}_{n_disj}",
        formula=stage_formula(0),
        family=Family.REACH_AVOID,
        horizon_kind=HorizonKind.FINITE,
        n_seq=n_seq,
        n_disj=n_disj,
    )


def build_infinite(
    template: Family,
    goals: Sequence[str],
    avoid: Sequence[str],
    spec_id: str | None = None,
) -> SpecRecord:
    """Instantiate an infinite-horizon template.

    ``rsp``: goals = (trigger, response) gives
    ``(G F trigger) & G (trigger -> F response) & G !(avoid...)``;
    ``rec``: one ``G F g`` per goal; ``per``: ``F G goal`` with goals of
    length one.  Avoid atoms must be disjoint from the goals.
    """
    if set(goals) & set(avoid):
        raise LtlError("goal and avoid atoms must be disjoint")
    safety = Always(Not(_disjunction(list(avoid)))) if avoid else None
    if template is Family.REC:
        parts: list[Formula] = [Always(Eventually(Atom(g))) for g in goals]
    elif template is Family.PER:
        if len(goals) != 1:
            raise LtlError("persistence takes exactly one goal atom")
        parts = [Eventually(Always(Atom(goals[0])))]
    elif template is Family.RSP:
        if len(goals) != 2:
            raise LtlError("response takes (trigger, response) goal atoms")
        trigger, response = goals
        parts = [
            Always(Eventually(Atom(trigger))),
            Always(Implies(Atom(trigger), Eventually(Atom(response)))),
        ]
    else:
        raise LtlError(f"{template} is not an infinite-horizon template")
    if safety is not None:
        parts.append(safety)
    phi = parts[-1]
    for p in reversed(parts[:-1]):
        phi = And(p, phi)
    return SpecRecord(
        id=spec_id or f"{template.value}_{'_'.join(goals)}",
        formula=phi,
        family=template,
        horizon_kind=HorizonKind.INFINITE,
    )


# ---------------------------------------------------------------------------
# Named corpora for the command line


def corpus_by_name(name: str) -> list[SpecRecord]:
    """``letter_ind``-style selectors, whole-env names, or ``complexity``."""
    if name == "complexity":
        return complexity_corpus()
    if name in CORPUS_ENVS:
        return corpus(name)
    for env in CORPUS_ENVS:
        prefix = env.replace("-", "_") + "_"
        flat = name.replace("-", "_")
        if flat.startswith(prefix):
            family_name = flat[len(prefix):]
            try:
                family = Family(family_name)
            except ValueError:
                raise LtlError(f"unknown spec family {family_name!r}") from None
            return [r for r in corpus(env) if r.family is family]
    raise LtlError(f"unknown corpus name {name!r}")
