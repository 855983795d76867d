"""Reach-avoid subgoal sequences from a compiled automaton.

A subgoal path follows the shortest loop-free state paths from the initial
state to an acceptance witness: the all-accepting sink for co-safe
formulas, or an accepting state on a live cycle for infinite-horizon ones.
Each hop becomes a :class:`SubgoalStep` whose ``reach`` describes the label
sets advancing along the path and whose ``avoid`` describes the label sets
after which no continuation can be accepted.

Guard regions are minimized to prime-implicant form; optional mutual
exclusion groups (propositions that cannot hold simultaneously, e.g. the
letters of a grid cell) act as don't-cares so the printed subgoals match
what an agent can actually observe.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automaton import BuchiAutomaton, _tarjan_sccs
from .ltl import LtlError

Cube = tuple[frozenset[str], frozenset[str]]  # positive / negative literals


class NoAcceptingPath(LtlError):
    def __init__(self):
        super().__init__("automaton language is empty: no accepting path")


def _cube_matches(cube: Cube, labels: frozenset[str]) -> bool:
    pos, neg = cube
    return pos <= labels and not (neg & labels)


@dataclass(frozen=True)
class SubgoalStep:
    reach: tuple[Cube, ...]
    avoid: tuple[Cube, ...]

    def reach_satisfied(self, labels: Iterable[str]) -> bool:
        s = frozenset(labels)
        return any(_cube_matches(c, s) for c in self.reach)

    def avoid_satisfied(self, labels: Iterable[str]) -> bool:
        s = frozenset(labels)
        return any(_cube_matches(c, s) for c in self.avoid)

    def reach_atoms(self) -> frozenset[str]:
        """Positive atoms across reach disjuncts (the entity targets)."""
        out: set[str] = set()
        for pos, _ in self.reach:
            out |= pos
        return frozenset(out)

    def avoid_atoms(self) -> frozenset[str]:
        out: set[str] = set()
        for pos, _ in self.avoid:
            out |= pos
        return frozenset(out)


def _format_cube(cube: Cube) -> str:
    pos, neg = cube
    lits = sorted(pos) + ["!" + a for a in sorted(neg)]
    return "true" if not lits else " & ".join(lits)


def format_step(step: SubgoalStep) -> str:
    reach = " | ".join(_format_cube(c) for c in step.reach) or "false"
    avoid = " | ".join(_format_cube(c) for c in step.avoid) or "false"
    return f"reach[{reach}] avoid[{avoid}]"


# ---------------------------------------------------------------------------
# Prime-implicant minimization (Quine-McCluskey with don't-cares)


def _minimize(
    variables: Sequence[str],
    minterms: set[int],
    dontcares: set[int],
) -> tuple[Cube, ...]:
    if not minterms:
        return ()
    if not variables:
        return ((frozenset(), frozenset()),)
    full = (1 << len(variables)) - 1
    terms = {(value, full) for value in (minterms | dontcares)}
    primes: set[tuple[int, int]] = set()
    while terms:
        merged: set[tuple[int, int]] = set()
        nxt: set[tuple[int, int]] = set()
        by_care: dict[int, list[int]] = {}
        for value, care in terms:
            by_care.setdefault(care, []).append(value)
        for care, values in by_care.items():
            vset = set(values)
            for value in values:
                for bit_i in range(len(variables)):
                    bit = 1 << bit_i
                    if not (care & bit):
                        continue
                    other = value ^ bit
                    if other in vset:
                        nxt.add((value & ~bit, care & ~bit))
                        merged.add((value, care))
                        merged.add((other, care))
        primes |= terms - merged
        terms = nxt
    # greedy cover of the actual minterms
    def covers(term: tuple[int, int], m: int) -> bool:
        value, care = term
        return (m & care) == value

    remaining = set(minterms)
    chosen: list[tuple[int, int]] = []
    prime_list = sorted(primes, key=lambda t: (bin(t[1]).count("1"), t[1], t[0]))
    while remaining:
        best = max(
            prime_list,
            key=lambda t: (sum(1 for m in remaining if covers(t, m)), -bin(t[1]).count("1"), -t[1], -t[0]),
        )
        cover_set = {m for m in remaining if covers(best, m)}
        if not cover_set:
            raise AssertionError("prime cover failed")
        chosen.append(best)
        remaining -= cover_set
    cubes = []
    for value, care in chosen:
        pos = frozenset(v for i, v in enumerate(variables) if care & (1 << i) and value & (1 << i))
        neg = frozenset(v for i, v in enumerate(variables) if care & (1 << i) and not value & (1 << i))
        cubes.append((pos, neg))
    cubes.sort(key=_format_cube)
    return tuple(cubes)


def _mutex_ok(mask: int, variables: Sequence[str], mutex_groups: Sequence[frozenset[str]]) -> bool:
    for group in mutex_groups:
        count = 0
        for i, v in enumerate(variables):
            if v in group and mask & (1 << i):
                count += 1
                if count > 1:
                    return False
    return True


def _edge_possible(pos: frozenset[str], groups: Sequence[frozenset[str]]) -> bool:
    """A guard requiring two mutually exclusive atoms can never fire."""
    return all(len(pos & g) <= 1 for g in groups)


# ---------------------------------------------------------------------------
# Path extraction


def _targets(aut: BuchiAutomaton) -> tuple[frozenset[int], bool]:
    """Acceptance witnesses and whether the automaton is treated as
    infinite-horizon (no all-accepting sink)."""
    live_sinks = aut.sat_sink - aut.dead
    if live_sinks:
        return live_sinks, False
    n = len(aut.states)
    succ: dict[int, list[int]] = {i: [] for i in range(n)}
    pairs = set()
    for e in aut.edges:
        succ[e.source].append(e.target)
        pairs.add((e.source, e.target))
    good: set[int] = set()
    for scc in _tarjan_sccs(n, succ):
        cyclic = len(scc) > 1 or (scc[0], scc[0]) in pairs
        if cyclic:
            members = set(scc)
            accepting = members & set(aut.accepting)
            if accepting:
                good |= accepting
    return frozenset(good), True


def extract_subgoal_sequences(
    aut: BuchiAutomaton,
    max_paths: int = 1,
    mutex_groups: Sequence[Iterable[str]] = (),
    sources: Iterable[int] | None = None,
    _expansion_cap: int = 200_000,
) -> list[list[SubgoalStep]]:
    """Up to ``max_paths`` subgoal sequences, shortest state path first.

    For infinite-horizon automata the final step of each sequence describes
    staying inside the accepting component (its ``avoid`` is the region
    that kills every run).  Raises :class:`NoAcceptingPath` when the
    language is empty from the sources.
    """
    groups = [frozenset(g) for g in mutex_groups]
    live = frozenset(s.id for s in aut.states) - aut.dead
    starts = sorted(frozenset(sources) if sources is not None else aut.initial)
    if not any(s in live for s in starts):
        raise NoAcceptingPath()
    targets, infinite = _targets(aut)
    if not targets:
        raise NoAcceptingPath()

    paths: list[tuple[int, ...]] = []
    heap: list[tuple[int, tuple[int, ...]]] = [(0, (s,)) for s in starts if s in live]
    heapq.heapify(heap)
    pops = 0
    while heap and len(paths) < max_paths and pops < _expansion_cap:
        pops += 1
        length, path = heapq.heappop(heap)
        tail = path[-1]
        if tail in targets:
            paths.append(path)
            continue
        seen = set(path)
        succs = sorted({
            e.target
            for e in aut._succ[tail]
            if e.target in live and e.target not in seen and _edge_possible(e.pos, groups)
        })
        for nxt in succs:
            heapq.heappush(heap, (length + 1, path + (nxt,)))
    if not paths:
        raise NoAcceptingPath()

    return [_path_to_steps(aut, path, groups, infinite) for path in paths]


def _path_to_steps(
    aut: BuchiAutomaton,
    path: tuple[int, ...],
    groups: list[frozenset[str]],
    infinite: bool,
) -> list[SubgoalStep]:
    live = frozenset(s.id for s in aut.states) - aut.dead
    steps = []
    for i in range(len(path) - 1):
        steps.append(_hop_step(aut, path[i], {path[i + 1]}, live, groups))
    if infinite:
        # maintenance step: stay inside the accepting component
        entry = path[-1]
        component = _component_of(aut, entry)
        steps.append(_hop_step(aut, entry, component, live, groups))
    return steps


def _component_of(aut: BuchiAutomaton, state: int) -> set[int]:
    n = len(aut.states)
    succ: dict[int, list[int]] = {i: [] for i in range(n)}
    for e in aut.edges:
        succ[e.source].append(e.target)
    for scc in _tarjan_sccs(n, succ):
        if state in scc:
            return set(scc)
    return {state}


def _hop_step(
    aut: BuchiAutomaton,
    source: int,
    advance_to: set[int],
    live: frozenset[int],
    groups: list[frozenset[str]],
) -> SubgoalStep:
    edges = aut._succ[source]
    variables = sorted({a for e in edges for a in (e.pos | e.neg)})
    var_index = {v: i for i, v in enumerate(variables)}
    n_masks = 1 << len(variables)
    reach_terms: set[int] = set()
    dead_terms: set[int] = set()
    dontcares: set[int] = set()
    for mask in range(n_masks):
        if not _mutex_ok(mask, variables, groups):
            dontcares.add(mask)
            continue
        labels = frozenset(v for v, i in var_index.items() if mask & (1 << i))
        succs = {e.target for e in edges if e.matches(labels)}
        if succs & advance_to:
            reach_terms.add(mask)
        if not (succs & live):
            dead_terms.add(mask)
    return SubgoalStep(
        reach=_minimize(variables, reach_terms, dontcares),
        avoid=_minimize(variables, dead_terms, dontcares),
    )
