"""LTL to nondeterministic Buchi automaton via tableau expansion.

States are sets of outstanding obligations (NNF formulas).  Expanding the
conjunction of a state's obligations over one step yields guarded branches
``(positive literals, negative literals, next obligations)``; each Until
obligation either discharges its right argument now or defers itself into
the next state.  Per-Until acceptance is transition-based (a transition
honors an Until when it does not defer it) and is degeneralized with the
usual counter product, so the final automaton has a single accepting set:
the copies where the counter has cycled through every Until task.

Per-state language emptiness is decided by SCC analysis; states that cannot
reach a cycle through an accepting state are ``dead`` (entering one
certifies violation), and states with no obligations left accept every
continuation (``sat_sink``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ltl import (
    Always,
    And,
    Atom,
    FalseBool,
    Formula,
    LassoTrace,
    LtlError,
    Next,
    Not,
    Or,
    TrueBool,
    Until,
    alphabet,
    conj_members,
    format_formula,
    formula_size,
    nnf,
)
from .progression import simplify

DEFAULT_STATE_CAP = 20_000


class CompileBudgetExceeded(LtlError):
    def __init__(self, cap: int):
        super().__init__(f"automaton construction exceeded {cap} states")
        self.cap = cap


# A branch of one state's expansion: guard literals, successor obligations,
# and the Until subformulas whose right argument was discharged on it.
@dataclass(frozen=True)
class _Branch:
    pos: frozenset[str]
    neg: frozenset[str]
    nxt: frozenset[Formula]
    fulfilled: frozenset[Formula]

    def consistent(self) -> bool:
        return not (self.pos & self.neg)


_EMPTY = frozenset()
_TRUE_BRANCH = (_Branch(_EMPTY, _EMPTY, _EMPTY, _EMPTY),)


def _obligations(phi: Formula) -> frozenset[Formula]:
    """Conjunction members as an obligation set; a bare True contributes
    nothing (the empty set is the all-accepting sink)."""
    return frozenset(m for m in conj_members(phi) if not isinstance(m, TrueBool))


def _cross(a: Sequence[_Branch], b: Sequence[_Branch]) -> list[_Branch]:
    out = []
    for x in a:
        for y in b:
            br = _Branch(x.pos | y.pos, x.neg | y.neg, x.nxt | y.nxt, x.fulfilled | y.fulfilled)
            if br.consistent():
                out.append(br)
    return out


def _expand_formula(phi: Formula, memo: dict) -> tuple[_Branch, ...]:
    cached = memo.get(phi)
    if cached is not None:
        return cached
    if isinstance(phi, TrueBool):
        result = _TRUE_BRANCH
    elif isinstance(phi, FalseBool):
        result = ()
    elif isinstance(phi, Atom):
        result = (_Branch(frozenset((phi.name,)), _EMPTY, _EMPTY, _EMPTY),)
    elif isinstance(phi, Not) and isinstance(phi.operand, Atom):
        result = (_Branch(_EMPTY, frozenset((phi.operand.name,)), _EMPTY, _EMPTY),)
    elif isinstance(phi, And):
        result = tuple(_cross(_expand_formula(phi.left, memo), _expand_formula(phi.right, memo)))
    elif isinstance(phi, Or):
        result = _expand_formula(phi.left, memo) + _expand_formula(phi.right, memo)
    elif isinstance(phi, Next):
        result = (_Branch(_EMPTY, _EMPTY, _obligations(phi.operand), _EMPTY),)
    elif isinstance(phi, Until):
        fulfill = tuple(
            _Branch(b.pos, b.neg, b.nxt, b.fulfilled | {phi})
            for b in _expand_formula(phi.right, memo)
        )
        defer = _cross(
            _expand_formula(phi.left, memo),
            (_Branch(_EMPTY, _EMPTY, frozenset((phi,)), _EMPTY),),
        )
        result = fulfill + tuple(defer)
    elif isinstance(phi, Always):
        result = tuple(
            _cross(
                _expand_formula(phi.operand, memo),
                (_Branch(_EMPTY, _EMPTY, frozenset((phi,)), _EMPTY),),
            )
        )
    else:
        raise LtlError(f"formula not in negation normal form: {format_formula(phi)}")
    memo[phi] = result
    return result


def _branch_key(b: _Branch):
    return (sorted(b.pos), sorted(b.neg), sorted(map(format_formula, b.nxt)),
            sorted(map(format_formula, b.fulfilled)))


def _dominates_future(a: _Branch, b: _Branch) -> bool:
    """a leads to no worse a future than b: fewer target obligations and at
    least the same honored Untils.  Ties break deterministically so that
    exactly one of two future-equal branches absorbs their overlap."""
    if not (a.nxt <= b.nxt and a.fulfilled >= b.fulfilled):
        return False
    if a.nxt == b.nxt and a.fulfilled == b.fulfilled:
        return _branch_key(a) < _branch_key(b)
    return True


def _refine_branches(branches: list[_Branch]) -> list[_Branch]:
    """Where a future-dominating branch overlaps a weaker one, restrict the
    weaker guard to the uncovered region (dropping it if fully covered).
    The language is unchanged while guards become disjoint in the common
    reach/avoid shapes (an F-obligation self-loop becomes its negation)."""
    work = sorted(set(branches), key=_branch_key)
    changed = True
    rounds = 0
    while changed and rounds < 50:
        changed = False
        rounds += 1
        out: list[_Branch] = []
        for b in work:
            pieces = [b]
            for a in work:
                if a == b or not _dominates_future(a, b):
                    continue
                new_pieces: list[_Branch] = []
                for p in pieces:
                    new_pieces.extend(_subtract_guard(p, a))
                pieces = new_pieces
                if not pieces:
                    break
            if pieces != [b]:
                changed = True
            out.extend(pieces)
        work = sorted(set(out), key=_branch_key)
    return work


def _subtract_guard(b: _Branch, a: _Branch) -> list[_Branch]:
    """Split branch b into pieces covering ``guard(b) and not guard(a)``."""
    extra_pos = a.pos - b.pos
    extra_neg = a.neg - b.neg
    if not extra_pos and not extra_neg:
        return []  # guard(a) covers guard(b) entirely
    pieces = []
    asserted_pos: set[str] = set()
    asserted_neg: set[str] = set()
    for lit in sorted(extra_pos):
        piece = _Branch(b.pos | frozenset(asserted_pos), b.neg | {lit} | frozenset(asserted_neg), b.nxt, b.fulfilled)
        if piece.consistent():
            pieces.append(piece)
        asserted_pos.add(lit)
    for lit in sorted(extra_neg):
        piece = _Branch(b.pos | {lit} | frozenset(asserted_pos), b.neg | frozenset(asserted_neg), b.nxt, b.fulfilled)
        if piece.consistent():
            pieces.append(piece)
        asserted_neg.add(lit)
    return pieces


@dataclass(frozen=True)
class GuardedEdge:
    source: int
    target: int
    pos: frozenset[str]
    neg: frozenset[str]

    def matches(self, labels: frozenset[str]) -> bool:
        return self.pos <= labels and not (self.neg & labels)


@dataclass
class StateInfo:
    id: int
    obligations: frozenset[Formula]
    counter: int

    @property
    def annotation(self) -> str:
        if not self.obligations:
            return "true"
        return " & ".join(sorted(format_formula(f) for f in self.obligations))


class MonitorStatus(enum.Enum):
    OPEN = "open"
    VIOLATED = "violated"
    SATISFIED_SINK = "satisfied_sink"


@dataclass
class BuchiAutomaton:
    """Compiled automaton with per-state emptiness annotations."""

    states: list[StateInfo]
    initial: frozenset[int]
    edges: list[GuardedEdge]
    accepting: frozenset[int]
    alphabet: frozenset[str]
    dead: frozenset[int]
    sat_sink: frozenset[int]
    formula: Formula
    _succ: dict[int, list[GuardedEdge]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._succ:
            succ: dict[int, list[GuardedEdge]] = {s.id: [] for s in self.states}
            for e in self.edges:
                succ[e.source].append(e)
            self._succ = succ

    def successors(self, state: int, labels: frozenset[str]) -> list[int]:
        return [e.target for e in self._succ[state] if e.matches(labels)]

    def dump(self) -> str:
        lines = []
        for s in self.states:
            flags = []
            if s.id in self.accepting:
                flags.append("accepting")
            if s.id in self.dead:
                flags.append("dead")
            if s.id in self.sat_sink:
                flags.append("sink")
            lines.append(" ".join(["state", str(s.id)] + flags))
        for e in sorted(self.edges, key=lambda e: (e.source, e.target, sorted(e.pos), sorted(e.neg))):
            lits = [name for name in sorted(e.pos)] + ["!" + name for name in sorted(e.neg)]
            lines.append(" ".join(["edge", str(e.source), str(e.target)] + lits))
        return "\n".join(lines) + "\n"


def compile_formula(phi: Formula, state_cap: int = DEFAULT_STATE_CAP) -> BuchiAutomaton:
    """Compile phi (any syntax; normalized internally) to a Buchi automaton
    accepting exactly the lasso words on which phi holds."""
    norm = simplify(nnf(phi))
    memo: dict[Formula, tuple[_Branch, ...]] = {}

    # generalized automaton over obligation sets
    init_gba = _obligations(norm)
    gba_ids: dict[frozenset[Formula], int] = {init_gba: 0}
    gba_order: list[frozenset[Formula]] = [init_gba]
    gba_edges: dict[int, list[tuple[_Branch, int]]] = {}
    queue = [init_gba]
    while queue:
        state = queue.pop(0)
        sid = gba_ids[state]
        branches: tuple[_Branch, ...] = _TRUE_BRANCH
        for f in sorted(state, key=format_formula):
            branches = tuple(_cross(branches, _expand_formula(f, memo)))
        refined = _refine_branches(list(branches))
        out = []
        for b in refined:
            tgt = b.nxt
            if tgt not in gba_ids:
                if len(gba_ids) >= state_cap:
                    raise CompileBudgetExceeded(state_cap)
                gba_ids[tgt] = len(gba_order)
                gba_order.append(tgt)
                queue.append(tgt)
            out.append((b, gba_ids[tgt]))
        gba_edges[sid] = out

    # outermost Untils first: the counter then tracks chain stages in the
    # order they are discharged, which keeps the product small
    tasks = sorted(
        {f for f in _closure_untils(norm)},
        key=lambda f: (-formula_size(f), format_formula(f)),
    )
    k = len(tasks)

    # counter-product degeneralization (counter value k marks a completed
    # round and is the accepting copy)
    def advance(counter: int, branch: _Branch) -> int:
        j = 0 if counter == k else counter
        while j < k and (tasks[j] in branch.fulfilled or tasks[j] not in branch.nxt):
            j += 1
        return j

    if k == 0:
        edges = [
            GuardedEdge(sid, tgt, b.pos, b.neg)
            for sid in range(len(gba_order))
            for (b, tgt) in gba_edges[sid]
        ]
        accepting = frozenset(range(len(gba_order)))
        states = [StateInfo(i, gba_order[i], 0) for i in range(len(gba_order))]
        initial_id = 0
    else:
        start = (0, 0)
        node_ids = {start: 0}
        order: list[tuple[int, int]] = [start]
        edges = []
        queue2 = [start]
        while queue2:
            node = queue2.pop(0)
            gid, counter = node
            for b, tgt_gid in gba_edges[gid]:
                tgt = (tgt_gid, advance(counter, b))
                if tgt not in node_ids:
                    if len(node_ids) >= state_cap:
                        raise CompileBudgetExceeded(state_cap)
                    node_ids[tgt] = len(order)
                    order.append(tgt)
                    queue2.append(tgt)
                edges.append(GuardedEdge(node_ids[node], node_ids[tgt], b.pos, b.neg))
        accepting = frozenset(node_ids[n] for n in order if n[1] == k)
        states = [StateInfo(i, gba_order[n[0]], n[1]) for i, n in enumerate(order)]
        initial_id = 0

    sat_sink = frozenset(s.id for s in states if not s.obligations)
    aut = BuchiAutomaton(
        states=states,
        initial=frozenset((initial_id,)),
        edges=edges,
        accepting=accepting,
        alphabet=alphabet(norm),
        dead=frozenset(),
        sat_sink=sat_sink,
        formula=norm,
    )
    live = nonempty_states(aut)
    aut.dead = frozenset(s.id for s in states) - live
    return aut


def _closure_untils(phi: Formula) -> Iterable[Formula]:
    seen: set[Formula] = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        if isinstance(f, Until):
            yield f
            stack.extend((f.left, f.right))
        elif isinstance(f, (Always, Next, Not)):
            stack.append(f.operand)
        elif isinstance(f, (And, Or)):
            stack.extend((f.left, f.right))


# ---------------------------------------------------------------------------
# Emptiness


def _tarjan_sccs(n_nodes: int, succ: dict[int, list[int]]) -> list[list[int]]:
    """Iterative Tarjan; SCCs in reverse topological order."""
    index = [0] * n_nodes
    low = [0] * n_nodes
    on_stack = [False] * n_nodes
    visited = [False] * n_nodes
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = [1]

    for root in range(n_nodes):
        if visited[root]:
            continue
        work = [(root, iter(succ.get(root, ())))]
        visited[root] = True
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if not visited[child]:
                    visited[child] = True
                    index[child] = low[child] = counter[0]
                    counter[0] += 1
                    stack.append(child)
                    on_stack[child] = True
                    work.append((child, iter(succ.get(child, ()))))
                    advanced = True
                    break
                if on_stack[child]:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                scc = []
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    scc.append(member)
                    if member == node:
                        break
                sccs.append(scc)
    return sccs


def nonempty_states(aut: BuchiAutomaton) -> frozenset[int]:
    """States with nonempty language: those that reach an SCC containing an
    accepting state on a cycle."""
    n = len(aut.states)
    succ: dict[int, list[int]] = {i: [] for i in range(n)}
    edge_pairs = set()
    for e in aut.edges:
        succ[e.source].append(e.target)
        edge_pairs.add((e.source, e.target))
    sccs = _tarjan_sccs(n, succ)
    good: set[int] = set()
    for scc in sccs:
        members = set(scc)
        cyclic = len(scc) > 1 or (scc[0], scc[0]) in edge_pairs
        if cyclic and any(s in aut.accepting for s in scc):
            good |= members
    # backward closure over reversed edges
    pred: dict[int, list[int]] = {i: [] for i in range(n)}
    for s, t in edge_pairs:
        pred[t].append(s)
    live = set(good)
    frontier = list(good)
    while frontier:
        node = frontier.pop()
        for p in pred[node]:
            if p not in live:
                live.add(p)
                frontier.append(p)
    return frozenset(live)


# ---------------------------------------------------------------------------
# Acceptance of lasso words


def accepts(aut: BuchiAutomaton, w: LassoTrace) -> bool:
    """True iff some run over w visits an accepting state infinitely often
    (product of the lasso positions with the automaton, then cycle search)."""
    n_pos = w.positions
    symbols = [w.symbol(p) for p in range(n_pos)]
    nxt = [w.next_pos(p) for p in range(n_pos)]

    node_ids: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []

    def node_id(node: tuple[int, int]) -> int:
        got = node_ids.get(node)
        if got is None:
            got = len(order)
            node_ids[node] = got
            order.append(node)
        return got

    succ: dict[int, list[int]] = {}
    queue = [(q, 0) for q in sorted(aut.initial)]
    for node in queue:
        node_id(node)
    i = 0
    while i < len(order):
        state, pos = order[i]
        targets = [(t, nxt[pos]) for t in aut.successors(state, symbols[pos])]
        succ[i] = [node_id(t) for t in targets]
        i += 1

    sccs = _tarjan_sccs(len(order), succ)
    edge_pairs = {(s, t) for s, ts in succ.items() for t in ts}
    for scc in sccs:
        cyclic = len(scc) > 1 or (scc[0], scc[0]) in edge_pairs
        if cyclic and any(order[m][0] in aut.accepting for m in scc):
            return True
    return False


# ---------------------------------------------------------------------------
# Online monitoring


def step_monitor(
    aut: BuchiAutomaton, frontier: frozenset[int], labels: Iterable[str]
) -> tuple[frozenset[int], bool, MonitorStatus]:
    """Advance a frontier of automaton states over one label set.

    Returns the successor frontier, whether an accepting state was entered
    (with at least one live successor), and the verdict so far.
    """
    if not frontier:
        return frontier, False, MonitorStatus.VIOLATED
    sigma = frozenset(labels)
    out: set[int] = set()
    for state in frontier:
        out.update(aut.successors(state, sigma))
    new_frontier = frozenset(out)
    live = new_frontier - aut.dead
    hit = bool(live) and bool(new_frontier & aut.accepting)
    if not live:
        status = MonitorStatus.VIOLATED
    elif new_frontier & aut.sat_sink:
        status = MonitorStatus.SATISFIED_SINK
    else:
        status = MonitorStatus.OPEN
    return new_frontier, hit, status


class Monitor:
    """Stateful wrapper around :func:`step_monitor` for one episode."""

    def __init__(self, aut: BuchiAutomaton):
        self.automaton = aut
        self.frontier: frozenset[int] = frozenset(aut.initial)
        self.status = MonitorStatus.OPEN
        self.accepting_visits = 0

    def step(self, labels: Iterable[str]) -> tuple[bool, MonitorStatus]:
        if self.status is MonitorStatus.VIOLATED:
            return False, self.status
        frontier, hit, status = step_monitor(self.automaton, self.frontier, labels)
        # successors of dead states stay dead; drop them to keep the
        # frontier small without changing any future verdict
        self.frontier = frontier - self.automaton.dead
        if status is MonitorStatus.VIOLATED:
            self.status = status
            return False, status
        if hit:
            self.accepting_visits += 1
        if status is MonitorStatus.SATISFIED_SINK:
            self.status = status
        else:
            self.status = MonitorStatus.OPEN
        return hit, self.status
