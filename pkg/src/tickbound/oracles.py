"""Brute-force reference implementations and random instances for differential tests.

Nothing here reuses the graph kernels or the counter construction; both
oracles work directly on string semantics.
"""
from __future__ import annotations

import random
import sys
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass

from .automaton import Automaton, Verdict, trim
from .bounded import CoverClass, MarkerCover
from .errors import NotActivityLoopFree
from .events import TICK, EventTable
from .ttg import ActivityModel, TimerBound, build_ttg, check_activity_loop_free


@contextmanager
def _deep_recursion(limit: int):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def _reachable_states(a: Automaton) -> list[int]:
    seen = {a.initial}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        for r in a.succ[q].values():
            if r not in seen:
                seen.add(r)
                queue.append(r)
    return sorted(seen)


def btc_oracle(a: Automaton, cover: MarkerCover) -> Verdict:
    """Bounded-time nonblockingness by exhaustive first-entry path search.

    From every reachable state, every path is followed until it first hits
    the class; a path that takes more than ``N`` ticks before that, or a
    state from which no path hits the class, is a violation.  Results are
    shared between paths through the same (state, ticks-so-far) pair.
    """
    if a.is_empty():
        return Verdict(True)
    if not check_activity_loop_free(a):
        raise NotActivityLoopFree("cycle without tick")
    tick = a.events.tick
    states = _reachable_states(a)
    limit = len(a.succ) + 1
    bad = []
    for cls in cover:
        target = {q for q in a.marked if a.activity_of(q) in cls.activities}
        budget = cls.budget
        guard = (budget + 1) * limit
        memo: dict[tuple[int, int], tuple[bool, bool]] = {}

        def explore(q, ticks, steps):
            # (every first-entry path within budget, some first-entry path exists)
            if ticks > budget:
                return False, False
            if q in target:
                return True, True
            if steps > guard:
                raise AssertionError("path longer than the activity-loop-free bound")
            key = (q, ticks)
            hit = memo.get(key)
            if hit is not None:
                return hit
            ok, some = True, False
            for e, r in a.succ[q].items():
                sub_ok, sub_some = explore(r, ticks + (e == tick), steps + 1)
                ok = ok and sub_ok
                some = some or sub_some
            memo[key] = (ok, some)
            return ok, some

        with _deep_recursion(guard + 1000):
            for q in states:
                ok, some = explore(q, 0, 0)
                if not (ok and some):
                    bad.append((cls.name, a.labels[q], "over-budget" if not ok else "dead"))
    if bad:
        return Verdict(False, None, {"violations": tuple(bad)})
    return Verdict(True)


class _CounterWalk:
    """Runs ``k`` and ``g`` in lockstep, counting the ticks a completion has
    used so far.

    A completion starts right after the last class-marked prefix (or at the
    empty string), so the symbol that leaves a class-marked prefix is free;
    every later tick, including one that lands in the class, is charged.
    """

    def __init__(self, g: Automaton, k: Automaton, cls: CoverClass):
        self.g, self.k, self.cls = g, k, cls
        self.tick = k.events.tick
        self.target = {q for q in g.marked if g.activity_of(q) in cls.activities}
        self.ext: dict = {}

    def marked(self, x, q) -> bool:
        return x in self.k.marked and q in self.target

    def start(self):
        if self.k.is_empty() or self.g.is_empty():
            return None
        return (self.k.initial, self.g.initial, 0)

    def step(self, state, e: int):
        """Next walk state, or None if the string leaves the language or the budget."""
        x, q, c = state
        x2 = self.k.succ[x].get(e)
        q2 = self.g.succ[q].get(e)
        if x2 is None or q2 is None:
            return None
        if self.marked(x, q):
            c2 = 0
        else:
            c2 = c + (e == self.tick)
            if c2 > self.cls.budget:
                return None
        if self.marked(x2, q2):
            c2 = 0
        return (x2, q2, c2)

    def completes(self, state) -> bool:
        """Some extension reaches a class-marked string without leaving the budget."""
        if state is None:
            return False
        hit = self.ext.get(state)
        if hit is not None:
            return hit
        x, q, _ = state
        if self.marked(x, q):
            self.ext[state] = True
            return True
        # no recursion cycle: every cycle of g carries a tick, which raises c
        result = any(self.completes(self.step(state, e)) for e in self.k.succ[x])
        self.ext[state] = result
        return result

    def alive(self, state) -> bool:
        return state is not None and self.completes(state)


def supremal_membership_oracle(g: Automaton, k: Automaton, cls: CoverClass, depth: int) -> set[tuple[str, ...]]:
    """Strings of length at most ``depth`` in the closure of the supremal
    bounded-time completable sublanguage of ``Lm(k)`` for ``cls``."""
    walk = _CounterWalk(g, k, cls)
    out: set[tuple[str, ...]] = set()
    with _deep_recursion(10000 + 10 * len(k.succ) * (cls.budget + 1)):
        s0 = walk.start()
        if not walk.alive(s0):
            return out
        frontier = [((), s0)]
        out.add(())
        for _ in range(depth):
            nxt = []
            for string, st in frontier:
                for e in walk.k.succ[st[0]]:
                    s2 = walk.step(st, e)
                    if walk.alive(s2):
                        w = string + (k.events.name(e),)
                        out.add(w)
                        nxt.append((w, s2))
            frontier = nxt
    return out


def membership_agrees(g: Automaton, k: Automaton, cls: CoverClass, result: Automaton, depth: int) -> Verdict:
    """Compare the oracle with ``result``'s closed language on all strings up to ``depth``.

    Walks both side by side in breadth-first order, visiting each pair of
    (oracle state, result state) once at its shallowest depth; the witness
    is the first string on which they disagree.
    """
    walk = _CounterWalk(g, k, cls)
    name = k.events.name
    with _deep_recursion(10000 + 10 * len(k.succ) * (cls.budget + 1)):
        s0 = walk.start()
        o_alive = walk.alive(s0)
        r_alive = not result.is_empty()
        if o_alive != r_alive:
            return Verdict(False, (), {"oracle": o_alive, "result": r_alive})
        if not o_alive:
            return Verdict(True)
        seen = {(s0, result.initial)}
        frontier = [((), s0, result.initial)]
        for _ in range(depth):
            nxt = []
            for string, st, r in frontier:
                events = sorted(set(walk.k.succ[st[0]]) | set(result.succ[r]))
                for e in events:
                    s2 = walk.step(st, e)
                    o_ok = walk.alive(s2)
                    r2 = result.succ[r].get(e)
                    if o_ok != (r2 is not None):
                        return Verdict(False, string + (name(e),), {"oracle": o_ok, "result": r2 is not None})
                    if o_ok and (s2, r2) not in seen:
                        seen.add((s2, r2))
                        nxt.append((string + (name(e),), s2, r2))
            frontier = nxt
    return Verdict(True)


# -- random instances ----------------------------------------------------------

@dataclass(frozen=True)
class InstanceParams:
    activities: tuple[int, int] = (2, 6)
    events: tuple[int, int] = (2, 10)
    lower_max: int = 2
    spread_max: int = 2  # u - l for finite upper bounds
    infinite_share: float = 0.3
    marking_density: float = 0.4
    classes: tuple[int, int] = (1, 2)
    budget: tuple[int, int] = (1, 5)
    spec_states: tuple[int, int] = (1, 3)
    spec_keep: float = 0.85
    seed: int = 0


@dataclass(frozen=True)
class Instance:
    model: ActivityModel
    spec: Automaton
    cover: MarkerCover
    plant: Automaton  # trimmed compiled model


def random_instance(p: InstanceParams) -> tuple[ActivityModel, Automaton, MarkerCover]:
    inst = random_case(p)
    return inst.model, inst.spec, inst.cover


def random_case(p: InstanceParams) -> Instance:
    """Deterministic in ``p.seed``; redraws until the compiled plant is
    nonempty after trimming and every class selects one of its states."""
    rng = random.Random(p.seed)
    while True:
        inst = _draw(rng, p)
        if inst is not None:
            return inst


def _draw(rng: random.Random, p: InstanceParams) -> Instance | None:
    n = rng.randint(*p.activities)
    acts = [f"A{i}" for i in range(n)]
    m = max(rng.randint(*p.events), n - 1)
    arcs = []
    # spanning tree from A0 keeps every activity reachable in the graph
    for j in range(1, n):
        arcs.append((rng.randrange(j), j))
    while len(arcs) < m:
        arcs.append((rng.randrange(n), rng.randrange(n)))
    names = [f"e{i}" for i in range(len(arcs))]
    bounds = {}
    transitions = []
    for name, (i, j) in zip(names, arcs):
        lo = rng.randint(0, p.lower_max)
        if lo == 0 and i >= j:
            lo = 1  # every activity cycle must contain a delayed event
        hi = None if rng.random() < p.infinite_share else lo + rng.randint(0, p.spread_max)
        bounds[name] = TimerBound(lo, hi)
        transitions.append((acts[i], name, acts[j]))
    marked = [a for a in acts if rng.random() < p.marking_density]
    c = rng.randint(*p.classes)
    while len(marked) < c:
        extra = rng.choice([a for a in acts if a not in marked])
        marked.append(extra)
    marked = sorted(marked, key=acts.index)
    hib = [e for e in names if rng.random() < 0.6]
    force = [e for e in names if rng.random() < 0.4]
    table = EventTable.of(names, hib, force)
    model = ActivityModel(table, tuple(acts), tuple(transitions), "A0", frozenset(marked), bounds)
    plant = trim(build_ttg(model))
    if plant.is_empty():
        return None
    shuffled = marked[:]
    rng.shuffle(shuffled)
    groups = [shuffled[i::c] for i in range(c)]
    cover = MarkerCover(tuple(
        CoverClass(f"c{i}", frozenset(grp), rng.randint(*p.budget)) for i, grp in enumerate(groups)
    ))
    for cls in cover:
        if not cls.states(plant):
            return None
    spec = random_spec(rng, table, p)
    return Instance(model, spec, cover, plant)


def random_spec(rng: random.Random, table: EventTable, p: InstanceParams) -> Automaton:
    k = rng.randint(*p.spec_states)
    states = [f"s{i}" for i in range(k)]
    trans = []
    for s in states:
        for e in table.names:
            if e == TICK or rng.random() < p.spec_keep:
                trans.append((s, e, rng.choice(states)))
    marked = [s for s in states if rng.random() < 0.7] or [states[0]]
    return Automaton.build(table, states, states[0], marked, trans)
