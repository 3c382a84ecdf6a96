"""Bounded-time nonblocking verification and synthesis.

A marker cover splits the marked states into task classes, each with a tick
budget ``N``.  From every reachable state every first visit to a class must
be possible, and must take at most ``N`` ticks.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

from ._kernels import UNBOUNDED, UNREACHABLE, kernels
from .automaton import Automaton, Verdict, language_equal, path_to, product, reachable_mask, trim
from .control import is_controllable, project_labels, sup_c
from .errors import EmptyClassError, NotActivityLoopFree
from .ttg import check_activity_loop_free


@dataclass(frozen=True)
class CoverClass:
    name: str
    activities: frozenset[str]
    budget: int

    def __post_init__(self):
        object.__setattr__(self, "activities", frozenset(self.activities))
        if self.budget < 1:
            raise ValueError(f"class {self.name!r}: budget must be a positive number of ticks")
        if not self.activities:
            raise ValueError(f"class {self.name!r} selects no activity")

    def states(self, a: Automaton) -> frozenset[int]:
        """Marked states of ``a`` whose activity the class selects."""
        return frozenset(q for q in a.marked if a.activity_of(q) in self.activities)


@dataclass(frozen=True)
class MarkerCover:
    classes: tuple[CoverClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        names = [c.name for c in self.classes]
        if len(set(names)) != len(names):
            raise ValueError("duplicate cover class name")
        if not self.classes:
            raise ValueError("a cover needs at least one class")

    @classmethod
    def of(cls, *specs: tuple[str, Iterable[str], int]) -> "MarkerCover":
        return cls(tuple(CoverClass(n, frozenset(acts), b) for n, acts, b in specs))

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, name: str) -> CoverClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def with_budget(self, name: str, budget: int) -> "MarkerCover":
        return MarkerCover(tuple(
            CoverClass(c.name, c.activities, budget) if c.name == name else c for c in self.classes
        ))

    def resolve(self, a: Automaton) -> dict[str, frozenset[int]]:
        """Class name to state set; raises when a class selects nothing."""
        out = {}
        for c in self.classes:
            qs = c.states(a)
            if not qs:
                raise EmptyClassError(f"class {c.name!r} selects no marked state")
            out[c.name] = qs
        return out

    def check_covers(self, a: Automaton) -> None:
        """Raise unless the classes resolve nonempty and jointly cover ``a``'s marked states."""
        covered = frozenset().union(*self.resolve(a).values())
        missing = a.marked - covered
        if missing:
            labels = sorted(a.labels[q] for q in missing)[:5]
            raise ValueError(f"marked states outside every class: {', '.join(labels)}")

    @property
    def budget_product(self) -> int:
        return prod(c.budget for c in self.classes)


def restrict_marking(k: Automaton, g: Automaton, cls: CoverClass) -> Automaton:
    """Product of ``k`` and ``g`` marked where ``k`` marks and ``g`` is in the class."""
    target = cls.states(g)
    if not target:
        raise EmptyClassError(f"class {cls.name!r} selects no marked state of the plant")
    joint = product(k, g)
    marked = frozenset(p for p, (x, q) in enumerate(joint.origin) if x in k.marked and q in target)
    return project_labels(joint.with_marking(marked), k)


# -- verification -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    cls: str
    state: str
    activity: str
    kind: str  # "dead" | "unbounded" | "over-budget"
    ticks: int | None
    prefix: tuple[str, ...]
    suffix: tuple[str, ...]

    @property
    def string(self) -> tuple[str, ...]:
        return self.prefix + self.suffix


def tick_profile(a: Automaton, target: Iterable[int]) -> np.ndarray:
    """Per-state maximum tick count over first-entry paths into ``target``.

    ``UNREACHABLE`` marks states with no such path, ``UNBOUNDED`` states
    that can reach a cycle avoiding ``target``.
    """
    ptr, evt, dst = a.csr
    return kernels.tick_longest(ptr, evt, dst, a.events.tick, a.mask(target), reachable_mask(a))


def verify_bounded_time_nonblocking(a: Automaton, cover: MarkerCover) -> Verdict:
    """Decide bounded-time nonblockingness of ``a`` for every class of ``cover``.

    ``detail["violations"]`` holds one :class:`Violation` per (class, activity)
    group, at the group's lowest state index.  The verdict's witness is the
    full string of the first violation.
    """
    if a.is_empty():
        return Verdict(True, detail={"code": "empty", "violations": ()})
    loop = check_activity_loop_free(a)
    if not loop:
        raise NotActivityLoopFree("cycle without tick: " + " ".join(loop.witness))
    reach = reachable_mask(a)
    violations = []
    worst = {}
    for cls in cover:
        target = cls.states(a)
        best = tick_profile(a, target)
        worst[cls.name] = _worst(best[reach.astype(bool)])
        seen_groups = set()
        for q in np.flatnonzero(reach).tolist():
            v = int(best[q])
            if v == UNREACHABLE:
                kind = "dead"
            elif v == UNBOUNDED:
                kind = "unbounded"
            elif v > cls.budget:
                kind = "over-budget"
            else:
                continue
            group = a.activity_of(q)
            if group in seen_groups:
                continue
            seen_groups.add(group)
            violations.append(Violation(
                cls.name, a.labels[q], group, kind, v if v >= 0 else None,
                path_to(a, q), _suffix(a, q, kind, target, best, cls.budget),
            ))
    if not violations:
        return Verdict(True, detail={"code": "bounded", "violations": (), "worst": worst})
    first = violations[0]
    return Verdict(False, first.string, {"code": first.kind, "violations": tuple(violations), "worst": worst})


def _worst(values: np.ndarray):
    if (values == UNREACHABLE).any():
        return "dead"
    if (values == UNBOUNDED).any():
        return "unbounded"
    return int(values.max()) if len(values) else 0


def _suffix(a, q, kind, target, best, budget) -> tuple[str, ...]:
    tick = a.events.tick
    name = a.events.name
    if kind == "dead":
        return ()
    if kind == "over-budget":
        out = []
        while q not in target:
            for e, r in a.succ[q].items():
                if best[r] >= 0 and best[r] + (e == tick) == best[q]:
                    out.append(name(e))
                    q = r
                    break
        return tuple(out)
    # unbounded: walk to a cycle avoiding the target, go round it past the budget, then leave
    lead, cycle = _cycle_from(a, q, target, best)
    ticks = sum(1 for e in lead if e == tick)
    per_round = sum(1 for e in cycle if e == tick)
    out = list(lead)
    while ticks <= budget:
        out.extend(cycle)
        ticks += per_round
    r = a.run((name(e) for e in lead), q)
    exit_path = _shortest_into(a, r, target)
    return tuple(name(e) for e in out) + exit_path


def _cycle_from(a, q, target, best):
    """Event path from ``q`` to a cycle inside the unbounded region, plus the cycle."""
    # every state on such a cycle is itself unbounded, so the walk stays inside;
    # a waiting loop (tick back to the same state) is taken first when there is one
    tick = a.events.tick
    on_path = {q: 0}
    x = q
    events: list[int] = []
    while True:
        if a.succ[x].get(tick) == x:
            e, r = tick, x
        else:
            e, r = next((e, r) for e, r in a.succ[x].items() if r not in target and best[r] == UNBOUNDED)
        events.append(e)
        if r in on_path:
            at = on_path[r]
            return events[:at], events[at:]
        on_path[r] = len(events)
        x = r


def _shortest_into(a, q, target) -> tuple[str, ...]:
    parent = {q: None}
    queue = deque([q])
    while queue:
        x = queue.popleft()
        if x in target:
            out = []
            while parent[x] is not None:
                x, e = parent[x]
                out.append(a.events.name(e))
            return tuple(reversed(out))
        for e, r in a.succ[x].items():
            if r not in parent:
                parent[r] = (x, e)
                queue.append(r)
    return ()


# -- supremal bounded-time completable sublanguage ---------------------------

@dataclass(frozen=True)
class BtcResult:
    """Output of one counter construction plus its bookkeeping."""

    automaton: Automaton
    counter: Automaton  # trimmed counter automaton before re-marking by k
    visited: int
    bound: int
    dropped: tuple[tuple[str, str, str, int], ...]  # (source label, event, target base label, d')
    class_states: int


def sup_btc(g: Automaton, k: Automaton, cls: CoverClass, order: str = "lifo") -> Automaton:
    """Trim recognizer of the supremal sublanguage of ``Lm(k)`` that is
    bounded-time completable for ``cls``."""
    return sup_btc_run(g, k, cls, order).automaton


def sup_btc_run(g: Automaton, k: Automaton, cls: CoverClass, order: str = "lifo") -> BtcResult:
    if order not in ("lifo", "fifo"):
        raise ValueError("order must be 'lifo' or 'fifo'")
    empty = Automaton.empty(k.events)
    if k.is_empty():
        return BtcResult(empty, empty, 0, 0, (), 0)
    ki = trim(restrict_marking(k, g, cls))
    if ki.is_empty():
        return BtcResult(empty, empty, 0, 0, (), 0)
    ptr, evt, dst = ki.csr
    n_budget = cls.budget
    base, depth, tsrc, tevt, tdst, dropped = kernels.counter_expand(
        ptr, evt, dst, ki.marked_mask, ki.events.tick, n_budget, ki.initial, order == "lifo"
    )
    base = list(base)
    depth = list(depth)
    succ: list[dict] = [{} for _ in base]
    for s, e, t in zip(tsrc, tevt, tdst):
        succ[s][e] = t
    counter_marked = frozenset(i for i, (x, d) in enumerate(zip(base, depth)) if d == 0 and x in ki.marked)

    def label(x, d):
        return f"({ki.labels[x]},{d})"

    labels = tuple(label(x, d) for x, d in zip(base, depth))
    activity = tuple(ki.activity[x] for x in base)
    origin = tuple(ki.origin[x] + (d,) for x, d in zip(base, depth))
    raw = Automaton(ki.events, tuple(_sorted(r) for r in succ), 0, counter_marked, labels, activity, origin)
    counter = trim(raw)
    drops = tuple((labels[i], ki.events.name(e), ki.labels[y], nd) for i, e, y, nd in dropped)
    bound = ki.n_states * (n_budget + 1)
    if counter.is_empty():
        return BtcResult(empty, empty, len(base), bound, drops, ki.n_states)
    # language K ∩ L(counter): k's marking is a function of the base state
    k_marked = frozenset(i for i, o in enumerate(counter.origin) if o[0] in k.marked)
    out = trim(counter.with_marking(k_marked))
    return BtcResult(out, counter, len(base), bound, drops, ki.n_states)


def _sorted(d: dict) -> dict:
    return dict(sorted(d.items()))


def is_bounded_time_completable(a: Automaton, cover: MarkerCover) -> bool:
    return bool(verify_bounded_time_nonblocking(a, cover))


# -- joint synthesis -----------------------------------------------------------

@dataclass(frozen=True)
class ClassStep:
    cls: str
    states_in: int
    states_out: int
    transitions_in: int
    transitions_out: int
    dropped: int
    visited: int
    bound: int


@dataclass(frozen=True)
class PassRecord:
    index: int
    classes: tuple[ClassStep, ...]
    supc_states: int
    supc_transitions: int
    empty: bool


@dataclass
class SynthesisReport:
    passes: list[PassRecord] = field(default_factory=list)
    initial_states: int = 0
    pass_bound: int = 0
    controllable: bool = False
    bounded: bool = False
    intermediates: list[Automaton] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.passes)

    def lines(self) -> list[str]:
        out = [f"iterations={self.iterations}", f"initial_states={self.initial_states}",
               f"pass_bound={self.pass_bound}"]
        for p in self.passes:
            for c in p.classes:
                out.append(
                    f"pass{p.index}.{c.cls}.states={c.states_in}->{c.states_out} "
                    f"pass{p.index}.{c.cls}.dropped={c.dropped} "
                    f"pass{p.index}.{c.cls}.visited={c.visited}/{c.bound}"
                )
            out.append(f"pass{p.index}.supc.states={p.supc_states} pass{p.index}.empty={str(p.empty).lower()}")
        out.append(f"controllable={str(self.controllable).lower()}")
        out.append(f"bounded_time_nonblocking={str(self.bounded).lower()}")
        return out


def sup_cbtc(
    g: Automaton,
    e_spec: Automaton | Sequence[Automaton] | None,
    cover: MarkerCover,
    order: str = "lifo",
) -> tuple[Automaton, SynthesisReport]:
    """Supremal controllable and bounded-time completable sublanguage of
    ``E ∩ Lm(g)``, iterated to a language fixpoint."""
    cover.check_covers(g)
    specs = [] if e_spec is None else [e_spec] if isinstance(e_spec, Automaton) else list(e_spec)
    k = g
    for s in specs:
        k = product(k, s)
    k = trim(k)
    report = SynthesisReport(initial_states=k.n_states, pass_bound=max(k.n_states, 1) * cover.budget_product)
    report.intermediates.append(k)
    while True:
        steps = []
        nk = k
        for cls in cover:
            run = sup_btc_run(g, nk, cls, order)
            steps.append(ClassStep(cls.name, nk.n_states, run.automaton.n_states, nk.n_transitions,
                                   run.automaton.n_transitions, len(run.dropped), run.visited, run.bound))
            nk = run.automaton
        nxt = _compact(sup_c(nk, g))
        report.passes.append(PassRecord(len(report.passes) + 1, tuple(steps), nxt.n_states,
                                        nxt.n_transitions, nxt.is_empty()))
        report.intermediates.append(nxt)
        done = nxt.is_empty() or bool(language_equal(nxt, k))
        k = nxt
        if done:
            break
    if not k.is_empty():
        report.controllable = bool(is_controllable(k, g))
        report.bounded = bool(verify_bounded_time_nonblocking(k, cover))
    return k, report


def _compact(a: Automaton) -> Automaton:
    """Renumber labels to ``s0, s1, ...`` keeping the activity annotation."""
    if a.is_empty():
        return a
    return Automaton(a.events, a.succ, a.initial, a.marked,
                     tuple(f"s{i}" for i in range(a.n_states)),
                     tuple(a.activity_of(q) for q in range(a.n_states)), None)
