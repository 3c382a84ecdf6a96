"""Compilation of timed activity models into tick-automata.

Timer semantics (one timer per activity event, counting down in ticks):

* ``default(e)`` is the upper bound when finite, else the lower bound;
  a timer of a disabled event always sits at its default.
* ``e`` is eligible when it is enabled in the current activity and its timer
  is at most ``u - l`` (finite ``u``) or exactly 0 (``u = inf``).
* ``tick`` is eligible unless an enabled event with finite ``u`` has reached
  timer 0, i.e. its deadline.
* ``tick`` decrements the timers of enabled events (floored at 0 for
  ``u = inf``).  An activity event resets its own timer; every other timer
  carries over only if its event stays enabled in the new activity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .automaton import Automaton, Verdict
from .events import TICK, EventTable


@dataclass(frozen=True)
class TimerBound:
    lower: int
    upper: int | None = None  # None means infinity

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError("lower bound must be a natural number")
        if self.upper is not None and self.upper < self.lower:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    @property
    def finite(self) -> bool:
        return self.upper is not None

    @property
    def default(self) -> int:
        return self.upper if self.upper is not None else self.lower

    def __str__(self):
        return f"({self.lower},{'inf' if self.upper is None else self.upper})"


@dataclass(frozen=True)
class ActivityModel:
    """Untimed activity transition graph with per-event timer bounds."""

    events: EventTable
    activities: tuple[str, ...]
    transitions: tuple[tuple[str, str, str], ...]
    initial: str
    marked: frozenset[str]
    bounds: Mapping[str, TimerBound] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "activities", tuple(self.activities))
        object.__setattr__(self, "transitions", tuple(tuple(t) for t in self.transitions))
        object.__setattr__(self, "marked", frozenset(self.marked))
        known = set(self.activities)
        if len(known) != len(self.activities):
            raise ValueError("duplicate activity")
        if self.initial not in known:
            raise ValueError(f"undeclared initial activity {self.initial!r}")
        if not self.marked <= known:
            raise ValueError(f"undeclared marked activities {sorted(self.marked - known)}")
        seen = set()
        for src, ev, dst in self.transitions:
            if ev == TICK:
                raise ValueError("tick may not label an activity transition")
            if ev not in self.events:
                raise ValueError(f"undefined event {ev!r}")
            if src not in known or dst not in known:
                raise ValueError(f"transition {src} {ev} {dst} uses an undeclared activity")
            if (src, ev) in seen:
                raise ValueError(f"nondeterministic activity transition on {ev!r} at {src!r}")
            seen.add((src, ev))
        for ev in self.events.activity_events:
            if ev not in self.bounds:
                raise ValueError(f"event {ev!r} has no timer bound")

    def successor(self, activity: str, event: str) -> str | None:
        return self.delta.get((activity, event))

    @cached_property
    def delta(self) -> dict[tuple[str, str], str]:
        return {(s, e): t for s, e, t in self.transitions}


def build_ttg(model: ActivityModel) -> Automaton:
    """Compile ``model`` into its (reachable) tick-automaton.

    States are timer configurations ``(activity, timers)``; each is labelled
    ``activity[event:timer,...]`` listing the timers of enabled events.
    """
    table = model.events
    acts = table.activity_events
    bounds = [model.bounds[e] for e in acts]
    defaults = tuple(b.default for b in bounds)
    enabled_cache: dict[str, tuple[int, ...]] = {}

    def enabled(a):
        en = enabled_cache.get(a)
        if en is None:
            en = tuple(i for i, e in enumerate(acts) if (a, e) in model.delta)
            enabled_cache[a] = en
        return en

    def eligible(i, t):
        b = bounds[i]
        if b.finite:
            return t <= b.upper - b.lower
        return t == 0

    start = (model.initial, defaults)
    ids = {start: 0}
    configs = [start]
    succ: list[dict] = []
    tick = table.tick
    k = 0
    while k < len(configs):
        a, timers = configs[k]
        row = {}
        en = enabled(a)
        deadline = False
        for i in en:
            t = timers[i]
            if bounds[i].finite and t == 0:
                deadline = True
            if eligible(i, t):
                a2 = model.delta[(a, acts[i])]
                en2 = set(enabled(a2))
                new = list(defaults)
                for j in en:
                    if j != i and j in en2:
                        new[j] = timers[j]
                row[i] = _intern((a2, tuple(new)), ids, configs)
        if not deadline:
            new = list(timers)
            for i in en:
                new[i] = max(timers[i] - 1, 0)
            row[tick] = _intern((a, tuple(new)), ids, configs)
        succ.append(row)
        k += 1

    def label(cfg):
        a, timers = cfg
        inner = ",".join(f"{acts[i]}:{timers[i]}" for i in enabled(a))
        return f"{a}[{inner}]"

    marked = frozenset(q for q, (a, _) in enumerate(configs) if a in model.marked)
    return Automaton(
        table,
        tuple(succ),
        0,
        marked,
        tuple(label(c) for c in configs),
        tuple(a for a, _ in configs),
        tuple(configs),
    )


def _intern(cfg, ids, configs) -> int:
    j = ids.get(cfg)
    if j is None:
        j = ids[cfg] = len(configs)
        configs.append(cfg)
    return j


def check_activity_loop_free(a: Automaton) -> Verdict:
    """Holds iff deleting every ``tick`` transition leaves an acyclic graph.

    The witness is one cycle of activity events.
    """
    tick = a.events.tick
    color = [0] * a.n_states
    for root in range(a.n_states):
        if color[root]:
            continue
        color[root] = 1
        stack = [(root, iter(a.succ[root].items()), None)]
        while stack:
            q, it, _ = stack[-1]
            for e, r in it:
                if e == tick:
                    continue
                if color[r] == 1:
                    at = next(i for i, entry in enumerate(stack) if entry[0] == r)
                    events = [entry[2] for entry in stack[at + 1:]] + [e]
                    return Verdict(
                        False,
                        tuple(a.events.name(ev) for ev in events),
                        {"code": "activity-loop", "states": tuple(a.labels[entry[0]] for entry in stack[at:])},
                    )
                if color[r] == 0:
                    color[r] = 1
                    stack.append((r, iter(a.succ[r].items()), e))
                    break
            else:
                stack.pop()
                color[q] = 2
    return Verdict(True)


def activity_cycles_have_delay(model: ActivityModel) -> bool:
    """True when every cycle of the activity graph contains an event with ``l >= 1``."""
    fast: dict[str, list[str]] = {a: [] for a in model.activities}
    for src, ev, dst in model.transitions:
        if model.bounds[ev].lower == 0:
            fast[src].append(dst)
    color = {a: 0 for a in model.activities}

    def dfs(a):
        color[a] = 1
        for b in fast[a]:
            if color[b] == 1 or (color[b] == 0 and not dfs(b)):
                return False
        color[a] = 2
        return True

    return all(color[a] or dfs(a) for a in model.activities)


def model_from_table(
    events: EventTable,
    bounds: Mapping[str, tuple[int, int | None]],
    transitions: Iterable[tuple[str, str, str]],
    initial: str,
    marked: Iterable[str],
    activities: Iterable[str] | None = None,
) -> ActivityModel:
    transitions = tuple(transitions)
    if activities is None:
        order: dict[str, None] = {initial: None}
        for s, _, t in transitions:
            order.setdefault(s)
            order.setdefault(t)
        activities = tuple(order)
    return ActivityModel(
        events,
        tuple(activities),
        transitions,
        initial,
        frozenset(marked),
        {e: TimerBound(lo, hi) for e, (lo, hi) in bounds.items()},
    )
