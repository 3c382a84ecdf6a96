"""Controllability of tick-automaton languages and the supremal controllable sublanguage.

A sublanguage is controllable w.r.t. the plant when, after every prefix,
it keeps every uncontrollable event the plant allows, and it keeps ``tick``
too unless some forcible event is still eligible to preempt it.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ._kernels import kernels
from .automaton import Automaton, Verdict, product, trim
from .errors import LanguageNotContained


@dataclass(frozen=True)
class ControlContext:
    """The plant a supervisor is synthesized for."""

    plant: Automaton

    @property
    def events(self):
        return self.plant.events


def eligible_events(a: Automaton, q: int) -> frozenset[str]:
    if not 0 <= q < a.n_states:
        raise KeyError(f"unknown state {q}")
    return a.eligible(q)


def _plant(ctx) -> Automaton:
    return ctx.plant if isinstance(ctx, ControlContext) else ctx


def _joint(k: Automaton, g: Automaton) -> Automaton:
    """Product of ``k`` with the plant, checking ``L(k) <= L(g)`` on the way."""
    joint = product(k, g)
    for p, (x, q) in enumerate(joint.origin):
        if len(k.succ[x]) != len(joint.succ[p]):
            missing = next(e for e in k.succ[x] if e not in g.succ[q])
            path = _path(joint, p) + (k.events.name(missing),)
            raise LanguageNotContained(f"string {' '.join(path) or 'ε'} is not generated by the plant")
    return joint


def _path(a: Automaton, target: int) -> tuple[str, ...]:
    parent = {a.initial: None}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        if q == target:
            break
        for e, r in a.succ[q].items():
            if r not in parent:
                parent[r] = (q, e)
                queue.append(r)
    out = []
    q = target
    while parent[q] is not None:
        q, e = parent[q]
        out.append(a.events.name(e))
    return tuple(reversed(out))


class _Rules:
    """Per-event control attributes as index sets."""

    def __init__(self, table):
        self.tick = table.tick
        self.unc = frozenset(table.index(e) for e in table.uncontrollable)
        self.forc = frozenset(table.index(e) for e in table.forcible)

    def violation(self, plant_row, kept) -> int | None:
        """Offending event index at one state pair, or None.

        ``plant_row`` maps the events eligible in the plant; ``kept`` is the
        set of events the candidate keeps.
        """
        for e in plant_row:
            if e in self.unc and e not in kept:
                return e
        if self.tick in plant_row and self.tick not in kept and not (self.forc & kept):
            return self.tick
        return None


def is_controllable(k: Automaton, ctx) -> Verdict:
    """Check controllability of ``Lm(k)`` w.r.t. the plant.

    ``k`` is expected to be trim.  The witness is the string leading to the
    first violating state pair followed by the offending event.
    """
    g = _plant(ctx)
    if k.is_empty():
        return Verdict(True, detail={"code": "empty"})
    joint = _joint(k, g)
    rules = _Rules(k.events)
    for p, (x, q) in enumerate(joint.origin):
        bad = rules.violation(g.succ[q], joint.succ[p].keys())
        if bad is not None:
            ev = k.events.name(bad)
            return Verdict(
                False,
                _path(joint, p) + (ev,),
                {"code": "uncontrollable" if ev != k.events.name(rules.tick) else "tick-not-preempted",
                 "event": ev, "state": k.labels[x]},
            )
    return Verdict(True)


def sup_c(k: Automaton, ctx, log: list | None = None) -> Automaton:
    """Trim recognizer of the supremal controllable sublanguage of ``Lm(k)``.

    Bad state pairs are removed in index order and the result re-trimmed
    until no pair violates controllability.  When ``log`` is given, each
    round appends the labels of the pairs it removed.
    """
    g = _plant(ctx)
    if k.is_empty():
        return k
    joint = _joint(k, g)
    rules = _Rules(k.events)
    ptr, _, dst = joint.csr
    n = joint.n_states
    alive = np.ones(n, dtype=np.uint8)
    marked = joint.marked_mask
    origin = joint.origin
    while True:
        alive = _trim_mask(ptr, dst, joint.initial, marked, alive)
        if not alive[joint.initial]:
            return Automaton.empty(k.events)
        bad = []
        for p in np.flatnonzero(alive).tolist():
            kept = {e for e, r in joint.succ[p].items() if alive[r]}
            if rules.violation(g.succ[origin[p][1]], kept) is not None:
                bad.append(p)
        if not bad:
            break
        if log is not None:
            log.append(tuple(joint.labels[p] for p in bad))
        alive[bad] = 0
    return trim(project_labels(joint, k).restrict(alive))


def project_labels(joint: Automaton, k: Automaton) -> Automaton:
    """Reuse ``k``'s labels on a product with the plant when they stay unique."""
    xs = [x for x, _ in joint.origin]
    if len(set(xs)) != len(xs):
        return joint
    return Automaton(joint.events, joint.succ, joint.initial, joint.marked,
                     tuple(k.labels[x] for x in xs), joint.activity, joint.origin)


def _trim_mask(ptr, dst, init, marked, alive):
    reach = kernels.reach_mask(ptr, dst, init, alive)
    co = kernels.coreach_mask(ptr, dst, marked, reach)
    return (reach & co).astype(np.uint8)
