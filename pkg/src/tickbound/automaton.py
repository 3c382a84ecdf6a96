"""Deterministic partial automata and the language operations on them.

States are integers ``0..n-1``.  Every state also carries a display label,
an optional activity name (the untimed activity of the plant state it
tracks) and an optional ``origin`` (component states of a product, or the
``(base, d)`` pair of a counter state).  Transition functions are partial;
no dump state is ever added.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping, Sequence

import numpy as np

from ._kernels import kernels
from .errors import AlphabetMismatch
from .events import EventTable, tick_count

__all__ = [
    "Automaton",
    "Verdict",
    "reachable",
    "coreachable",
    "trim",
    "is_nonblocking",
    "product",
    "union",
    "language_equal",
    "language_included",
    "tick_count",
]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a property check.

    ``witness`` is an event sequence demonstrating a violation (``None``
    when the property holds); ``detail`` carries a reason ``code`` plus
    check-specific data.
    """

    holds: bool
    witness: tuple[str, ...] | None = None
    detail: Mapping[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    @property
    def code(self) -> str:
        return self.detail.get("code", "ok" if self.holds else "violation")


@dataclass(frozen=True, eq=False)
class Automaton:
    events: EventTable
    succ: tuple[dict, ...]
    initial: int | None
    marked: frozenset[int]
    labels: tuple[str, ...]
    activity: tuple[str | None, ...]
    origin: tuple | None = None

    # -- construction -----------------------------------------------------

    @classmethod
    def empty(cls, events: EventTable) -> "Automaton":
        return cls(events, (), None, frozenset(), (), ())

    @classmethod
    def build(
        cls,
        events: EventTable,
        states: Sequence[str],
        initial: str | None,
        marked: Iterable[str],
        transitions: Iterable[tuple[str, str, str]],
        activity: Mapping[str, str | None] | None = None,
    ) -> "Automaton":
        """Build from state labels and ``(src, event, dst)`` triples."""
        index = {}
        for s in states:
            if s in index:
                raise ValueError(f"duplicate state {s!r}")
            index[s] = len(index)
        succ: list[dict] = [{} for _ in states]
        for src, ev, dst in transitions:
            if src not in index or dst not in index:
                missing = src if src not in index else dst
                raise ValueError(f"transition uses undeclared state {missing!r}")
            e = events.index(ev)
            if e in succ[index[src]]:
                raise ValueError(f"nondeterministic transition on {ev!r} at state {src!r}")
            succ[index[src]][e] = index[dst]
        if initial is None:
            if states:
                raise ValueError("nonempty automaton needs an initial state")
            init = None
        else:
            if initial not in index:
                raise ValueError(f"undeclared initial state {initial!r}")
            init = index[initial]
        mk = set()
        for m in marked:
            if m not in index:
                raise ValueError(f"undeclared marked state {m!r}")
            mk.add(index[m])
        activity = activity or {}
        acts = tuple(activity.get(s) for s in states)
        return cls(events, tuple(_sorted(d) for d in succ), init, frozenset(mk), tuple(states), acts)

    # -- basic queries ----------------------------------------------------

    def __len__(self):
        return len(self.succ)

    @property
    def n_states(self) -> int:
        return len(self.succ)

    @property
    def n_transitions(self) -> int:
        return sum(len(d) for d in self.succ)

    def is_empty(self) -> bool:
        return self.initial is None

    def step(self, q: int, event: str) -> int | None:
        return self.succ[q].get(self.events.index(event))

    def run(self, string: Iterable[str], start: int | None = None) -> int | None:
        """State reached by ``string`` (from ``start`` or the initial state)."""
        q = self.initial if start is None else start
        for ev in string:
            if q is None:
                return None
            q = self.succ[q].get(self.events.index(ev))
        return q

    def generates(self, string: Iterable[str]) -> bool:
        return self.run(string) is not None

    def accepts(self, string: Iterable[str]) -> bool:
        q = self.run(string)
        return q is not None and q in self.marked

    def eligible(self, q: int) -> frozenset[str]:
        return frozenset(self.events.name(e) for e in self.succ[q])

    def transitions(self) -> Iterator[tuple[int, str, int]]:
        names = self.events.names
        for q, d in enumerate(self.succ):
            for e, r in d.items():
                yield q, names[e], r

    def activity_of(self, q: int) -> str:
        a = self.activity[q]
        return self.labels[q] if a is None else a

    def state(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no state labelled {label!r}") from None

    def labelled_transitions(self) -> set[tuple[str, str, str]]:
        return {(self.labels[q], e, self.labels[r]) for q, e, r in self.transitions()}

    # -- array views used by the kernels ----------------------------------

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ptr = [0]
        evt: list[int] = []
        dst: list[int] = []
        for d in self.succ:
            evt.extend(d.keys())
            dst.extend(d.values())
            ptr.append(len(evt))
        return (
            np.asarray(ptr, dtype=np.int64),
            np.asarray(evt, dtype=np.int64),
            np.asarray(dst, dtype=np.int64),
        )

    @cached_property
    def marked_mask(self) -> np.ndarray:
        m = np.zeros(len(self.succ), dtype=np.uint8)
        for q in self.marked:
            m[q] = 1
        return m

    def mask(self, states: Iterable[int]) -> np.ndarray:
        m = np.zeros(len(self.succ), dtype=np.uint8)
        for q in states:
            m[q] = 1
        return m

    # -- derived automata -------------------------------------------------

    def restrict(self, keep) -> "Automaton":
        """Sub-automaton on the states where ``keep`` is true (order kept)."""
        keep = keep.tolist() if hasattr(keep, "tolist") else list(keep)
        if self.initial is None or not keep[self.initial]:
            return Automaton.empty(self.events)
        idx = [q for q, k in enumerate(keep) if k]
        new = {q: i for i, q in enumerate(idx)}
        succ = tuple({e: new[r] for e, r in self.succ[q].items() if keep[r]} for q in idx)
        origin = None if self.origin is None else tuple(self.origin[q] for q in idx)
        return Automaton(
            self.events,
            succ,
            new[self.initial],
            frozenset(new[q] for q in self.marked if keep[q]),
            tuple(self.labels[q] for q in idx),
            tuple(self.activity[q] for q in idx),
            origin,
        )

    def with_marking(self, marked: Iterable[int]) -> "Automaton":
        return Automaton(
            self.events, self.succ, self.initial, frozenset(marked), self.labels, self.activity, self.origin
        )

    def relabelled(self, prefix: str = "") -> "Automaton":
        """Copy with compact labels ``prefix0, prefix1, ...``."""
        return Automaton(
            self.events,
            self.succ,
            self.initial,
            self.marked,
            tuple(f"{prefix}{i}" for i in range(len(self.succ))),
            tuple(self.activity_of(q) for q in range(len(self.succ))),
            self.origin,
        )

    def __repr__(self):
        if self.is_empty():
            return "Automaton(<empty>)"
        return f"Automaton(states={self.n_states}, transitions={self.n_transitions}, marked={len(self.marked)})"


def _sorted(d: dict) -> dict:
    return {e: d[e] for e in sorted(d)}


def _all(n: int) -> np.ndarray:
    return np.ones(n, dtype=np.uint8)


def reachable_mask(a: Automaton) -> np.ndarray:
    if a.is_empty():
        return np.zeros(0, dtype=np.uint8)
    ptr, _, dst = a.csr
    return kernels.reach_mask(ptr, dst, a.initial, _all(a.n_states))


def coreachable_mask(a: Automaton) -> np.ndarray:
    ptr, _, dst = a.csr
    return kernels.coreach_mask(ptr, dst, a.marked_mask, _all(a.n_states))


def reachable(a: Automaton) -> Automaton:
    """Sub-automaton of the states reachable from the initial state."""
    if a.is_empty():
        return a
    keep = reachable_mask(a)
    if keep.all():
        return a
    return a.restrict(keep)


def coreachable(a: Automaton) -> frozenset[int]:
    """States from which some marked state can be reached."""
    if a.n_states == 0:
        return frozenset()
    return frozenset(np.flatnonzero(coreachable_mask(a)).tolist())


def trim(a: Automaton) -> Automaton:
    """Reachable and coreachable part; the empty automaton if nothing is left."""
    if a.is_empty():
        return a
    keep = reachable_mask(a) & coreachable_mask(a)
    if keep.all():
        return a
    return a.restrict(keep)


def _bfs_path(a: Automaton, goal) -> tuple[tuple[str, ...], int] | None:
    """Shortest length-lex path from the initial state to a state satisfying ``goal``."""
    if a.is_empty():
        return None
    parent = {a.initial: None}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        if goal(q):
            path = []
            while parent[q] is not None:
                p, e = parent[q]
                path.append(a.events.name(e))
                q = p
            return tuple(reversed(path)), q
        for e, r in a.succ[q].items():
            if r not in parent:
                parent[r] = (q, e)
                queue.append(r)
    return None


def path_to(a: Automaton, target: int) -> tuple[str, ...] | None:
    found = _bfs_path(a, lambda q: q == target)
    return None if found is None else found[0]


def is_nonblocking(a: Automaton) -> Verdict:
    """Holds iff every reachable state is coreachable."""
    if a.is_empty():
        return Verdict(True, detail={"code": "empty"})
    reach = reachable_mask(a)
    co = coreachable_mask(a)
    bad = reach.astype(bool) & ~co.astype(bool)
    if not bad.any():
        return Verdict(True)
    found = _bfs_path(a, lambda q: bool(bad[q]))
    path, q = found
    return Verdict(False, path, {"code": "blocking", "state": q, "label": a.labels[q]})


def _check_same(a: Automaton, b: Automaton):
    if a.events != b.events:
        raise AlphabetMismatch("automata are defined over different event tables")


def product(a: Automaton, b: Automaton) -> Automaton:
    """Reachable synchronous product over a shared event table.

    Generated and marked languages are the intersections of the operands'.
    ``origin`` of the result holds the component state pairs.
    """
    _check_same(a, b)
    if a.is_empty() or b.is_empty():
        return Automaton.empty(a.events)
    start = (a.initial, b.initial)
    ids = {start: 0}
    pairs = [start]
    succ: list[dict] = []
    i = 0
    while i < len(pairs):
        x, y = pairs[i]
        row = {}
        by = b.succ[y]
        for e, x2 in a.succ[x].items():
            y2 = by.get(e)
            if y2 is None:
                continue
            key = (x2, y2)
            j = ids.get(key)
            if j is None:
                j = ids[key] = len(pairs)
                pairs.append(key)
            row[e] = j
        succ.append(row)
        i += 1
    marked = frozenset(k for k, (x, y) in enumerate(pairs) if x in a.marked and y in b.marked)
    labels = tuple(f"({a.labels[x]},{b.labels[y]})" for x, y in pairs)
    activity = tuple(a.activity[x] if a.activity[x] is not None else b.activity[y] for x, y in pairs)
    return Automaton(a.events, tuple(succ), 0, marked, labels, activity, tuple(pairs))


def union(a: Automaton, b: Automaton) -> Automaton:
    """Deterministic recognizer of ``L(a) | L(b)`` and ``Lm(a) | Lm(b)``."""
    _check_same(a, b)
    if a.is_empty():
        return b
    if b.is_empty():
        return a
    start = (a.initial, b.initial)
    ids = {start: 0}
    pairs = [start]
    succ: list[dict] = []
    i = 0
    while i < len(pairs):
        x, y = pairs[i]
        sa = a.succ[x] if x is not None else {}
        sb = b.succ[y] if y is not None else {}
        row = {}
        for e in sorted(set(sa) | set(sb)):
            key = (sa.get(e), sb.get(e))
            j = ids.get(key)
            if j is None:
                j = ids[key] = len(pairs)
                pairs.append(key)
            row[e] = j
        succ.append(row)
        i += 1
    marked = frozenset(
        k for k, (x, y) in enumerate(pairs) if (x is not None and x in a.marked) or (y is not None and y in b.marked)
    )

    def lab(x, y):
        return f"({'-' if x is None else a.labels[x]}|{'-' if y is None else b.labels[y]})"

    def act(x, y):
        if x is not None and a.activity_of(x) is not None:
            return a.activity_of(x)
        return b.activity_of(y)

    labels = tuple(lab(x, y) for x, y in pairs)
    activity = tuple(act(x, y) for x, y in pairs)
    return Automaton(a.events, tuple(succ), 0, marked, labels, activity, tuple(pairs))


def _parallel_search(a: Automaton, b: Automaton, bad) -> tuple[str, ...] | None:
    """Length-lex least string whose pair of states satisfies ``bad``.

    Pairs use ``None`` for "string not generated".  Successors of a pair are
    explored only while both sides are alive.
    """
    start = (a.initial, b.initial)
    parent = {start: None}
    queue = deque([start])
    names = a.events.names
    while queue:
        pair = queue.popleft()
        if bad(pair):
            path = []
            while parent[pair] is not None:
                pair, e = parent[pair]
                path.append(names[e])
            return tuple(reversed(path))
        x, y = pair
        if x is None or y is None:
            continue
        sa, sb = a.succ[x], b.succ[y]
        for e in sorted(set(sa) | set(sb)):
            nxt = (sa.get(e), sb.get(e))
            if nxt not in parent:
                parent[nxt] = (pair, e)
                queue.append(nxt)
    return None


def language_equal(a: Automaton, b: Automaton) -> Verdict:
    """Holds iff ``L(a) == L(b)`` and ``Lm(a) == Lm(b)``.

    The witness is the length-lexicographically least distinguishing string
    (event-table order).
    """
    _check_same(a, b)

    def bad(pair):
        x, y = pair
        if (x is None) != (y is None):
            return True
        if x is None:
            return False
        return (x in a.marked) != (y in b.marked)

    w = _parallel_search(a, b, bad)
    if w is None:
        return Verdict(True)
    x, y = a.run(w), b.run(w)
    if (x is None) != (y is None):
        code = "closed-behaviour"
    else:
        code = "marked-behaviour"
    return Verdict(False, w, {"code": code})


def language_included(a: Automaton, b: Automaton) -> Verdict:
    """Holds iff ``L(a) <= L(b)`` and ``Lm(a) <= Lm(b)``."""
    _check_same(a, b)

    def bad(pair):
        x, y = pair
        if x is None:
            return False
        if y is None:
            return True
        return x in a.marked and y not in b.marked

    w = _parallel_search(a, b, bad)
    if w is None:
        return Verdict(True)
    return Verdict(False, w, {"code": "not-included"})


def strings(a: Automaton, depth: int, marked_only: bool = False) -> set[tuple[str, ...]]:
    """All strings of ``L(a)`` (or ``Lm(a)``) of length at most ``depth``."""
    out: set[tuple[str, ...]] = set()
    if a.is_empty():
        return out
    names = a.events.names
    stack = [(a.initial, ())]
    while stack:
        q, s = stack.pop()
        if not marked_only or q in a.marked:
            out.add(s)
        if len(s) < depth:
            for e, r in a.succ[q].items():
                stack.append((r, s + (names[e],)))
    return out
