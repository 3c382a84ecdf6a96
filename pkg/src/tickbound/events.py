"""Event registry shared by every automaton of a model."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

TICK = "tick"


@dataclass(frozen=True)
class EventTable:
    """Ordered set of events with their control attributes.

    ``tick`` is always present and always the last event.  Prohibitible
    (``hib``) and forcible (``for``) events must be activity events.
    Controllable events are the prohibitible ones plus ``tick``.
    """

    activity_events: tuple[str, ...]
    prohibitible: frozenset[str] = frozenset()
    forcible: frozenset[str] = frozenset()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        acts = tuple(str(e) for e in self.activity_events)
        object.__setattr__(self, "activity_events", acts)
        object.__setattr__(self, "prohibitible", frozenset(self.prohibitible))
        object.__setattr__(self, "forcible", frozenset(self.forcible))
        if TICK in acts:
            raise ValueError("'tick' is reserved and may not be declared as an activity event")
        if len(set(acts)) != len(acts):
            raise ValueError("duplicate event names")
        for e in acts:
            if not e or any(c.isspace() for c in e):
                raise ValueError(f"invalid event name {e!r}")
        known = set(acts)
        for name, subset in (("prohibitible", self.prohibitible), ("forcible", self.forcible)):
            extra = subset - known
            if extra:
                raise ValueError(f"{name} events not declared as activity events: {sorted(extra)}")
        index = {e: i for i, e in enumerate(acts)}
        index[TICK] = len(acts)
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, events: Iterable[str], hib: Iterable[str] = (), force: Iterable[str] = ()) -> "EventTable":
        return cls(tuple(e for e in events if e != TICK), frozenset(hib), frozenset(force))

    @property
    def names(self) -> tuple[str, ...]:
        return self.activity_events + (TICK,)

    @property
    def tick(self) -> int:
        return len(self.activity_events)

    def __len__(self):
        return len(self.activity_events) + 1

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"undefined event {name!r}") from None

    def name(self, idx: int) -> str:
        return self.names[idx]

    @property
    def controllable(self) -> frozenset[str]:
        return self.prohibitible | {TICK}

    @property
    def uncontrollable(self) -> frozenset[str]:
        return frozenset(self.names) - self.controllable

    def is_uncontrollable(self, name: str) -> bool:
        return name != TICK and name not in self.prohibitible

    def is_forcible(self, name: str) -> bool:
        return name in self.forcible

    def flags(self, name: str) -> tuple[str, ...]:
        out = []
        if name in self.prohibitible:
            out.append("hib")
        if name in self.forcible:
            out.append("for")
        return tuple(out)


def tick_count(s: Iterable[str], table: EventTable | None = None) -> int:
    """Number of ``tick`` occurrences in the event sequence ``s``."""
    name = TICK if table is None else table.name(table.tick)
    return sum(1 for e in s if e == name)
