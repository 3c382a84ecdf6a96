"""Delivery-vehicle case study: five zones, twelve directed routes.

Zone 0 is the charging area, zones 1 and 2 serve customers, zones 3 and 4
store packages.  Each route is a leave event followed by an arrive event;
``T<a><b>`` is the activity of travelling from zone ``a`` to zone ``b``.
One tick stands for two minutes.
"""
from __future__ import annotations

from .automaton import Automaton, product, trim
from .bounded import MarkerCover
from .control import sup_c
from .events import TICK, EventTable
from .ttg import ActivityModel, build_ttg, model_from_table

INF = None

# (leave, arrive, from zone, to zone, leave bounds, arrive bounds)
ROUTES = (
    ("1", "2", 0, 1, (1, INF), (1, 1)),
    ("11", "12", 1, 0, (0, INF), (1, 1)),
    ("13", "14", 1, 2, (0, INF), (1, 2)),
    ("15", "16", 1, 4, (0, INF), (1, 1)),
    ("21", "22", 2, 1, (0, INF), (1, 2)),
    ("23", "24", 2, 3, (0, INF), (1, 1)),
    ("31", "32", 3, 1, (0, INF), (1, 2)),
    ("33", "34", 3, 2, (0, INF), (1, 1)),
    ("35", "36", 3, 4, (0, INF), (1, 2)),
    ("41", "42", 4, 0, (0, INF), (2, 2)),
    ("43", "44", 4, 1, (0, INF), (1, 1)),
    ("45", "46", 4, 3, (0, INF), (1, 1)),
)

LEAVE_Z4 = ("41", "43", "45")
ARRIVE_Z4 = ("16", "36")


def events() -> EventTable:
    names = sorted((e for r in ROUTES for e in r[:2]), key=int)
    leaves = [r[0] for r in ROUTES]
    return EventTable.of(names, hib=leaves, force=leaves)


def activity_model() -> ActivityModel:
    zones = [f"Z{i}" for i in range(5)]
    transit = [f"T{a}{b}" for _, _, a, b, _, _ in ROUTES]
    transitions = []
    bounds = {}
    for leave, arrive, a, b, lb, ab in ROUTES:
        transitions.append((f"Z{a}", leave, f"T{a}{b}"))
        transitions.append((f"T{a}{b}", arrive, f"Z{b}"))
        bounds[leave] = lb
        bounds[arrive] = ab
    return model_from_table(events(), bounds, transitions, "Z0", ("Z0", "Z1", "Z2"), zones + transit)


def plant() -> Automaton:
    return build_ttg(activity_model())


def safety_spec(table: EventTable | None = None) -> Automaton:
    """Once the vehicle has come to zone 4 from zone 3 it may not go on to zone 1."""
    table = table or events()
    every = table.names
    trans = []
    for e in every:
        trans.append(("free", e, "via3" if e == "36" else "free"))
        if e == "43":
            continue
        trans.append(("via3", e, "free" if e in ("41", "45") else "via3"))
    return Automaton.build(table, ("free", "via3"), "free", ("free", "via3"), trans)


def temporal_spec(table: EventTable | None = None) -> Automaton:
    """After arriving at zone 4 the vehicle leaves before a second tick."""
    table = table or events()
    trans = []
    for e in table.names:
        if e in ARRIVE_Z4:
            trans.append(("away", e, "arrived"))
            trans.append(("arrived", e, "arrived"))
            trans.append(("waited", e, "arrived"))
        elif e in LEAVE_Z4:
            for s in ("away", "arrived", "waited"):
                trans.append((s, e, "away"))
        elif e == TICK:
            trans.append(("away", e, "away"))
            trans.append(("arrived", e, "waited"))
        else:
            for s in ("away", "arrived", "waited"):
                trans.append((s, e, s))
    states = ("away", "arrived", "waited")
    return Automaton.build(table, states, "away", states, trans)


def cover(service: int = 5, charge: int = 9) -> MarkerCover:
    return MarkerCover.of(("service", ("Z1", "Z2"), service), ("charge", ("Z0",), charge))


def nonblocking_supervisor(g: Automaton | None = None) -> Automaton:
    """The standard (untimed-completion) nonblocking supervisor for both specs."""
    g = g or plant()
    k = trim(product(product(g, safety_spec(g.events)), temporal_spec(g.events)))
    return sup_c(k, g)
