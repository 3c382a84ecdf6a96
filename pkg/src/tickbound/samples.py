"""Small hand-built automata used by the docs, the CLI fixtures and the tests."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from . import vehicle
from .automaton import Automaton
from .bounded import CoverClass, MarkerCover
from .events import EventTable
from .textio import serialize_cover, serialize_model


def counter_range_demo(with_branch: bool = True) -> tuple[Automaton, CoverClass]:
    """Budget-2 example where a path sits at exactly two ticks before marking.

    From 0 the path ``a tick tick alpha beta`` reaches marked state 8 with two
    ticks and must survive; the alternative ``tick`` out of 6 would be the
    third tick and must be cut.
    """
    table = EventTable.of(["a", "alpha", "beta", "b", "gamma", "delta"])
    trans = [
        ("0", "a", "1"), ("1", "tick", "2"), ("2", "tick", "5"), ("5", "alpha", "6"),
        ("6", "beta", "8"), ("6", "tick", "7"), ("7", "tick", "8"), ("8", "b", "0"),
    ]
    states = ["0", "1", "2", "5", "6", "7", "8"]
    if with_branch:
        trans += [("2", "gamma", "3"), ("3", "tick", "4"), ("4", "delta", "8")]
        states += ["3", "4"]
    act = {s: ("home" if s in ("0", "8") else f"x{s}") for s in states}
    a = Automaton.build(table, states, "0", ("0", "8"), trans, act)
    return a, CoverClass("home", frozenset({"home"}), 2)


def data_dir() -> Path:
    return Path(str(resources.files("tickbound") / "data"))


def fixture_texts() -> dict[str, str]:
    """Relative path to canonical text for every shipped data file."""
    g = vehicle.plant()
    demo, cls = counter_range_demo()
    return {
        "vehicle/vehicle.act": serialize_model(vehicle.activity_model()),
        "vehicle/safety.aut": serialize_model(vehicle.safety_spec()),
        "vehicle/temporal.aut": serialize_model(vehicle.temporal_spec()),
        "vehicle/vehicle.cov": serialize_cover(vehicle.cover()),
        "vehicle/sup.aut": serialize_model(vehicle.nonblocking_supervisor(g)),
        "vehicle/vehicle.proj": (
            "[project]\nplant vehicle.act\nspec safety.aut\nspec temporal.aut\n"
            "cover vehicle.cov\norder lifo\nverbosity 1\n"
        ),
        "demo/counter.aut": serialize_model(demo),
        "demo/counter.cov": serialize_cover(MarkerCover((cls,))),
    }


def write_fixtures(root: Path | None = None) -> list[Path]:
    root = Path(root) if root is not None else data_dir()
    out = []
    for rel, text in fixture_texts().items():
        p = root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
        out.append(p)
    return out
