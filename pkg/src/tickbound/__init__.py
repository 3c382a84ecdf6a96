"""Bounded-time nonblocking supervisor synthesis for timed discrete-event systems."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .automaton import (
    Automaton,
    Verdict,
    is_nonblocking,
    language_equal,
    language_included,
    product,
    trim,
    union,
)
from .bounded import (
    CoverClass,
    MarkerCover,
    SynthesisReport,
    restrict_marking,
    sup_btc,
    sup_btc_run,
    sup_cbtc,
    verify_bounded_time_nonblocking,
)
from .control import ControlContext, eligible_events, is_controllable, sup_c
from .dot import export_dot
from .errors import (
    AlphabetMismatch,
    EmptyClassError,
    LanguageNotContained,
    NotActivityLoopFree,
    ParseError,
    TdesError,
)
from .events import TICK, EventTable
from .textio import parse_cover, parse_model, parse_project, serialize_cover, serialize_model
from .ttg import ActivityModel, TimerBound, build_ttg, check_activity_loop_free

__all__ = [
    "BACKEND", "TICK", "ActivityModel", "AlphabetMismatch", "Automaton", "ControlContext",
    "CoverClass", "EmptyClassError", "EventTable", "LanguageNotContained", "MarkerCover",
    "NotActivityLoopFree", "ParseError", "SynthesisReport", "TdesError", "TimerBound", "Verdict",
    "build_ttg", "check_activity_loop_free", "eligible_events", "export_dot", "is_controllable",
    "is_nonblocking", "language_equal", "language_included", "parse_cover", "parse_model",
    "parse_project", "product", "restrict_marking", "serialize_cover", "serialize_model", "sup_btc",
    "sup_btc_run", "sup_c", "sup_cbtc", "trim", "union", "verify_bounded_time_nonblocking",
]
