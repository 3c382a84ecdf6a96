"""Line-oriented text formats for models, automata, covers and projects.

Every file is a sequence of ``[section]`` headers followed by
whitespace-separated records; ``#`` starts a comment.

Activity model (``[kind] activity``)::

    [events]       name lower upper [hib] [for]      # upper may be ``inf``
    [states]       name [marked]
    [initial]      name
    [transitions]  src event dst

Automaton (``[kind] automaton``) uses the same sections, without bounds on
events and with an optional ``activity=NAME`` attribute on states.  An
empty automaton has no states and ``-`` as its initial state.

Cover::

    [cover]        class <name> budget <N> activities <a> <b> ...

Project::

    [project]      plant <file> | spec <file> | cover <file> | order lifo|fifo | verbosity <n>
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .automaton import Automaton
from .bounded import CoverClass, MarkerCover
from .errors import AlphabetMismatch, ParseError
from .events import TICK, EventTable
from .ttg import ActivityModel, TimerBound

_SECTION = re.compile(r"^\[([a-z]+)\](.*)$")
_NAME = re.compile(r"^[^\s#\[=][^\s#=]*$")
_FLAGS = ("hib", "for")


@dataclass
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[tuple[int, str | None, list[_Token]]]:
    """Records as ``(line, section_header_or_None, tokens)``."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        m = _SECTION.match(stripped)
        if m:
            rest = m.group(2)
            col0 = raw.index("[") + len(m.group(1)) + 3
            toks = [_Token(t.group(), lineno, col0 + t.start() + 1) for t in re.finditer(r"\S+", rest)]
            out.append((lineno, m.group(1), toks))
            continue
        toks = [_Token(t.group(), lineno, t.start() + 1) for t in re.finditer(r"\S+", line)]
        out.append((lineno, None, toks))
    return out


class _Reader:
    def __init__(self, text: str, source: str | None):
        self.source = source
        self.records = _tokenize(text)

    def error(self, msg, tok: _Token | None = None, line: int | None = None):
        if tok is not None:
            return ParseError(msg, tok.line, tok.column, self.source)
        return ParseError(msg, line, None, self.source)

    def sections(self, allowed: tuple[str, ...]) -> tuple[str | None, dict[str, list[list[_Token]]]]:
        kind = None
        current = None
        body: dict[str, list[list[_Token]]] = {}
        headers: dict[str, int] = {}
        for lineno, header, toks in self.records:
            if header is not None:
                if header == "kind":
                    if len(toks) != 1:
                        raise self.error("[kind] takes exactly one word", line=lineno)
                    kind = toks[0].text
                    current = None
                    continue
                if header not in allowed:
                    raise self.error(f"unknown section [{header}]", line=lineno)
                if header in headers:
                    raise self.error(f"section [{header}] repeated", line=lineno)
                headers[header] = lineno
                current = header
                body[header] = []
                if toks:
                    body[header].append(toks)
                continue
            if current is None:
                raise self.error("record outside any section", toks[0])
            body[current].append(toks)
        return kind, body


def _name(r: _Reader, tok: _Token, what: str) -> str:
    if not _NAME.match(tok.text):
        raise r.error(f"invalid {what} name {tok.text!r}", tok)
    return tok.text


def _int(r: _Reader, tok: _Token, what: str) -> int:
    try:
        v = int(tok.text)
    except ValueError:
        raise r.error(f"{what} must be a natural number, got {tok.text!r}", tok) from None
    if v < 0:
        raise r.error(f"{what} must be a natural number, got {tok.text!r}", tok)
    return v


def _events(r: _Reader, rows: list[list[_Token]], with_bounds: bool):
    names: list[str] = []
    hib: set[str] = set()
    force: set[str] = set()
    bounds: dict[str, TimerBound] = {}
    seen: set[str] = set()
    for toks in rows:
        name = _name(r, toks[0], "event")
        if name == TICK:
            raise r.error("'tick' is implicit and may not be declared", toks[0])
        if name in seen:
            raise r.error(f"duplicate event {name!r}", toks[0])
        seen.add(name)
        rest = toks[1:]
        if with_bounds:
            if len(rest) < 2:
                raise r.error(f"event {name!r} needs lower and upper bounds", toks[0])
            lo = _int(r, rest[0], "lower bound")
            hi = None if rest[1].text == "inf" else _int(r, rest[1], "upper bound")
            if hi is not None and hi < lo:
                raise r.error(f"lower bound {lo} exceeds upper bound {hi} for event {name!r}", rest[0])
            bounds[name] = TimerBound(lo, hi)
            rest = rest[2:]
        for t in rest:
            if t.text == "hib":
                hib.add(name)
            elif t.text == "for":
                force.add(name)
            else:
                raise r.error(f"unknown event flag {t.text!r}", t)
        names.append(name)
    return EventTable.of(names, hib, force), bounds


def _states(r: _Reader, rows, allow_activity: bool):
    states: list[str] = []
    marked: list[str] = []
    activity: dict[str, str] = {}
    for toks in rows:
        name = _name(r, toks[0], "state")
        if name in activity or name in states:
            raise r.error(f"duplicate state {name!r}", toks[0])
        for t in toks[1:]:
            if t.text == "marked":
                marked.append(name)
            elif allow_activity and t.text.startswith("activity="):
                activity[name] = _name(r, _Token(t.text[9:], t.line, t.column + 9), "activity")
            else:
                raise r.error(f"unknown state attribute {t.text!r}", t)
        states.append(name)
    return states, marked, activity


def _initial(r: _Reader, rows, states, line_hint):
    if len(rows) != 1 or len(rows[0]) != 1:
        raise r.error("[initial] takes exactly one state", line=rows[0][0].line if rows else line_hint)
    tok = rows[0][0]
    if tok.text == "-":
        return None, tok
    if tok.text not in states:
        raise r.error(f"undeclared initial state {tok.text!r}", tok)
    return tok.text, tok


def _transitions(r: _Reader, rows, table: EventTable, states: set, allow_tick: bool):
    out = []
    seen = set()
    for toks in rows:
        if len(toks) != 3:
            raise r.error("a transition is 'src event dst'", toks[0])
        src, ev, dst = toks
        for t in (src, dst):
            if t.text not in states:
                raise r.error(f"undeclared state {t.text!r}", t)
        if ev.text not in table:
            raise r.error(f"undefined event {ev.text!r}", ev)
        if ev.text == TICK and not allow_tick:
            raise r.error("tick may not label an activity transition", ev)
        if (src.text, ev.text) in seen:
            raise r.error(f"nondeterministic transition on {ev.text!r} at {src.text!r}", ev)
        seen.add((src.text, ev.text))
        out.append((src.text, ev.text, dst.text))
    return out


def parse_model(text: str, source: str | None = None) -> ActivityModel | Automaton:
    """Parse an activity model or an automaton, dispatching on ``[kind]``."""
    r = _Reader(text, source)
    kind, body = r.sections(("events", "states", "initial", "transitions"))
    if kind not in ("activity", "automaton"):
        raise r.error("missing or unknown [kind]; expected 'activity' or 'automaton'", line=1)
    for sec in ("events", "states", "initial"):
        if sec not in body:
            raise r.error(f"missing section [{sec}]", line=1)
    table, bounds = _events(r, body["events"], kind == "activity")
    states, marked, activity = _states(r, body["states"], kind == "automaton")
    initial, itok = _initial(r, body["initial"], set(states), 1)
    trans = _transitions(r, body.get("transitions", []), table, set(states), kind == "automaton")
    if kind == "activity":
        if initial is None:
            raise r.error("an activity model needs an initial activity", itok)
        try:
            return ActivityModel(table, tuple(states), tuple(trans), initial, frozenset(marked), bounds)
        except ValueError as exc:
            raise r.error(str(exc), line=1) from None
    if initial is None and states:
        raise r.error("a nonempty automaton needs an initial state", itok)
    return Automaton.build(table, states, initial, marked, trans, activity)


def _event_lines(table: EventTable, bounds=None) -> list[str]:
    out = []
    for e in table.activity_events:
        parts = [e]
        if bounds is not None:
            b = bounds[e]
            parts += [str(b.lower), "inf" if b.upper is None else str(b.upper)]
        parts += [f for f, on in zip(_FLAGS, (e in table.prohibitible, e in table.forcible)) if on]
        out.append(" ".join(parts))
    return out


def _check_label(s: str) -> str:
    if not _NAME.match(s):
        raise ValueError(f"state label {s!r} cannot be written; relabel first")
    return s


def serialize_model(m: ActivityModel | Automaton) -> str:
    """Canonical text for an activity model or automaton."""
    if isinstance(m, ActivityModel):
        lines = ["[kind] activity", "", "[events]", *_event_lines(m.events, m.bounds), "", "[states]"]
        lines += [a + (" marked" if a in m.marked else "") for a in m.activities]
        lines += ["", "[initial]", m.initial, "", "[transitions]"]
        lines += [f"{s} {e} {t}" for s, e, t in m.transitions]
        return "\n".join(lines) + "\n"
    a = m
    lines = ["[kind] automaton", "", "[events]", *_event_lines(a.events), "", "[states]"]
    for q in range(a.n_states):
        parts = [_check_label(a.labels[q])]
        if q in a.marked:
            parts.append("marked")
        if a.activity[q] is not None:
            parts.append("activity=" + _check_label(a.activity[q]))
        lines.append(" ".join(parts))
    lines += ["", "[initial]", "-" if a.initial is None else a.labels[a.initial], "", "[transitions]"]
    lines += [f"{s} {e} {t}" for s, e, t in _ordered(a)]
    return "\n".join(lines) + "\n"


def _ordered(a: Automaton):
    for q in range(a.n_states):
        for e, r in a.succ[q].items():
            yield a.labels[q], a.events.name(e), a.labels[r]


def parse_cover(text: str, source: str | None = None) -> MarkerCover:
    r = _Reader(text, source)
    _, body = r.sections(("cover",))
    if "cover" not in body:
        raise r.error("missing section [cover]", line=1)
    classes = []
    names = set()
    for toks in body["cover"]:
        words = [t.text for t in toks]
        if len(words) < 6 or words[0] != "class" or words[2] != "budget" or words[4] != "activities":
            raise r.error("expected 'class <name> budget <N> activities <a> ...'", toks[0])
        name = _name(r, toks[1], "class")
        if name in names:
            raise r.error(f"duplicate class {name!r}", toks[1])
        names.add(name)
        budget = _int(r, toks[3], "budget")
        if budget < 1:
            raise r.error("budget must be at least one tick", toks[3])
        acts = [_name(r, t, "activity") for t in toks[5:]]
        classes.append(CoverClass(name, frozenset(acts), budget))
    if not classes:
        raise r.error("a cover needs at least one class", line=1)
    return MarkerCover(tuple(classes))


def serialize_cover(cover: MarkerCover) -> str:
    lines = ["[cover]"]
    for c in cover:
        lines.append(f"class {c.name} budget {c.budget} activities {' '.join(sorted(c.activities))}")
    return "\n".join(lines) + "\n"


@dataclass
class Project:
    plant: ActivityModel | Automaton
    specs: list[Automaton] = field(default_factory=list)
    cover: MarkerCover | None = None
    order: str = "lifo"
    verbosity: int = 1
    paths: dict = field(default_factory=dict)


def read_model(path: str | Path) -> ActivityModel | Automaton:
    p = Path(path)
    return parse_model(p.read_text(), str(p))


def read_cover(path: str | Path) -> MarkerCover:
    p = Path(path)
    return parse_cover(p.read_text(), str(p))


def parse_project(text: str, source: str | None = None, base: Path | None = None) -> Project:
    """Parse a project file and load every file it names (relative to ``base``)."""
    r = _Reader(text, source)
    _, body = r.sections(("project",))
    if "project" not in body:
        raise r.error("missing section [project]", line=1)
    base = base or Path(".")
    plant = None
    specs = []
    cover = None
    order = "lifo"
    verbosity = 1
    paths: dict = {"spec": []}
    for toks in body["project"]:
        if len(toks) != 2:
            raise r.error("expected '<key> <value>'", toks[0])
        key, val = toks
        if key.text in ("plant", "spec", "cover"):
            path = base / val.text
            if not path.exists():
                raise r.error(f"no such file {val.text!r}", val)
            if key.text == "cover":
                cover = read_cover(path)
                paths["cover"] = str(path)
            else:
                m = read_model(path)
                if key.text == "plant":
                    if plant is not None:
                        raise r.error("plant given twice", key)
                    plant = m
                    paths["plant"] = str(path)
                else:
                    if not isinstance(m, Automaton):
                        raise r.error("a spec must be an automaton", val)
                    specs.append(m)
                    paths["spec"].append(str(path))
        elif key.text == "order":
            if val.text not in ("lifo", "fifo"):
                raise r.error("order is 'lifo' or 'fifo'", val)
            order = val.text
        elif key.text == "verbosity":
            verbosity = _int(r, val, "verbosity")
        else:
            raise r.error(f"unknown project key {key.text!r}", key)
    if plant is None:
        raise r.error("project names no plant", line=1)
    table = plant.events
    for s, p in zip(specs, paths["spec"]):
        if s.events != table:
            raise AlphabetMismatch(f"{p}: event table differs from the plant's")
    return Project(plant, specs, cover, order, verbosity, paths)


def read_project(path: str | Path) -> Project:
    p = Path(path)
    return parse_project(p.read_text(), str(p), p.parent)
