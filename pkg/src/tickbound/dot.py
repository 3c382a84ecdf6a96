"""Graphviz export."""
from __future__ import annotations

from .automaton import Automaton


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(a: Automaton, name: str = "G") -> str:
    """DOT digraph: marked states double-circled, tick edges dashed and grey.

    Counter states are labelled ``(x,d)`` as produced by the synthesis.
    Output depends only on the automaton, so it is byte-stable.
    """
    lines = [f"digraph {_quote(name)} {{"]
    if a.is_empty():
        lines.append("}")
        return "\n".join(lines) + "\n"
    lines.append("  rankdir=LR;")
    lines.append('  node [shape=circle, fontname="Helvetica"];')
    lines.append("  __start [shape=point, label=\"\"];")
    for q in range(a.n_states):
        shape = "doublecircle" if q in a.marked else "circle"
        lines.append(f"  q{q} [label={_quote(a.labels[q])}, shape={shape}];")
    lines.append(f"  __start -> q{a.initial};")
    tick = a.events.tick
    for q in range(a.n_states):
        for e, r in a.succ[q].items():
            style = ', style=dashed, color="gray50"' if e == tick else ""
            lines.append(f"  q{q} -> q{r} [label={_quote(a.events.name(e))}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def tick_edges(dot_text: str) -> int:
    """Count tick-styled edges in DOT text produced by :func:`export_dot`."""
    return sum(1 for line in dot_text.splitlines() if "->" in line and "style=dashed" in line)
