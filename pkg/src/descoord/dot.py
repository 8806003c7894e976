"""Graphviz DOT export for generators.

Marked states are double-circled, uncontrollable events dashed, and the
initial state gets an arrow from an invisible point. An empty generator
yields a valid empty digraph.
"""
from __future__ import annotations

from .automata import Generator


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace('"', r'\"'))


def to_dot(g: Generator, name: str = "generator") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    if not g.is_empty:
        lines.append("  __init [shape=point label=\"\"];")
        for q in range(g.n_states):
            shape = "doublecircle" if q in g.marked else "circle"
            lines.append(f"  q{q} [shape={shape} label={_quote(str(q))}];")
        lines.append(f"  __init -> q{g.initial};")
        key = g.table.index
        for (q, e), r in sorted(g.transitions.items(), key=lambda it: (it[0][0], key(it[0][1]))):
            style = "" if g.table.is_controllable(e) else " style=dashed"
            lines.append(f"  q{q} -> q{r} [label={_quote(e)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
