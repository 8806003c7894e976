"""Shared builders and hypothesis strategies for the test suite."""
from __future__ import annotations

import hypothesis.strategies as st

from descoord.automata import EventTable, Generator, trim

ABC = EventTable.from_names(["a", "b", "c"], uncontrollable=["c"])


def gen(table, alphabet, words, prefix_closed=False):
    return Generator.from_words(table, alphabet, words, prefix_closed=prefix_closed)


@st.composite
def generators(draw, table=ABC, alphabet=None, max_states=4, allow_empty=True):
    """Random trimmed generator over a fixed small table."""
    alphabet = tuple(alphabet if alphabet is not None else table.names())
    n = draw(st.integers(1, max_states))
    trans = {}
    for q in range(n):
        for e in alphabet:
            target = draw(st.one_of(st.none(), st.integers(0, n - 1)))
            if target is not None:
                trans[(q, e)] = target
    marked = draw(st.sets(st.integers(0, n - 1), min_size=0 if allow_empty else 1))
    g = trim(Generator(table, frozenset(alphabet), n, 0, frozenset(marked), trans))
    if not allow_empty and g.is_empty:
        marked = {n - 1}
        g = trim(Generator(table, frozenset(alphabet), n, 0, frozenset({0}), trans))
    return g


@st.composite
def nonempty_generators(draw, table=ABC, alphabet=None, max_states=4):
    g = draw(generators(table, alphabet, max_states))
    if g.is_empty:
        alphabet = tuple(alphabet if alphabet is not None else table.names())
        g = Generator(table, frozenset(alphabet), 1, 0, frozenset({0}), {})
    return g
