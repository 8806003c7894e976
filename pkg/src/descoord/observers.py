"""Observer property and local control consistency (LCC) verification.

Both checks run on the pair graph that synchronizes a generator with the
determinized automaton of its own projection: a pair ``(q, d)`` stands for
a word ``s`` with ``q`` the generator state after ``s`` and ``d`` the
class of ``P(s)``. On that graph the observer property reduces to two
local conditions holding at every reachable pair:

- if ``P(s)`` can be completed to a projected marked word with nothing
  visible left (``d`` marked), then ``q`` reaches a marked state through
  erased events only;
- whenever the projection can extend by a visible event, ``q`` can match
  it after some erased prefix.

Pairs reachable through one visible step are themselves subject to the
same conditions, which is what collapses the greatest fixpoint to a
single pass. Correctness is cross-checked against the enumeration oracle
for acyclic generators in the test suite.

LCC runs on the same pair graph with two erased-reachability relations,
one over all erased events and one over erased uncontrollable events.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .automata import (
    Generator,
    ProjectionSpec,
    Word,
    _kept_set,
    _succ_lists,
    generated_language,
    project,
    trim,
)


@dataclass(frozen=True)
class PropertyWitness:
    """Concrete violation of the observer or LCC definition.

    For an observer violation, ``words`` is ``(s, t)``: ``s`` is generated,
    ``t`` is a projected marked word extending ``P(s)``, and no
    continuation of ``s`` projects onto ``t``. For an LCC violation,
    ``words`` is ``(s, u)`` and ``event`` the uncontrollable visible event
    reachable from ``s`` only through the controllable erased path ``u``.
    """

    kind: str
    words: tuple[Word, ...]
    event: Optional[str] = None


@dataclass(frozen=True)
class PropertyVerdict:
    holds: bool
    witness: Optional[PropertyWitness] = None

    def __bool__(self) -> bool:
        return self.holds


def _erased_closures(g: Generator, erased: frozenset[str]) -> list[frozenset[int]]:
    """Forward closure of each state over erased transitions."""
    succ = _succ_lists(g)
    out: list[frozenset[int]] = []
    for q in range(g.n_states):
        seen = {q}
        stack = [q]
        while stack:
            x = stack.pop()
            for e, r in succ[x]:
                if e in erased and r not in seen:
                    seen.add(r)
                    stack.append(r)
        out.append(frozenset(seen))
    return out


def _pair_graph(g: Generator, dfa: Generator, kept: frozenset[str]):
    """Reachable (generator state, projection state) pairs with access words.

    The generator moves on all its events; the deterministic projection
    automaton follows only the kept ones. Pairs come out shortest-first in
    table order.
    """
    pairs: list[tuple[int, int]] = []
    words: list[Word] = []
    if g.initial is None:
        return pairs, words
    succ = _succ_lists(g)
    start = (g.initial, dfa.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (q, d), word = queue.popleft()
        pairs.append((q, d))
        words.append(word)
        for e, r in succ[q]:
            nd = dfa.step(d, e) if e in kept else d
            if nd is None:
                # cannot happen: the dfa tracks the projection of L(g)
                raise AssertionError("projection automaton out of sync")
            nxt = (r, nd)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (e,)))
    return pairs, words


def _shortest_marked_path(dfa: Generator, d: int) -> Word:
    """Shortest continuation from ``d`` to a marked state of a trim DFA."""
    if d in dfa.marked:
        return ()
    succ = _succ_lists(dfa)
    seen = {d}
    queue = deque([(d, ())])
    while queue:
        x, word = queue.popleft()
        for e, r in succ[x]:
            if r in dfa.marked:
                return word + (e,)
            if r not in seen:
                seen.add(r)
                queue.append((r, word + (e,)))
    raise AssertionError("projection automaton is not co-reachable")


def is_observer(g: Generator, p: "ProjectionSpec | Iterable[str]") -> PropertyVerdict:
    """Decide whether the projection is an ``L_m(g)``-observer.

    The input is trimmed first, so the check concerns the marked language
    and its prefix closure.
    """
    kept = _kept_set(p)
    g = trim(g)
    if g.is_empty:
        return PropertyVerdict(True)
    visible = g.alphabet & kept
    erased = g.alphabet - kept
    dfa = project(g, visible)
    eclose = _erased_closures(g, erased)
    silently_marking = [bool(eclose[q] & g.marked) for q in range(g.n_states)]
    pairs, words = _pair_graph(g, dfa, visible)
    proj = ProjectionSpec(g.table, visible)
    dfa_events = g.table.ordered(visible)

    for (q, d), word in zip(pairs, words):
        if d in dfa.marked and not silently_marking[q]:
            return PropertyVerdict(False, PropertyWitness(
                "observer-violation", (word, proj(word))))
        for e in dfa_events:
            if dfa.step(d, e) is None:
                continue
            if not any(g.step(x, e) is not None for x in eclose[q]):
                t = proj(word) + (e,) + _shortest_marked_path(dfa, dfa.step(d, e))
                return PropertyVerdict(False, PropertyWitness(
                    "observer-violation", (word, t)))
    return PropertyVerdict(True)


def extend_for_observer(g: Generator, p: "ProjectionSpec | Iterable[str]") -> ProjectionSpec:
    """Grow the kept set until the projection is an ``L_m(g)``-observer.

    Witness-guided greedy loop: on failure, add the first erased event on
    the shortest path from the violating state to a marked state (smallest
    table index as fallback). Terminates because keeping every event of
    the generator always passes.
    """
    kept = set(_kept_set(p))
    g = trim(g)
    if g.is_empty:
        return ProjectionSpec(g.table, frozenset(kept))
    while True:
        verdict = _first_violation(g, frozenset(kept))
        if verdict is None:
            return ProjectionSpec(g.table, frozenset(kept))
        kept.add(verdict)


def _first_violation(g: Generator, kept: frozenset[str]) -> Optional[str]:
    """Erased event to add next, or None when the observer check passes."""
    visible = g.alphabet & kept
    erased = g.alphabet - kept
    dfa = project(g, visible)
    eclose = _erased_closures(g, erased)
    silently_marking = [bool(eclose[q] & g.marked) for q in range(g.n_states)]
    pairs, _ = _pair_graph(g, dfa, visible)
    dfa_events = g.table.ordered(visible)
    succ = _succ_lists(g)

    def candidate(q: int) -> str:
        # first erased event on a shortest path from q to a marked state
        seen = {q}
        queue = deque([(q, ())])
        while queue:
            x, path = queue.popleft()
            if x in g.marked:
                for e in path:
                    if e in erased:
                        return e
            for e, r in succ[x]:
                if r not in seen:
                    seen.add(r)
                    queue.append((r, path + (e,)))
        used_erased = g.table.ordered(g.used_events() & erased)
        if not used_erased:
            raise AssertionError("observer violated with all used events kept")
        return used_erased[0]

    for (q, d) in pairs:
        if d in dfa.marked and not silently_marking[q]:
            return candidate(q)
        for e in dfa_events:
            if dfa.step(d, e) is None:
                continue
            if not any(g.step(x, e) is not None for x in eclose[q]):
                return candidate(q)
    return None


def is_lcc(g: Generator, p: "ProjectionSpec | Iterable[str]") -> PropertyVerdict:
    """Decide local control consistency of the projection for ``L(g)``.

    ``L(g)`` is the generated (prefix-closed) language of the reachable
    part; marking is ignored. For every word ``s`` and uncontrollable kept
    event ``v`` enabled after ``P(s)`` in the projection: if some erased
    path from ``s`` enables ``v``, some erased path of uncontrollable
    events must as well.
    """
    kept = _kept_set(p)
    g2 = generated_language(g)
    if g2.is_empty:
        return PropertyVerdict(True)
    visible = g2.alphabet & kept
    erased = g2.alphabet - kept
    erased_unc = frozenset(e for e in erased if not g2.table.is_controllable(e))
    dfa = project(g2, visible)
    eclose_all = _erased_closures(g2, erased)
    eclose_unc = _erased_closures(g2, erased_unc)
    pairs, words = _pair_graph(g2, dfa, visible)
    unc_visible = [e for e in g2.table.ordered(visible)
                   if not g2.table.is_controllable(e)]
    for (q, d), word in zip(pairs, words):
        for v in unc_visible:
            if dfa.step(d, v) is None:
                continue
            if any(g2.step(x, v) is not None for x in eclose_unc[q]):
                continue
            path = _enabling_erased_path(g2, q, v, erased)
            if path is not None:
                return PropertyVerdict(False, PropertyWitness(
                    "lcc-violation", (word, path), v))
    return PropertyVerdict(True)


def _enabling_erased_path(g: Generator, q: int, v: str,
                          erased: frozenset[str]) -> Optional[Word]:
    """Shortest erased path from ``q`` after which ``v`` is enabled."""
    succ = _succ_lists(g)
    seen = {q}
    queue = deque([(q, ())])
    while queue:
        x, path = queue.popleft()
        if g.step(x, v) is not None:
            return path
        for e, r in succ[x]:
            if e in erased and r not in seen:
                seen.add(r)
                queue.append((r, path + (e,)))
    return None
