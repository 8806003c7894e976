"""Monolithic supervisory-control primitives.

- ``is_controllable``: no uncontrollable plant continuation escapes the
  specification's prefix closure.
- ``supcon``: supremal controllable sublanguage, computed by the standard
  fixpoint on the product automaton of specification and plant.
- ``is_lm_closed``: marking consistency of a specification against a plant.

The plant side of every check is its generated (prefix-closed) language;
the plant's marking is ignored except by ``is_lm_closed``. Specification
and plant are treated as languages over the same global alphabet: an
event outside the specification's alphabet mask simply never occurs in
its words, so an uncontrollable plant continuation on such an event is an
escape. ``supcon`` consequently intersects the specification with the
plant's generated language, which is the usual convention.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .automata import (
    Generator,
    Word,
    _check_tables,
    _rebuild,
    language_equal,
    prefix_closure,
    reachable_part,
    trim,
)


@dataclass(frozen=True)
class ControllabilityVerdict:
    """Result of a controllability check.

    On failure, ``witness`` is the shortest (then table-lexicographic
    least) pair ``(s, u)`` with ``s`` in the specification closure, ``u``
    uncontrollable, ``su`` in the plant but not in the closure. It replays
    on both automata.
    """

    holds: bool
    witness: Optional[tuple[Word, str]] = None

    def __bool__(self) -> bool:
        return self.holds


def _closure_product_walk(k: Generator, l: Generator):
    """BFS over pairs reached by common words of ``closure(L_m(k))`` and ``L(l)``.

    Yields ``(p, q, word)`` shortest-first in table order. ``k`` must be
    trimmed (so its states represent the prefix closure), ``l`` reachable.
    """
    if k.initial is None or l.initial is None:
        return
    events = k.table.ordered(k.alphabet | l.alphabet)
    start = (k.initial, l.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (p, q), word = queue.popleft()
        yield p, q, word
        for e in events:
            np_ = k.step(p, e) if e in k.alphabet else None
            nq = l.step(q, e) if e in l.alphabet else None
            if np_ is None or nq is None:
                continue
            pair = (np_, nq)
            if pair not in seen:
                seen.add(pair)
                queue.append((pair, word + (e,)))


def is_controllable(k: Generator, l: Generator) -> ControllabilityVerdict:
    """Decide closure(L_m(k)) E_u  intersect  L(l)  <=  closure(L_m(k)).

    Containment of ``L(k)`` in ``L(l)`` is not required; only words in both
    closures can witness a violation.
    """
    _check_tables(k, l)
    kt = trim(k)
    lr = reachable_part(l)
    unc = [e for e in k.table.ordered(lr.alphabet)
           if not k.table.is_controllable(e)]
    for p, q, word in _closure_product_walk(kt, lr):
        for u in unc:
            if lr.step(q, u) is None:
                continue
            if u not in kt.alphabet or kt.step(p, u) is None:
                return ControllabilityVerdict(False, (word, u))
    return ControllabilityVerdict(True)


def supcon(k: Generator, l: Generator) -> Generator:
    """Supremal controllable sublanguage of ``L_m(k)`` wrt ``L(l)``.

    Builds the synchronous product of the trimmed specification and the
    plant, then alternates two prunings until a fixpoint: delete product
    states with an uncontrollable plant continuation leaving the current
    closure, and re-trim so the closure stays the prefix closure of the
    surviving marked language. The empty generator is a valid result.
    """
    _check_tables(k, l)
    kt = trim(k)
    lr = reachable_part(l)
    alphabet = kt.alphabet | lr.alphabet
    if kt.is_empty or lr.is_empty:
        return Generator.empty(k.table, alphabet)

    events = k.table.ordered(alphabet)
    unc = [e for e in k.table.ordered(lr.alphabet)
           if not k.table.is_controllable(e)]

    # product reachable by common words; remember each pair's plant state
    start = (kt.initial, lr.initial)
    ids: dict[tuple[int, int], int] = {start: 0}
    pairs = [start]
    queue = deque([start])
    trans: dict[tuple[int, str], int] = {}
    while queue:
        pair = queue.popleft()
        p, q = pair
        src = ids[pair]
        for e in events:
            np_ = kt.step(p, e) if e in kt.alphabet else None
            nq = lr.step(q, e) if e in lr.alphabet else None
            if np_ is None or nq is None:
                continue
            nxt = (np_, nq)
            if nxt not in ids:
                ids[nxt] = len(pairs)
                pairs.append(nxt)
                queue.append(nxt)
            trans[(src, e)] = ids[nxt]

    marked = {ids[pr] for pr in pairs if pr[0] in kt.marked}
    alive = set(range(len(pairs)))

    def plant_can(s: int, e: str) -> bool:
        return lr.step(pairs[s][1], e) is not None

    while True:
        # delete states where an uncontrollable plant move leaves the closure
        changed = True
        while changed:
            changed = False
            for s in list(alive):
                for u in unc:
                    if not plant_can(s, u):
                        continue
                    t = trans.get((s, u))
                    if t is None or t not in alive:
                        alive.discard(s)
                        changed = True
                        break
        # re-trim: reachable from the start and co-reachable to marked
        if not alive or 0 not in alive:
            return Generator.empty(k.table, alphabet)
        pred: dict[int, list[int]] = {}
        succ_alive: dict[int, list[int]] = {}
        for (s, e), t in trans.items():
            if s in alive and t in alive:
                pred.setdefault(t, []).append(s)
                succ_alive.setdefault(s, []).append(t)
        co = set(m for m in marked if m in alive)
        dq = deque(co)
        while dq:
            s = dq.popleft()
            for pprev in pred.get(s, ()):
                if pprev not in co:
                    co.add(pprev)
                    dq.append(pprev)
        reach = {0} if 0 in co else set()
        dq = deque(reach)
        while dq:
            s = dq.popleft()
            for t in succ_alive.get(s, ()):
                if t in co and t not in reach:
                    reach.add(t)
                    dq.append(t)
        if reach == alive:
            break
        if not reach:
            return Generator.empty(k.table, alphabet)
        alive = reach

    keep = sorted(alive)
    raw = Generator(k.table, alphabet, len(pairs), 0,
                    frozenset(m for m in marked),
                    {(s, e): t for (s, e), t in trans.items()
                     if s in alive and t in alive})
    return _rebuild(raw, keep)


def is_lm_closed(k: Generator, g: Generator) -> bool:
    """Decide ``L_m(k) == closure(L_m(k)) intersect L_m(g)``."""
    _check_tables(k, g)
    inter = _intersect_marked(prefix_closure(k), trim(g))
    return language_equal(trim(k), inter).marked


def _intersect_marked(a: Generator, b: Generator) -> Generator:
    """Generator for ``L_m(a) intersect L_m(b)`` under embedding semantics."""
    table = _check_tables(a, b)
    alphabet = a.alphabet | b.alphabet
    if a.initial is None or b.initial is None:
        return Generator.empty(table, alphabet)
    events = table.ordered(alphabet)
    start = (a.initial, b.initial)
    ids = {start: 0}
    order = [start]
    queue = deque([start])
    trans: dict[tuple[int, str], int] = {}
    while queue:
        pair = queue.popleft()
        p, q = pair
        src = ids[pair]
        for e in events:
            np_ = a.step(p, e) if e in a.alphabet else None
            nq = b.step(q, e) if e in b.alphabet else None
            if np_ is None or nq is None:
                continue
            nxt = (np_, nq)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            trans[(src, e)] = ids[nxt]
    marked = frozenset(ids[(p, q)] for (p, q) in order
                       if p in a.marked and q in b.marked)
    return Generator(table, alphabet, len(order), 0, marked, trans)
