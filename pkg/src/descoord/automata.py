"""Deterministic generators with partial transitions and marked states.

Everything downstream builds on the operations here:

- reachability maintenance: ``trim``, ``is_nonblocking``, ``prefix_closure``
- composition: ``parallel_compose`` (synchronizes shared events,
  interleaves private ones)
- natural projection: ``project`` (erased-event closure, subset
  construction, then minimization)
- canonical forms: ``minimize``
- decision procedures: ``language_equal``, ``language_subset``,
  ``difference_word``
- bounded unrolling: ``enumerate_bounded``, ``event_range``

Languages live over a single global :class:`EventTable` per problem; a
generator's ``alphabet`` is a subset mask of that table. Composition
semantics depend on the masks, not just on which events appear on
transitions. Language comparisons treat a word over a small mask as the
same word over any larger mask.

All values are immutable after construction and every function is a pure
function of its inputs, so the module is safe to use from concurrent
workers without synchronization.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import EventTableMismatch

Word = tuple[str, ...]


@dataclass(frozen=True)
class Event:
    name: str
    controllable: bool


class EventTable:
    """Ordered registry of events with controllability flags.

    A problem has exactly one table. Table order fixes every tie-break in
    the library (witness selection, canonical state numbering), which makes
    all results reproducible. The uncontrollable set is by construction the
    complement of the controllable set.
    """

    __slots__ = ("_events", "_index")

    def __init__(self, events: Iterable[Event | tuple[str, bool]]):
        evs = tuple(e if isinstance(e, Event) else Event(e[0], bool(e[1])) for e in events)
        index: dict[str, int] = {}
        for i, e in enumerate(evs):
            if not e.name:
                raise ValueError("event names must be nonempty")
            if e.name in index:
                raise ValueError(f"duplicate event name: {e.name!r}")
            index[e.name] = i
        self._events = evs
        self._index = index

    @classmethod
    def from_names(cls, names: Iterable[str], uncontrollable: Iterable[str] = ()) -> "EventTable":
        unc = set(uncontrollable)
        return cls((n, n not in unc) for n in names)

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self._events)

    def controllable(self) -> frozenset[str]:
        return frozenset(e.name for e in self._events if e.controllable)

    def uncontrollable(self) -> frozenset[str]:
        return frozenset(e.name for e in self._events if not e.controllable)

    def is_controllable(self, name: str) -> bool:
        return self._events[self._index[name]].controllable

    def index(self, name: str) -> int:
        return self._index[name]

    def ordered(self, names: Iterable[str]) -> list[str]:
        """Sort event names by table order."""
        return sorted(names, key=self._index.__getitem__)

    def word_key(self, word: Word) -> tuple[int, ...]:
        """Sort key for lexicographic comparisons under table order."""
        return tuple(self._index[e] for e in word)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self):
        return iter(self._events)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventTable):
            return NotImplemented
        return self._events == other._events

    def __hash__(self) -> int:
        return hash(self._events)

    def __repr__(self) -> str:
        return f"EventTable({list(self._events)!r})"


@dataclass(frozen=True)
class ProjectionSpec:
    """Target event subset defining a natural projection.

    Events in ``kept`` survive the projection, all others are erased.
    """

    table: EventTable
    kept: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "kept", frozenset(self.kept))
        missing = [e for e in self.kept if e not in self.table]
        if missing:
            raise ValueError(f"kept events not in table: {missing}")

    def erased(self) -> frozenset[str]:
        return frozenset(self.table.names()) - self.kept

    def __call__(self, word: Word) -> Word:
        return tuple(e for e in word if e in self.kept)


def _kept_set(p: "ProjectionSpec | Iterable[str]") -> frozenset[str]:
    if isinstance(p, ProjectionSpec):
        return p.kept
    return frozenset(p)


@dataclass(frozen=True, eq=False)
class Generator:
    """Deterministic generator: partial transition map plus marked states.

    States are dense integers ``0..n_states-1``. The canonical empty
    generator has zero states and ``initial is None``; every operation
    accepts it. ``alphabet`` is the subset of the table this generator
    synchronizes on; it may be strictly larger than the set of events
    appearing on transitions.
    """

    table: EventTable
    alphabet: frozenset[str]
    n_states: int
    initial: Optional[int]
    marked: frozenset[int]
    transitions: Mapping[tuple[int, str], int]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "marked", frozenset(self.marked))
        object.__setattr__(self, "transitions", dict(self.transitions))
        bad = [e for e in self.alphabet if e not in self.table]
        if bad:
            raise ValueError(f"alphabet events not in table: {bad}")
        if self.n_states == 0:
            if self.initial is not None or self.marked or self.transitions:
                raise ValueError("empty generator must have no initial, marked, or transitions")
            return
        if self.initial is None or not (0 <= self.initial < self.n_states):
            raise ValueError("initial state out of range")
        if any(not (0 <= q < self.n_states) for q in self.marked):
            raise ValueError("marked state out of range")
        for (q, e), r in self.transitions.items():
            if not (0 <= q < self.n_states and 0 <= r < self.n_states):
                raise ValueError(f"transition ({q},{e!r})->{r} out of range")
            if e not in self.alphabet:
                raise ValueError(f"transition event {e!r} not in alphabet")

    @classmethod
    def empty(cls, table: EventTable, alphabet: Iterable[str] = ()) -> "Generator":
        return cls(table, frozenset(alphabet), 0, None, frozenset(), {})

    @classmethod
    def from_words(cls, table: EventTable, alphabet: Iterable[str],
                   words: Iterable[Word | Sequence[str]],
                   prefix_closed: bool = False) -> "Generator":
        """Canonical (minimal) generator marking exactly the given finite words.

        With ``prefix_closed`` the whole prefix closure is marked instead.
        """
        alphabet = frozenset(alphabet)
        trans: dict[tuple[int, str], int] = {}
        ends: set[int] = set()
        n = 1
        for w in words:
            w = tuple(w)
            bad = [e for e in w if e not in alphabet]
            if bad:
                raise ValueError(f"word events not in alphabet: {bad}")
            q = 0
            for e in w:
                nxt = trans.get((q, e))
                if nxt is None:
                    nxt = n
                    trans[(q, e)] = nxt
                    n += 1
                q = nxt
            ends.add(q)
        if not ends:
            return cls.empty(table, alphabet)
        marked = frozenset(range(n)) if prefix_closed else frozenset(ends)
        g = cls(table, alphabet, n, 0, marked, trans)
        return minimize(g)

    # -- basic queries -------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.n_states == 0

    def step(self, q: int, e: str) -> Optional[int]:
        return self.transitions.get((q, e))

    def run(self, word: Iterable[str]) -> Optional[int]:
        """State reached by ``word`` from the initial state, or None."""
        q = self.initial
        if q is None:
            return None
        for e in word:
            q = self.transitions.get((q, e))
            if q is None:
                return None
        return q

    def accepts(self, word: Iterable[str]) -> bool:
        q = self.run(word)
        return q is not None and q in self.marked

    def generates(self, word: Iterable[str]) -> bool:
        return self.run(word) is not None

    def used_events(self) -> frozenset[str]:
        return frozenset(e for (_, e) in self.transitions)

    def successors(self, q: int) -> list[tuple[str, int]]:
        """Outgoing transitions of ``q`` in table order."""
        out = [(e, r) for (p, e), r in self.transitions.items() if p == q]
        out.sort(key=lambda er: self.table.index(er[0]))
        return out


def _check_tables(*gens: Generator) -> EventTable:
    table = gens[0].table
    for g in gens[1:]:
        if g.table != table:
            raise EventTableMismatch("generators use different event tables")
    return table


def _succ_lists(g: Generator) -> list[list[tuple[str, int]]]:
    """Per-state successor lists in table order."""
    out: list[list[tuple[str, int]]] = [[] for _ in range(g.n_states)]
    for (q, e), r in g.transitions.items():
        out[q].append((e, r))
    key = g.table.index
    for lst in out:
        lst.sort(key=lambda er: key(er[0]))
    return out


def _reachable(g: Generator) -> list[int]:
    """Reachable states in BFS discovery order (events in table order)."""
    if g.initial is None:
        return []
    succ = _succ_lists(g)
    seen = {g.initial}
    order = [g.initial]
    queue = deque([g.initial])
    while queue:
        q = queue.popleft()
        for _, r in succ[q]:
            if r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
    return order


def _coreachable(g: Generator) -> set[int]:
    pred: dict[int, list[int]] = {}
    for (q, _), r in g.transitions.items():
        pred.setdefault(r, []).append(q)
    seen = set(g.marked)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for p in pred.get(q, ()):
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def _rebuild(g: Generator, keep: Sequence[int]) -> Generator:
    """Restrict to ``keep`` (ordered) and renumber densely in that order."""
    if not keep:
        return Generator.empty(g.table, g.alphabet)
    remap = {q: i for i, q in enumerate(keep)}
    trans = {(remap[q], e): remap[r]
             for (q, e), r in g.transitions.items()
             if q in remap and r in remap}
    marked = frozenset(remap[q] for q in g.marked if q in remap)
    return Generator(g.table, g.alphabet, len(keep), remap.get(g.initial), marked, trans)


def trim(g: Generator) -> Generator:
    """Keep only states both reachable and co-reachable; renumber BFS-first.

    The marked language is unchanged; the generated language shrinks to the
    prefix closure of the marked language. A generator whose initial state
    cannot reach a marked state trims to the canonical empty generator.
    """
    if g.is_empty:
        return g
    co = _coreachable(g)
    keep = [q for q in _reachable(g) if q in co]
    if g.initial not in co:
        return Generator.empty(g.table, g.alphabet)
    return _rebuild(g, keep)


def reachable_part(g: Generator) -> Generator:
    """Keep only reachable states (marking untouched), renumbered BFS-first."""
    if g.is_empty:
        return g
    return _rebuild(g, _reachable(g))


def prefix_closure(g: Generator) -> Generator:
    """Generator whose marked language is the prefix closure of ``L_m(g)``."""
    t = trim(g)
    if t.is_empty:
        return t
    return Generator(t.table, t.alphabet, t.n_states, t.initial,
                     frozenset(range(t.n_states)), t.transitions)


def generated_language(g: Generator) -> Generator:
    """Generator marking the generated language ``L(g)``: reachable part, all marked."""
    r = reachable_part(g)
    if r.is_empty:
        return r
    return Generator(r.table, r.alphabet, r.n_states, r.initial,
                     frozenset(range(r.n_states)), r.transitions)


def lift(g: Generator, extra: Iterable[str]) -> Generator:
    """Extend the alphabet mask; new events self-loop on every state.

    Realizes the inverse projection of the generator's languages into the
    larger alphabet.
    """
    extra = frozenset(extra) - g.alphabet
    if not extra:
        return g
    bad = [e for e in extra if e not in g.table]
    if bad:
        raise ValueError(f"events not in table: {bad}")
    trans = dict(g.transitions)
    for q in range(g.n_states):
        for e in extra:
            trans[(q, e)] = q
    return Generator(g.table, g.alphabet | extra, g.n_states, g.initial, g.marked, trans)


def is_nonblocking(g: Generator) -> bool:
    """True iff every reachable state is co-reachable."""
    if g.is_empty:
        return True
    co = _coreachable(g)
    return all(q in co for q in _reachable(g))


def event_range(g: Generator) -> frozenset[str]:
    """Events appearing on transitions reachable from the initial state."""
    if g.is_empty:
        return frozenset()
    reach = set(_reachable(g))
    return frozenset(e for (q, e) in g.transitions if q in reach)


# -- composition -----------------------------------------------------------


def parallel_compose(*gens: Generator, trim_result: bool = True) -> Generator:
    """Synchronous product: shared events synchronize, private ones interleave.

    Sharing is decided by the alphabet masks. Marked states are tuples of
    marked states. The result is trimmed unless ``trim_result`` is False.
    """
    if not gens:
        raise ValueError("parallel_compose needs at least one generator")
    table = _check_tables(*gens)
    if len(gens) == 1:
        return trim(gens[0]) if trim_result else gens[0]
    result = gens[0]
    for g in gens[1:]:
        result = _compose2(table, result, g, trim_result)
    return result


def _compose2(table: EventTable, g1: Generator, g2: Generator, trim_result: bool) -> Generator:
    alphabet = g1.alphabet | g2.alphabet
    if g1.is_empty or g2.is_empty:
        return Generator.empty(table, alphabet)
    events = table.ordered(alphabet)
    in1 = g1.alphabet
    in2 = g2.alphabet
    start = (g1.initial, g2.initial)
    ids = {start: 0}
    order = [start]
    queue = deque([start])
    trans: dict[tuple[int, str], int] = {}
    while queue:
        pair = queue.popleft()
        p, q = pair
        src = ids[pair]
        for e in events:
            if e in in1 and e in in2:
                np_, nq = g1.step(p, e), g2.step(q, e)
                if np_ is None or nq is None:
                    continue
                nxt = (np_, nq)
            elif e in in1:
                np_ = g1.step(p, e)
                if np_ is None:
                    continue
                nxt = (np_, q)
            else:
                nq = g2.step(q, e)
                if nq is None:
                    continue
                nxt = (p, nq)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            trans[(src, e)] = ids[nxt]
    marked = frozenset(ids[(p, q)] for (p, q) in order
                       if p in g1.marked and q in g2.marked)
    out = Generator(table, alphabet, len(order), 0, marked, trans)
    return trim(out) if trim_result else out


# -- projection ------------------------------------------------------------


def project(g: Generator, p: "ProjectionSpec | Iterable[str]") -> Generator:
    """Deterministic minimal generator for the projected languages.

    Erased events (outside ``kept``) become silent moves; a subset
    construction over their closure determinizes, and the result is
    minimized. The result's alphabet is ``alphabet(g) & kept``.
    """
    kept = _kept_set(p)
    g = trim(g)
    visible = g.alphabet & kept
    if g.is_empty:
        return Generator.empty(g.table, visible)
    erased = g.alphabet - kept

    succ = _succ_lists(g)
    eclose_cache: dict[int, frozenset[int]] = {}

    def eclose_one(q: int) -> frozenset[int]:
        cached = eclose_cache.get(q)
        if cached is not None:
            return cached
        seen = {q}
        stack = [q]
        while stack:
            x = stack.pop()
            for e, r in succ[x]:
                if e in erased and r not in seen:
                    seen.add(r)
                    stack.append(r)
        out = frozenset(seen)
        eclose_cache[q] = out
        return out

    def eclose(states: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for q in states:
            out |= eclose_one(q)
        return frozenset(out)

    events = g.table.ordered(visible)
    start = eclose([g.initial])
    ids = {start: 0}
    order = [start]
    queue = deque([start])
    trans: dict[tuple[int, str], int] = {}
    while queue:
        subset = queue.popleft()
        src = ids[subset]
        for e in events:
            moved = {g.transitions[(q, e)] for q in subset if (q, e) in g.transitions}
            if not moved:
                continue
            nxt = eclose(moved)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            trans[(src, e)] = ids[nxt]
    marked = frozenset(ids[s] for s in order if s & g.marked)
    det = Generator(g.table, visible, len(order), 0, marked, trans)
    return minimize(det)


# -- minimization ----------------------------------------------------------


def minimize(g: Generator) -> Generator:
    """Unique minimal deterministic generator for ``(L(g), L_m(g))``.

    Standard partition refinement over the trimmed generator; partial
    transitions are part of the signature, so the generated language is
    preserved alongside the marked one. The empty language canonicalizes
    to the zero-state generator. States are renumbered in BFS order, so
    two language-equal inputs minimize to structurally identical outputs.
    """
    g = trim(g)
    if g.is_empty:
        return g
    events = g.table.ordered(g.alphabet)
    block = [1 if q in g.marked else 0 for q in range(g.n_states)]
    n_blocks = 2 if g.marked and len(g.marked) < g.n_states else 1
    if n_blocks == 1:
        block = [0] * g.n_states
    while True:
        sigs: dict[tuple, int] = {}
        new_block = [0] * g.n_states
        for q in range(g.n_states):
            sig = (block[q],) + tuple(
                block[g.transitions[(q, e)]] if (q, e) in g.transitions else -1
                for e in events)
            if sig not in sigs:
                sigs[sig] = len(sigs)
            new_block[q] = sigs[sig]
        if len(sigs) == n_blocks:
            break
        n_blocks = len(sigs)
        block = new_block
    # build the quotient, then renumber canonically by BFS from the initial
    q0 = block[g.initial]
    trans = {(block[q], e): block[r] for (q, e), r in g.transitions.items()}
    marked = frozenset(block[q] for q in g.marked)
    quotient = Generator(g.table, g.alphabet, n_blocks, q0, marked, trans)
    return _rebuild(quotient, _reachable(quotient))


# -- language comparisons ---------------------------------------------------


@dataclass(frozen=True)
class LanguageRelation:
    """Outcome of a language comparison, marked and generated separately."""

    marked: bool
    generated: bool

    @property
    def both(self) -> bool:
        return self.marked and self.generated


_DEAD = -1


def _pair_walk(g1: Generator, g2: Generator):
    """BFS over (state of g1, matching state of g2 or DEAD), with access words.

    Words are compared under embedding semantics: a word of ``g1`` is
    matched in ``g2`` iff ``g2``'s transition function follows it, which
    fails immediately on events outside ``g2``'s alphabet. Yields tuples
    ``(q1, q2, word)`` in shortest-first, table-lexicographic order.
    """
    if g1.initial is None:
        return
    start = (g1.initial, g2.initial if g2.initial is not None else _DEAD)
    seen = {start}
    queue = deque([(start, ())])
    succ1 = _succ_lists(g1)
    while queue:
        (q1, q2), word = queue.popleft()
        yield q1, q2, word
        for e, r1 in succ1[q1]:
            if q2 == _DEAD:
                r2 = _DEAD
            else:
                nxt = g2.transitions.get((q2, e)) if e in g2.alphabet else None
                r2 = _DEAD if nxt is None else nxt
            pair = (r1, r2)
            if pair not in seen:
                seen.add(pair)
                queue.append((pair, word + (e,)))


def language_subset(g1: Generator, g2: Generator) -> LanguageRelation:
    """Decide ``L_m(g1) <= L_m(g2)`` and ``L(g1) <= L(g2)``."""
    _check_tables(g1, g2)
    a, b = reachable_part(g1), reachable_part(g2)
    marked = True
    generated = True
    for q1, q2, _ in _pair_walk(a, b):
        if q2 == _DEAD:
            generated = False
        if q1 in a.marked and (q2 == _DEAD or q2 not in b.marked):
            marked = False
        if not marked and not generated:
            break
    return LanguageRelation(marked, generated)


def language_equal(g1: Generator, g2: Generator) -> LanguageRelation:
    """Decide ``L_m(g1) == L_m(g2)`` and ``L(g1) == L(g2)``."""
    fwd = language_subset(g1, g2)
    bwd = language_subset(g2, g1)
    return LanguageRelation(fwd.marked and bwd.marked,
                            fwd.generated and bwd.generated)


def difference_word(g1: Generator, g2: Generator, marked: bool = True) -> Optional[Word]:
    """Shortest (then table-lexicographic least) word of g1's language not in g2's.

    Compares marked languages by default, generated ones otherwise.
    Returns None when the inclusion holds.
    """
    _check_tables(g1, g2)
    a, b = reachable_part(g1), reachable_part(g2)
    for q1, q2, word in _pair_walk(a, b):
        if marked:
            if q1 in a.marked and (q2 == _DEAD or q2 not in b.marked):
                return word
        else:
            if q2 == _DEAD:
                return word
    return None


# -- bounded enumeration -----------------------------------------------------


@dataclass(frozen=True)
class BoundedLanguage:
    """Finite word set together with the length bound used to produce it."""

    words: frozenset[Word]
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(tuple(w) for w in self.words))
        if any(len(w) > self.bound for w in self.words):
            raise ValueError("word longer than the stated bound")

    def __contains__(self, word: Word) -> bool:
        return tuple(word) in self.words

    def __iter__(self):
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)


def enumerate_bounded(g: Generator, bound: int) -> tuple[BoundedLanguage, BoundedLanguage]:
    """(marked words, generated words) up to the bound, by breadth-first unrolling."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    marked: set[Word] = set()
    generated: set[Word] = set()
    if g.initial is None:
        return BoundedLanguage(frozenset(), bound), BoundedLanguage(frozenset(), bound)
    succ = _succ_lists(g)
    queue = deque([(g.initial, ())])
    while queue:
        q, word = queue.popleft()
        generated.add(word)
        if q in g.marked:
            marked.add(word)
        if len(word) == bound:
            continue
        for e, r in succ[q]:
            queue.append((r, word + (e,)))
    return BoundedLanguage(frozenset(marked), bound), BoundedLanguage(frozenset(generated), bound)
