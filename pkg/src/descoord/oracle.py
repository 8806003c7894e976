"""Brute-force bounded-language reference semantics.

Everything here works on plain finite word sets, deliberately sharing no
code with the automaton algorithms, so agreement between the two paths is
meaningful evidence. Instances must be small by contract.

Bound discipline: an oracle answer is only meaningful when the bound
covers every word of the specification and the plant sets are
materialized at least one event deeper than the longest specification
word (continuation checks look one event ahead).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable, Sequence

from .automata import BoundedLanguage, Generator, ProjectionSpec, Word, _kept_set
from .errors import InstanceTooLarge, NotAcyclic

MAX_SUBSET_WORDS = 12


def closure(words: Iterable[Word]) -> frozenset[Word]:
    """All prefixes of the given words (empty set stays empty)."""
    out: set[Word] = set()
    for w in words:
        for i in range(len(w) + 1):
            out.add(w[:i])
    return frozenset(out)


def project_words(words: Iterable[Word], kept: AbstractSet[str]) -> frozenset[Word]:
    return frozenset(tuple(e for e in w if e in kept) for w in words)


def _interleave(w1: Word, w2: Word, shared: AbstractSet[str]) -> set[Word]:
    """All merges of two words agreeing on their shared-event subsequences."""
    results: set[Word] = set()
    stack = [((), w1, w2)]
    while stack:
        prefix, a, b = stack.pop()
        if not a and not b:
            results.add(prefix)
            continue
        if a and b and a[0] == b[0] and a[0] in shared:
            stack.append((prefix + (a[0],), a[1:], b[1:]))
        if a and a[0] not in shared:
            stack.append((prefix + (a[0],), a[1:], b))
        if b and b[0] not in shared:
            stack.append((prefix + (b[0],), a, b[1:]))
        # two different shared events at the front block each other: dead merge
    return results


def sync_words(l1: Iterable[Word], a1: AbstractSet[str],
               l2: Iterable[Word], a2: AbstractSet[str],
               bound: int) -> frozenset[Word]:
    """Synchronous product of two word sets over the given alphabets."""
    shared = frozenset(a1) & frozenset(a2)
    out: set[Word] = set()
    for w1 in l1:
        for w2 in l2:
            for w in _interleave(w1, w2, shared):
                if len(w) <= bound:
                    out.add(w)
    return frozenset(out)


def sync_many(parts: Sequence[tuple[Iterable[Word], AbstractSet[str]]],
              bound: int) -> frozenset[Word]:
    words, alpha = frozenset(tuple(w) for w in parts[0][0]), frozenset(parts[0][1])
    for nxt_words, nxt_alpha in parts[1:]:
        words = sync_words(words, alpha, nxt_words, nxt_alpha, bound)
        alpha = alpha | frozenset(nxt_alpha)
    return words


def is_controllable_words(k: AbstractSet[Word], l: AbstractSet[Word],
                          eu: AbstractSet[str]) -> bool:
    """closure(K) E_u intersect L <= closure(K), on word sets."""
    kbar = closure(k)
    for s in kbar:
        for u in eu:
            if s + (u,) in l and s + (u,) not in kbar:
                return False
    return True


def oracle_supcon(k: BoundedLanguage, l: BoundedLanguage,
                  eu: AbstractSet[str]) -> BoundedLanguage:
    """Supremal controllable sublanguage by iterated word removal.

    The specification is first restricted to plant-executable words (the
    usual convention, matching the product construction), then every word
    with a prefix that has an uncontrollable continuation in L escaping
    the current closure is dropped, until no violation remains. The plant
    set must be prefix-closed and materialized deep enough to contain all
    one-event continuations of K's prefixes.
    """
    lwords = l.words
    current = {w for w in k.words if w in lwords}
    while True:
        kbar = closure(current)
        bad_prefixes = {s for s in kbar for u in eu
                        if s + (u,) in lwords and s + (u,) not in kbar}
        if not bad_prefixes:
            return BoundedLanguage(frozenset(current), k.bound)
        survivors = {w for w in current
                     if not any(w[:i] in bad_prefixes for i in range(len(w) + 1))}
        if survivors == current:
            return BoundedLanguage(frozenset(survivors), k.bound)
        current = survivors


@dataclass(frozen=True)
class OracleInstance:
    """Bounded-language view of a coordination problem.

    ``plants`` holds the generated (prefix-closed) word sets of the
    subsystems; ``plant_alphabets`` their alphabets. ``gk``/``ek`` describe
    the coordinator. All sets must be downward consistent: stored closures
    contain all prefixes.
    """

    spec: frozenset[Word]
    plants: tuple[frozenset[Word], ...]
    plant_alphabets: tuple[frozenset[str], ...]
    gk: frozenset[Word]
    ek: frozenset[str]
    eu: frozenset[str]
    bound: int

    def __post_init__(self):
        for words in self.plants:
            if closure(words) != words:
                raise ValueError("plant word set is not prefix-closed")
        if closure(self.gk) != self.gk:
            raise ValueError("coordinator word set is not prefix-closed")


def is_conditionally_controllable_words(m: AbstractSet[Word],
                                        inst: OracleInstance) -> bool:
    """Conditional-controllability definition evaluated on word sets."""
    pk = project_words(m, inst.ek)
    if not is_controllable_words(pk, inst.gk, inst.eu & inst.ek):
        return False
    pk_closure = closure(pk)
    for plant, ei in zip(inst.plants, inst.plant_alphabets):
        eik = ei | inst.ek
        pik = project_words(m, eik)
        local_plant = sync_words(plant, ei, pk_closure, inst.ek, inst.bound + 1)
        if not is_controllable_words(pik, local_plant, inst.eu & eik):
            return False
    return True


def oracle_supcc(inst: OracleInstance) -> BoundedLanguage:
    """Supremal conditionally controllable sublanguage by subset enumeration.

    Enumerates every subset of the specification, keeps the conditionally
    controllable ones, and returns their union, which is exact because
    conditional controllability is closed under union. Subset enumeration
    (not deflationary word removal) is required: the union is supremal but
    greedy removal need not converge to it.
    """
    words = sorted(inst.spec)
    if len(words) > MAX_SUBSET_WORDS:
        raise InstanceTooLarge(
            f"{len(words)} specification words exceed the {MAX_SUBSET_WORDS}-word contract")
    union: set[Word] = set()
    for mask in range(1 << len(words)):
        subset = frozenset(w for i, w in enumerate(words) if mask >> i & 1)
        if subset <= union and subset:
            continue  # cannot add anything new
        if is_conditionally_controllable_words(subset, inst):
            union |= subset
    return BoundedLanguage(frozenset(union), inst.bound)


def oracle_check_observer_acyclic(g: Generator,
                                  p: "ProjectionSpec | Iterable[str]") -> bool:
    """Observer definition checked by direct enumeration; acyclic inputs only."""
    kept = _kept_set(p)
    marked_words = _finite_marked_language(g)
    sbar = closure(marked_words)
    projected = {tuple(e for e in w if e in kept) for w in marked_words}
    for s in sbar:
        ps = tuple(e for e in s if e in kept)
        for t in projected:
            if t[:len(ps)] != ps:
                continue
            if not any(w[:len(s)] == s and tuple(e for e in w if e in kept) == t
                       for w in marked_words):
                return False
    return True


def _finite_marked_language(g: Generator) -> frozenset[Word]:
    """Marked language of an acyclic generator; NotAcyclic otherwise."""
    from .automata import _reachable, _succ_lists

    if g.is_empty:
        return frozenset()
    reach = _reachable(g)
    succ = _succ_lists(g)
    color: dict[int, int] = {}

    def visit(q: int):
        color[q] = 1
        for _, r in succ[q]:
            c = color.get(r)
            if c == 1:
                raise NotAcyclic("generator has a reachable cycle")
            if c is None:
                visit(r)
        color[q] = 2

    visit(g.initial)
    words: set[Word] = set()
    stack = [(g.initial, ())]
    while stack:
        q, w = stack.pop()
        if q in g.marked:
            words.add(w)
        for e, r in succ[q]:
            stack.append((r, w + (e,)))
    return frozenset(words)
