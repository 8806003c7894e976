"""Coordinator for nonblockingness.

After local synthesis the two (or more) local supervisors may conflict:
each is nonblocking on its own but their composition can deadlock. A
small coordinator over the shared alphabet resolves this whenever the
projection is an observer for every local supervisor language: composing
the projections yields a language whose closure chain matches the
composition's, so adding the coordinator keeps the system nonblocking.

The construction extends the coordinator alphabet with the witness-guided
observer extension until the observer property holds for every
supervisor, then emits the minimal nonblocking generator of the composed
projections. Supervisors themselves are left untouched; only the
coordinator alphabet is refined.
"""
from __future__ import annotations

from typing import AbstractSet, Iterable, Sequence

from .automata import (
    Generator,
    ProjectionSpec,
    _kept_set,
    language_equal,
    minimize,
    parallel_compose,
    prefix_closure,
    project,
    trim,
)
from .errors import ObserverPreconditionFailed, PreconditionFailed
from .observers import extend_for_observer, is_observer


def nonblocking_coordinator(supc_1k: Generator, supc_2k: Generator,
                            ek: AbstractSet[str]) -> tuple[frozenset[str], Generator]:
    """Nonblocking coordinator for two local supervisors.

    Returns the refined coordinator alphabet and the minimal nonblocking
    generator of the composed supervisor projections.
    """
    return nonblocking_coordinator_all((supc_1k, supc_2k), ek)


def nonblocking_coordinator_all(supervisors: Sequence[Generator],
                                ek: AbstractSet[str]) -> tuple[frozenset[str], Generator]:
    """N-ary variant used by the pipeline; pairwise reasoning lifts because
    the observer property is preserved under composition over a shared
    alphabet contained in the kept set."""
    ek = set(_kept_set(ek) if isinstance(ek, ProjectionSpec) else frozenset(ek))
    sups = [trim(s) for s in supervisors]
    changed = True
    while changed:
        changed = False
        for s in sups:
            bigger = extend_for_observer(s, frozenset(ek)).kept
            if not bigger <= ek:
                ek |= bigger
                changed = True
    final = frozenset(ek)
    parts = [project(s, final) for s in sups]
    coordinator = minimize(parallel_compose(*parts))
    return final, coordinator


def verify_nonblocking(l1: Generator, l2: Generator, c: Generator,
                       p: "ProjectionSpec | Iterable[str]") -> bool:
    """Check the nonblocking composition theorem on concrete generators.

    Preconditions (violations raise, they are not verdicts): the kept set
    contains the shared alphabet, the projection is an observer for both
    languages, and the coordinator marks exactly the composition of the
    projections. Then the closure of the three-way composition must equal
    the composition of the closures; the theorem predicts True whenever
    the preconditions hold.
    """
    kept = _kept_set(p)
    if not (l1.alphabet & l2.alphabet) <= kept:
        raise PreconditionFailed("shared-alphabet-kept")
    for name, g in (("first language", l1), ("second language", l2)):
        obs = is_observer(g, kept)
        if not obs.holds:
            raise ObserverPreconditionFailed(name, obs.witness)
    expected = parallel_compose(project(l1, kept), project(l2, kept))
    if not language_equal(trim(c), expected).marked:
        raise PreconditionFailed("coordinator-is-composed-projection")
    lhs = prefix_closure(parallel_compose(l1, l2, c))
    rhs = parallel_compose(prefix_closure(l1), prefix_closure(l2), prefix_closure(c))
    return language_equal(lhs, rhs).marked
