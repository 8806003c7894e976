"""Randomized cross-validation of the automaton algorithms against the oracles.

Instance discipline: oracle comparisons are only meaningful when the
specification language is finite and fits under the bound, so
specification generators are sampled acyclic and plant word sets are
materialized one event deeper than the bound used for the specification.

The timing family for the coverage check builds two cycles of coprime
lengths so the reachable pair graph of the check has size proportional to
the product of the state counts, with no early exit.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .automata import (
    BoundedLanguage,
    EventTable,
    Generator,
    enumerate_bounded,
    generated_language,
    minimize,
    parallel_compose,
    project,
    trim,
)
from .coordination import (
    CoordinationProblem,
    SupCTriplet,
    build_coordinator,
    check_supck_inclusion,
    is_conditionally_controllable,
    supc_triplet,
    supcc_from_triplet,
)
from .nonblocking import nonblocking_coordinator_all, verify_nonblocking
from .observers import extend_for_observer, is_observer
from .oracle import OracleInstance, oracle_check_observer_acyclic, oracle_supcc, oracle_supcon
from .supervisory import is_controllable, supcon


def random_generator(rng: random.Random, table: EventTable,
                     alphabet: Sequence[str], max_states: int = 5,
                     density: float = 0.45, acyclic: bool = False) -> Generator:
    """Random trimmed generator over the alphabet; may come out empty."""
    n = rng.randint(1, max_states)
    trans: dict[tuple[int, str], int] = {}
    for q in range(n):
        for e in alphabet:
            if rng.random() >= density:
                continue
            if acyclic:
                if q + 1 >= n:
                    continue
                trans[(q, e)] = rng.randint(q + 1, n - 1)
            else:
                trans[(q, e)] = rng.randrange(n)
    marked = frozenset(q for q in range(n) if rng.random() < 0.5) or frozenset({n - 1})
    return trim(Generator(table, frozenset(alphabet), n, 0, marked, trans))


def random_table(rng: random.Random, max_events: int = 4,
                 uncontrollable_p: float = 0.4) -> EventTable:
    names = ["a", "b", "c", "d", "e"][: rng.randint(2, max_events)]
    unc = [n for n in names if rng.random() < uncontrollable_p]
    return EventTable.from_names(names, uncontrollable=unc)


# -- supcon vs oracle ---------------------------------------------------------


def supcon_case(rng: random.Random, bound: int = 6) -> bool:
    """One random comparison; True when the two paths agree."""
    table = random_table(rng)
    alphabet = table.names()
    k = random_generator(rng, table, alphabet, max_states=5, acyclic=True)
    l = random_generator(rng, table, alphabet, max_states=5)
    result = supcon(k, l)
    spec_words, _ = enumerate_bounded(trim(k), bound)
    _, plant_words = enumerate_bounded(l, bound)
    want = oracle_supcon(BoundedLanguage(spec_words.words, bound),
                         BoundedLanguage(plant_words.words, bound),
                         table.uncontrollable())
    got, _ = enumerate_bounded(result, bound)
    return got.words == want.words


def run_supcon_harness(seed: int, instances: int, bound: int = 6) -> int:
    rng = random.Random(seed)
    return sum(0 if supcon_case(rng, bound) else 1 for _ in range(instances))


# -- coordination problems ----------------------------------------------------


@dataclass
class TripletCase:
    problem: CoordinationProblem
    triplet: SupCTriplet
    coverage: tuple[bool, ...]
    bound: int


def random_problem(rng: random.Random, bound: int = 5,
                   max_spec_words: int = 6,
                   all_controllable_p: float = 0.3) -> Optional[CoordinationProblem]:
    """Random two-subsystem problem with an acyclic specification.

    Returns None when sampling degenerates (empty plant product). The
    specification is a random subset of the composed plants' short marked
    words, which keeps it inside the plant by construction.
    """
    all_controllable = rng.random() < all_controllable_p
    shared = ["s"]
    e1 = ["p", "s"] + (["q"] if rng.random() < 0.5 else [])
    e2 = ["x", "s"] + (["y"] if rng.random() < 0.5 else [])
    names = sorted(set(e1) | set(e2))
    unc = [] if all_controllable else [n for n in names if rng.random() < 0.4]
    table = EventTable.from_names(names, uncontrollable=unc)
    g1 = random_generator(rng, table, e1, max_states=3)
    g2 = random_generator(rng, table, e2, max_states=3)
    if g1.is_empty or g2.is_empty:
        return None
    product = parallel_compose(g1, g2)
    if product.is_empty:
        return None
    marked, _ = enumerate_bounded(product, bound - 1)
    words = sorted(marked.words)
    if not words:
        return None
    count = rng.randint(1, min(max_spec_words, len(words)))
    chosen = rng.sample(words, count)
    spec = Generator.from_words(table, g1.alphabet | g2.alphabet, chosen)
    return CoordinationProblem(table, (g1, g2), spec, frozenset(shared))


def triplet_case(rng: random.Random, bound: int = 5) -> Optional[TripletCase]:
    problem = random_problem(rng, bound)
    if problem is None:
        return None
    ek, gk = build_coordinator(problem)
    problem = problem.with_coordinator(ek, gk)
    triplet = supc_triplet(problem)  # asserts the projection-containment lemma
    return TripletCase(problem, triplet, check_supck_inclusion(triplet), bound)


def oracle_instance(case: TripletCase) -> OracleInstance:
    problem, bound = case.problem, case.bound
    spec_words, _ = enumerate_bounded(trim(problem.spec), bound)
    plants = []
    for g in problem.plants:
        _, gen = enumerate_bounded(g, bound + 1)
        plants.append(gen.words)
    _, gk_words = enumerate_bounded(problem.gk, bound + 1)
    return OracleInstance(
        spec=spec_words.words,
        plants=tuple(plants),
        plant_alphabets=tuple(g.alphabet for g in problem.plants),
        gk=gk_words.words,
        ek=problem.ek,
        eu=problem.table.uncontrollable(),
        bound=bound,
    )


@dataclass
class TripletHarnessResult:
    instances: int
    covered: int
    supcc_mismatches: int
    cc_passing: int
    controllability_violations: int
    lemma_violations: int


def run_triplet_harness(seed: int, instances: int, bound: int = 5,
                        need_covered: int = 0) -> TripletHarnessResult:
    """Cross-validate the triplet route on random problems.

    Checks, per instance: the projection-containment lemma (hard), the
    composed-triplet language against the subset-enumeration oracle when
    coverage holds, and monolithic controllability of conditionally
    controllable specifications. Keeps sampling past ``instances`` until
    ``need_covered`` coverage-holding cases were seen.
    """
    rng = random.Random(seed)
    produced = covered = mismatches = cc_passing = violations = lemma_bad = 0
    attempts = 0
    while produced < instances or covered < need_covered:
        attempts += 1
        if attempts > 50 * (instances + need_covered + 1):
            break
        try:
            case = triplet_case(rng, bound)
        except AssertionError:
            lemma_bad += 1
            produced += 1
            continue
        if case is None:
            continue
        produced += 1
        if all(case.coverage):
            covered += 1
            supremal = supcc_from_triplet(case.problem, case.triplet)
            got, _ = enumerate_bounded(supremal, bound)
            want = oracle_supcc(oracle_instance(case))
            if got.words != want.words:
                mismatches += 1
        cc = is_conditionally_controllable(case.problem)
        if all(v.holds for v in cc.values()):
            cc_passing += 1
            plant_lang = generated_language(parallel_compose(
                *case.problem.plants, case.problem.gk, trim_result=False))
            if not is_controllable(case.problem.spec, plant_lang).holds:
                violations += 1
    return TripletHarnessResult(produced, covered, mismatches, cc_passing,
                                violations, lemma_bad)


# -- observer property --------------------------------------------------------


@dataclass
class ObserverHarnessResult:
    instances: int
    passing: int
    oracle_mismatches: int
    state_bound_violations: int


def run_observer_harness(seed: int, instances: int) -> ObserverHarnessResult:
    """Check is_observer against the acyclic oracle and the state bound.

    Every instance is compared with the enumeration oracle (acyclic
    generators only); passing instances, including ones made to pass via
    the observer extension, are checked against the projected-state bound.
    """
    rng = random.Random(seed)
    produced = passing = mismatches = bound_bad = 0
    while produced < instances:
        table = random_table(rng, max_events=4, uncontrollable_p=0.3)
        g = random_generator(rng, table, table.names(), max_states=6, acyclic=True)
        if g.is_empty:
            continue
        produced += 1
        kept = frozenset(e for e in table.names() if rng.random() < 0.5)
        verdict = is_observer(g, kept)
        if verdict.holds != oracle_check_observer_acyclic(g, kept):
            mismatches += 1
        if not verdict.holds:
            kept = extend_for_observer(g, kept).kept
            if not is_observer(g, kept).holds:
                mismatches += 1
                continue
        passing += 1
        if minimize(project(g, kept)).n_states > g.n_states:
            bound_bad += 1
    return ObserverHarnessResult(produced, passing, mismatches, bound_bad)


# -- nonblocking coordinator ---------------------------------------------------


def run_nonblocking_harness(seed: int, instances: int) -> int:
    """Build coordinators satisfying the composition theorem; count failures."""
    rng = random.Random(seed)
    failures = 0
    produced = 0
    while produced < instances:
        table = EventTable.from_names(["m", "n", "s", "t"],
                                      uncontrollable=["n"] if rng.random() < 0.5 else [])
        l1 = random_generator(rng, table, ["m", "s", "t"], max_states=4)
        l2 = random_generator(rng, table, ["n", "s", "t"], max_states=4)
        if l1.is_empty or l2.is_empty:
            continue
        produced += 1
        ek, coordinator = nonblocking_coordinator_all((l1, l2), {"s", "t"})
        if not verify_nonblocking(l1, l2, coordinator, ek):
            failures += 1
    return failures


# -- coverage-check timing family ----------------------------------------------


def coverage_timing_case(m: int) -> SupCTriplet:
    """Triplet whose coverage check explores ~(2m)(m+1) pairs with no early exit.

    The local part is a cycle alternating a visible and an erased event
    (2m states); the coordinator part is an all-marked visible cycle of
    m+1 states. Consecutive lengths are coprime, so the product walks the
    full torus, and both languages project to the same full visible
    behavior, so the check returns True only after seeing everything.
    """
    table = EventTable.from_names(["v", "t"])
    n_local = 2 * m
    local_trans: dict[tuple[int, str], int] = {}
    for i in range(0, n_local, 2):
        local_trans[(i, "v")] = i + 1
        local_trans[(i + 1, "t")] = (i + 2) % n_local
    local = Generator(table, frozenset({"v", "t"}), n_local, 0,
                      frozenset(range(n_local)), local_trans)
    n_coord = m + 1
    coord = Generator(table, frozenset({"v"}), n_coord, 0,
                      frozenset(range(n_coord)),
                      {(i, "v"): (i + 1) % n_coord for i in range(n_coord)})
    return SupCTriplet(coord, (local,), frozenset({"v"}))


def time_coverage_check(m: int, repeats: int = 3) -> tuple[int, float]:
    """(pair-graph size proxy n*n_i, best-of-N wall time) for one family size."""
    triplet = coverage_timing_case(m)
    size = triplet.supc_k.n_states * triplet.supc_ik[0].n_states
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        ok = check_supck_inclusion(triplet)
        elapsed = time.perf_counter() - start
        if not all(ok):
            raise AssertionError("timing family must satisfy the inclusion")
        best = min(best, elapsed)
    return size, best


def fitted_exponent(sizes: Sequence[int], times: Sequence[float]) -> float:
    """Least-squares slope of log(time) against log(size)."""
    import math

    xs = [math.log(s) for s in sizes]
    ys = [math.log(t) for t in times]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


# -- the combined harness used by the CLI and the service -----------------------


def run_harness(seed: int, instances: int, bound: int = 6) -> dict[str, int]:
    """Cross-validation summary; 'mismatches' is the grand total."""
    supcon_bad = run_supcon_harness(seed, instances, bound)
    triplet = run_triplet_harness(seed + 1, max(instances // 4, 5), bound=5)
    observer = run_observer_harness(seed + 2, max(instances // 4, 5))
    nonblocking_bad = run_nonblocking_harness(seed + 3, max(instances // 8, 3))
    detail = {
        "supcon_mismatches": supcon_bad,
        "triplet_instances": triplet.instances,
        "triplet_covered": triplet.covered,
        "supcc_mismatches": triplet.supcc_mismatches,
        "controllability_violations": triplet.controllability_violations,
        "lemma_violations": triplet.lemma_violations,
        "observer_instances": observer.instances,
        "observer_mismatches": observer.oracle_mismatches,
        "state_bound_violations": observer.state_bound_violations,
        "nonblocking_failures": nonblocking_bad,
    }
    detail["mismatches"] = (supcon_bad + triplet.supcc_mismatches
                            + triplet.controllability_violations
                            + triplet.lemma_violations
                            + observer.oracle_mismatches
                            + observer.state_bound_violations
                            + nonblocking_bad)
    return detail
