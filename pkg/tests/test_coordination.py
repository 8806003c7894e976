"""Coordinator construction, conditional conditions, triplet, synthesis."""

import random

import pytest

from descoord import corpus
from descoord.automata import (
    EventTable,
    Generator,
    enumerate_bounded,
    generated_language,
    language_equal,
    language_subset,
    minimize,
    parallel_compose,
    prefix_closure,
    project,
    trim,
)
from descoord.coordination import (
    CoordinationProblem,
    Status,
    build_coordinator,
    check_supck_inclusion,
    extend_alphabet_cd,
    is_conditionally_closed,
    is_conditionally_controllable,
    is_conditionally_decomposable,
    is_conditionally_independent,
    supc_triplet,
    supcc_from_triplet,
    synthesize_supervisors,
    prefix_closed_supcc,
    verify_global_optimality,
)
from descoord.errors import PreconditionFailed, SpecNotInPlant
from descoord.harness import random_problem, triplet_case
from descoord.pipeline import run_pipeline
from descoord.supervisory import supcon

from helpers import gen


def words(g, bound=6):
    return enumerate_bounded(g, bound)[0].words


# -- conditional independence ---------------------------------------------------


def test_independence_disjoint_alphabets():
    t = EventTable.from_names(["a", "b", "k"])
    g1 = gen(t, {"a"}, [("a",)])
    g2 = gen(t, {"b"}, [("b",)])
    gk = gen(t, {"k"}, [("k",)])
    assert is_conditionally_independent(g1, g2, gk)


def test_independence_shared_event_through_coordinator():
    t = EventTable.from_names(["a1", "a2", "a"])
    g1 = gen(t, {"a1", "a"}, [("a1", "a")])
    g2 = gen(t, {"a2", "a"}, [("a2", "a")])
    sees_a = gen(t, {"a"}, [("a",)])
    silent = gen(t, {"a"}, [()])
    assert is_conditionally_independent(g1, g2, sees_a)
    assert not is_conditionally_independent(g1, g2, silent)


# -- conditional decomposability --------------------------------------------------


def interleaving_problem():
    return corpus.interleaving().problem


def test_decomposability_interleaving_example():
    p = interleaving_problem()
    alphabets = [g.alphabet for g in p.plants]
    assert is_conditionally_decomposable(p.spec, alphabets, p.ek).holds
    closed = is_conditionally_decomposable(p.spec, alphabets, p.ek, closed=True)
    assert not closed.holds
    assert closed.witness == ("a1", "b2")


def test_decomposability_chain_example():
    bundle = corpus.interleaving()
    chain = bundle.automata["chain"]
    alphabets = [{"a", "c"}, {"b", "c"}]
    assert not is_conditionally_decomposable(chain, alphabets, {"c"}).holds
    assert is_conditionally_decomposable(chain, alphabets, {"c"}, closed=True).holds


def test_decomposability_trivial_full_coordinator():
    p = interleaving_problem()
    full = frozenset(p.table.names())
    alphabets = [g.alphabet for g in p.plants]
    assert is_conditionally_decomposable(p.spec, alphabets, full).holds
    assert is_conditionally_decomposable(p.spec, alphabets, full, closed=True).holds


def test_extension_fixpoint_when_already_decomposable():
    p = interleaving_problem()
    alphabets = [g.alphabet for g in p.plants]
    full = frozenset(p.table.names())
    assert extend_alphabet_cd(p.spec, alphabets, full) == full


def test_extension_reaches_decomposable_superset():
    p = interleaving_problem()
    alphabets = [g.alphabet for g in p.plants]
    ek = extend_alphabet_cd(p.spec, alphabets, p.ek)
    assert ek >= p.ek
    assert is_conditionally_decomposable(p.spec, alphabets, ek).holds
    assert is_conditionally_decomposable(p.spec, alphabets, ek, closed=True).holds


# -- coordinator construction -----------------------------------------------------


def test_build_coordinator_interleaving():
    p = interleaving_problem()
    ek, gk = build_coordinator(p)
    assert ek >= {"a", "b"}
    # the marked spec is decomposable already at the shared alphabet
    assert is_conditionally_decomposable(
        p.spec, [g.alphabet for g in p.plants], frozenset({"a", "b"})).holds
    assert not gk.is_empty


def test_build_coordinator_database_reaches_access_events():
    p = corpus.database().problem
    ek, gk = build_coordinator(p)
    assert ek >= {"a1", "a2", "a3"}
    assert language_equal(gk, parallel_compose(
        *[project(g, ek) for g in p.plants])).marked


def test_build_coordinator_identical_plants_full_alphabet():
    t = EventTable.from_names(["a", "b"])
    g = gen(t, {"a", "b"}, [("a", "b")])
    p = CoordinationProblem(t, (g, g), g)
    ek, gk = build_coordinator(p)
    assert ek == {"a", "b"}
    assert language_equal(gk, parallel_compose(g, g)).marked


def test_build_coordinator_step2b_gives_observers():
    p = corpus.database().problem
    ek, gk = build_coordinator(p, step2b=True)
    from descoord.observers import is_observer

    for g in p.plants:
        assert is_observer(generated_language(g), ek).holds


# -- conditional controllability / closedness ---------------------------------------


def test_cond_controllable_fails_at_coordinator():
    p = corpus.uncontrollable_merge().problem
    verdicts = is_conditionally_controllable(p)
    assert not verdicts["coordinator"].holds
    assert verdicts["coordinator"].witness == ((), "u")


def test_cond_controllable_trivial_without_uncontrollables():
    p = corpus.closedness_gap().problem
    verdicts = is_conditionally_controllable(p)
    assert all(v.holds for v in verdicts.values())


def test_cond_closed_spec_example():
    p = corpus.closedness_gap().problem
    verdicts = is_conditionally_closed(p)
    assert not verdicts["coordinator"].holds
    assert verdicts["subsystem-1"].holds and verdicts["subsystem-2"].holds


def test_cond_closed_all_prefix_closed():
    p = corpus.database_prefix_closed().problem
    ek, gk = build_coordinator(p)
    verdicts = is_conditionally_closed(p.with_coordinator(ek, gk))
    assert all(v.holds for v in verdicts.values())


# -- triplet and supremal -----------------------------------------------------------


def test_triplet_trivial_when_projections_controllable():
    p = corpus.database().problem
    ek, gk = build_coordinator(p)
    p = p.with_coordinator(ek, gk)
    triplet = supc_triplet(p)
    assert language_equal(triplet.supc_k, project(p.spec, ek)).marked
    for i in range(p.n):
        assert language_equal(
            triplet.supc_ik[i], project(p.spec, p.local_alphabet(i))).marked


def test_triplet_coordinator_part_empty_example():
    p = corpus.uncontrollable_merge().problem
    triplet = supc_triplet(p)
    assert triplet.supc_k.is_empty
    assert all(s.is_empty for s in triplet.supc_ik)


def test_coverage_empty_coordinator_part_is_true():
    p = corpus.uncontrollable_merge().problem
    triplet = supc_triplet(p)
    assert check_supck_inclusion(triplet) == (True, True)


def test_coverage_counterexample_and_shape():
    p = corpus.inclusion_gap().problem
    ek, gk = build_coordinator(p)
    p = p.with_coordinator(ek, gk)
    triplet = supc_triplet(p)
    assert words(triplet.supc_k) == {(), ("a1",), ("a2",),
                                     ("a1", "a2"), ("a2", "a1")}
    assert words(project(triplet.supc_ik[0], ek)) == {(), ("a2",), ("a2", "a1")}
    assert check_supck_inclusion(triplet) == (False, False)
    with pytest.raises(PreconditionFailed):
        supcc_from_triplet(p, triplet)


def test_coverage_fails_despite_observer_and_lcc():
    # the observer and LCC properties do not imply the coverage condition
    from descoord.observers import is_lcc, is_observer

    p = corpus.inclusion_gap().problem
    plant = generated_language(parallel_compose(*p.plants, trim_result=False))
    for kept in [p.ek, *(g.alphabet | p.ek for g in p.plants)]:
        assert is_observer(plant, kept).holds
        assert is_lcc(plant, kept).holds


def test_coverage_database_holds_and_optimal():
    p = corpus.database().problem
    ek, gk = build_coordinator(p)
    p = p.with_coordinator(ek, gk)
    triplet = supc_triplet(p)
    assert check_supck_inclusion(triplet) == (True, True, True)
    supremal = supcc_from_triplet(p, triplet)
    plant = generated_language(parallel_compose(*p.plants, gk, trim_result=False))
    assert language_equal(supremal, supcon(p.spec, plant)).marked
    for s in triplet.supc_ik:
        assert minimize(s).n_states == 3


def test_supcc_empty_spec():
    t = EventTable.from_names(["a", "b"])
    g1 = gen(t, {"a"}, [("a",)], prefix_closed=True)
    g2 = gen(t, {"b"}, [("b",)], prefix_closed=True)
    p = CoordinationProblem(t, (g1, g2), Generator.empty(t, {"a", "b"}))
    ek, gk = build_coordinator(p)
    p = p.with_coordinator(ek, gk)
    assert supcc_from_triplet(p).is_empty


def test_triplet_lemma_holds_on_random_instances():
    rng = random.Random(31)
    produced = 0
    while produced < 40:
        case = triplet_case(rng)  # the triplet constructor asserts the lemma
        if case is None:
            continue
        produced += 1
        for s in case.triplet.supc_ik:
            assert language_subset(project(s, case.problem.ek),
                                   case.triplet.supc_k).marked


def test_conditionally_controllable_spec_is_controllable():
    # conditionally controllable + decomposable implies monolithic controllability
    rng = random.Random(37)
    confirmed = 0
    while confirmed < 15:
        case = triplet_case(rng)
        if case is None:
            continue
        p = case.problem
        cc = is_conditionally_controllable(p)
        if not all(v.holds for v in cc.values()):
            continue
        confirmed += 1
        plant = generated_language(
            parallel_compose(*p.plants, p.gk, trim_result=False))
        from descoord.supervisory import is_controllable

        assert is_controllable(p.spec, plant).holds


def test_observer_lcc_sufficiency_for_conditional_controllability():
    # prefix-closed controllable specs are conditionally controllable when
    # every projection is an observer of and LCC for the composed plant
    rng = random.Random(43)
    confirmed = 0
    attempts = 0
    while confirmed < 10 and attempts < 4000:
        attempts += 1
        p = random_problem(rng)
        if p is None:
            continue
        ek, gk = build_coordinator(p)
        p = p.with_coordinator(ek, gk)
        from descoord.observers import is_lcc, is_observer

        plant_lang = generated_language(
            parallel_compose(*p.plants, gk, trim_result=False))
        kept_sets = [ek] + [p.local_alphabet(i) for i in range(p.n)]
        if not all(is_observer(plant_lang, kept).holds
                   and is_lcc(plant_lang, kept).holds for kept in kept_sets):
            continue
        spec = supcon(prefix_closure(p.spec), plant_lang)
        if spec.is_empty:
            continue
        alphabets = [g.alphabet for g in p.plants]
        if not is_conditionally_decomposable(spec, alphabets, ek).holds:
            continue
        problem = CoordinationProblem(p.table, p.plants, spec, ek, gk)
        confirmed += 1
        cc = is_conditionally_controllable(problem)
        assert all(v.holds for v in cc.values()), cc
    assert confirmed >= 10


def test_compose_with_factored_plant_stays_decomposable():
    # K decomposable and L = L1 || L2 || Lk factored over the same alphabets
    rng = random.Random(41)
    confirmed = 0
    while confirmed < 15:
        p = random_problem(rng)
        if p is None:
            continue
        ek, gk = build_coordinator(p)
        p = p.with_coordinator(ek, gk)
        alphabets = [g.alphabet for g in p.plants]
        combined = trim(parallel_compose(p.spec, *p.plants, gk))
        if combined.is_empty:
            continue
        confirmed += 1
        assert is_conditionally_decomposable(combined, alphabets, ek).holds


# -- synthesis ------------------------------------------------------------------------


def test_synthesize_database_after_replacing_spec_by_supremal():
    p = corpus.database().problem
    ek, gk = build_coordinator(p)
    p = p.with_coordinator(ek, gk)
    supremal = supcc_from_triplet(p)
    from dataclasses import replace

    report = synthesize_supervisors(replace(p, spec=supremal))
    assert report.supervisors is not None
    assert report.verdicts["closed-loop-marked"].holds
    assert language_equal(report.composed, supremal).marked


def test_synthesize_closedness_gap_names_condition():
    p = corpus.closedness_gap().problem
    report = synthesize_supervisors(p)
    assert report.supervisors is None
    assert report.verdicts["cond-closed:coordinator"].status is Status.FAILS


def test_synthesize_trivial_full_spec():
    t = EventTable.from_names(["a", "b", "s"])
    g1 = gen(t, {"a", "s"}, [("a", "s")], prefix_closed=True)
    g2 = gen(t, {"b", "s"}, [("b", "s")], prefix_closed=True)
    p = CoordinationProblem(t, (g1, g2), Generator.empty(t))
    ek, gk = build_coordinator(p)
    spec = parallel_compose(g1, g2, gk)
    p = CoordinationProblem(t, (g1, g2), spec, ek, gk)
    report = synthesize_supervisors(p)
    assert report.supervisors is not None
    assert report.verdicts["closed-loop-marked"].holds


def test_synthesize_rejects_spec_outside_plant():
    t = EventTable.from_names(["a", "b"])
    g1 = gen(t, {"a"}, [("a",)])
    g2 = gen(t, {"b"}, [("b",)])
    stray = gen(t, {"a", "b"}, [("a", "a")])
    p = CoordinationProblem(t, (g1, g2), stray)
    ek, gk = build_coordinator(p)
    with pytest.raises(SpecNotInPlant):
        synthesize_supervisors(p.with_coordinator(ek, gk))


# -- prefix-closed route ----------------------------------------------------------------


def test_prefix_closed_route_on_database_variant():
    p = corpus.database_prefix_closed().problem
    ek, gk = build_coordinator(p)
    p = p.with_coordinator(ek, gk)
    supremal = prefix_closed_supcc(p)
    cc = is_conditionally_controllable(
        CoordinationProblem(p.table, p.plants, supremal, ek, gk))
    assert all(v.holds for v in cc.values())
    verdict = verify_global_optimality(p, supremal)
    assert verdict.status is Status.HOLDS


def test_prefix_closed_route_rejects_marked_spec():
    p = corpus.database().problem
    ek, gk = build_coordinator(p)
    with pytest.raises(PreconditionFailed) as err:
        prefix_closed_supcc(p.with_coordinator(ek, gk))
    assert err.value.condition == "prefix-closed-spec"


def test_global_optimality_not_applicable_on_marked_spec():
    p = corpus.database().problem
    ek, gk = build_coordinator(p)
    p = p.with_coordinator(ek, gk)
    verdict = verify_global_optimality(p, p.spec)
    assert verdict.status is Status.NOT_APPLICABLE


# -- pipeline smoke ----------------------------------------------------------------------


def test_pipeline_database_all_verdicts_hold():
    report = run_pipeline(corpus.database().problem)
    assert report.all_hold
    assert report.supervisors is not None
    assert [s.n_states for s in report.supervisors.locals] == [3, 3, 3]
    assert report.verdicts["optimal"].holds
    assert report.verdicts["nonblocking-chain"].holds


def test_pipeline_inclusion_gap_stops():
    report = run_pipeline(corpus.inclusion_gap().problem)
    assert report.supremal is None
    assert report.supervisors is None
    assert not report.verdicts["supck-coverage:subsystem-1"].holds


def test_pipeline_prefix_closed_database():
    report = run_pipeline(corpus.database_prefix_closed().problem, prefix_closed=True)
    assert report.supremal is not None
    assert report.verdicts["prefix-closed-spec"].holds
    assert report.verdicts["optimal"].holds
