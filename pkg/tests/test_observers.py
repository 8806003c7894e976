"""Observer property, LCC, and the witness-guided alphabet extension."""

import random

from descoord.automata import (
    EventTable,
    generated_language,
    language_equal,
    lift,
    minimize,
    parallel_compose,
    prefix_closure,
    project,
    trim,
)
from descoord.harness import random_generator, random_table
from descoord.observers import extend_for_observer, is_lcc, is_observer
from descoord.oracle import oracle_check_observer_acyclic

from helpers import gen

T3 = EventTable.from_names(["a", "b", "c"])


def test_observer_identity_projection():
    g = gen(T3, {"a", "b"}, [("a", "b"), ("b",)])
    assert is_observer(g, {"a", "b", "c"}).holds


def test_observer_counterexample_a_bc():
    g = gen(T3, {"a", "b", "c"}, [("a",), ("b", "c")])
    verdict = is_observer(g, {"c"})
    assert not verdict.holds
    s, t = verdict.witness.words
    # the witness replays: s generated, t a projected marked word extending
    # P(s), and no continuation of s projects onto t
    assert trim(g).generates(s)
    projected = {tuple(e for e in w if e == "c") for w in [("a",), ("b", "c")]}
    assert t in projected
    assert not oracle_check_observer_acyclic(g, {"c"})


def test_observer_ab_keep_b():
    g = gen(T3, {"a", "b"}, [("a", "b")])
    assert is_observer(g, {"b"}).holds
    assert oracle_check_observer_acyclic(g, {"b"})


def test_extension_fixpoint_and_postcondition():
    g = gen(T3, {"a", "b"}, [("a", "b")])
    assert extend_for_observer(g, {"b"}).kept == {"b"}
    bad = gen(T3, {"a", "b", "c"}, [("a",), ("b", "c")])
    extended = extend_for_observer(bad, {"c"})
    assert extended.kept >= {"c"}
    assert is_observer(bad, extended).holds
    assert extend_for_observer(bad, {"a", "b", "c"}).kept == {"a", "b", "c"}


def test_lcc_full_alphabet_trivial():
    t = EventTable.from_names(["c", "u"], uncontrollable=["u"])
    g = gen(t, {"c", "u"}, [("c", "u")], prefix_closed=True)
    assert is_lcc(g, {"c", "u"}).holds


def test_lcc_controllable_enabling_path_fails():
    t = EventTable.from_names(["c", "u"], uncontrollable=["u"])
    g = gen(t, {"c", "u"}, [("c", "u")], prefix_closed=True)
    verdict = is_lcc(g, {"u"})
    assert not verdict.holds
    assert verdict.witness.event == "u"
    s, path = verdict.witness.words
    assert path == ("c",)


def test_lcc_uncontrollable_enabling_path_holds():
    t = EventTable.from_names(["v", "u"], uncontrollable=["v", "u"])
    g = gen(t, {"v", "u"}, [("v", "u")], prefix_closed=True)
    assert is_lcc(g, {"u"}).holds


def test_observer_agrees_with_acyclic_oracle():
    rng = random.Random(5)
    checked = 0
    while checked < 60:
        table = random_table(rng, max_events=4)
        g = random_generator(rng, table, table.names(), max_states=5, acyclic=True)
        if g.is_empty:
            continue
        checked += 1
        kept = frozenset(e for e in table.names() if rng.random() < 0.5)
        assert is_observer(g, kept).holds == oracle_check_observer_acyclic(g, kept)


def test_state_bound_under_observer():
    rng = random.Random(6)
    checked = 0
    while checked < 60:
        table = random_table(rng, max_events=4)
        g = random_generator(rng, table, table.names(), max_states=6)
        if g.is_empty:
            continue
        kept = extend_for_observer(
            g, frozenset(e for e in table.names() if rng.random() < 0.4)).kept
        assert is_observer(g, kept).holds
        checked += 1
        assert minimize(project(g, kept)).n_states <= g.n_states


def test_observer_composition_nonconflict_equivalence():
    # with component observers over a kept set covering the shared alphabet,
    # nonconflict of the composition matches nonconflict of the projections
    rng = random.Random(9)
    checked = 0
    while checked < 40:
        table = EventTable.from_names(["p", "q", "s", "t"])
        l1 = random_generator(rng, table, ["p", "s", "t"], max_states=4)
        l2 = random_generator(rng, table, ["q", "s", "t"], max_states=4)
        if l1.is_empty or l2.is_empty:
            continue
        kept = extend_for_observer(l1, {"s", "t"}).kept
        kept = extend_for_observer(l2, kept).kept
        if not (is_observer(l1, kept).holds and is_observer(l2, kept).holds):
            continue
        checked += 1
        composed = parallel_compose(l1, l2)
        lhs = language_equal(
            prefix_closure(composed),
            parallel_compose(prefix_closure(l1), prefix_closure(l2))).marked
        p1, p2 = project(l1, kept), project(l2, kept)
        rhs = language_equal(
            prefix_closure(parallel_compose(p1, p2)),
            parallel_compose(prefix_closure(p1), prefix_closure(p2))).marked
        assert lhs == rhs


def test_lcc_lifting_to_the_composed_plant():
    # shared alphabet inside ek plus per-component LCC on the lifted plants
    # implies LCC of the coordinator projection for the composed language
    rng = random.Random(10)
    checked = 0
    while checked < 25:
        table = EventTable.from_names(["p", "q", "s", "t"],
                                      uncontrollable=["q", "t"])
        ek = frozenset({"s", "t"})
        g1 = random_generator(rng, table, ["p", "s", "t"], max_states=3)
        g2 = random_generator(rng, table, ["q", "s", "t"], max_states=3)
        if g1.is_empty or g2.is_empty:
            continue
        gk = parallel_compose(project(generated_language(g1), ek),
                              project(generated_language(g2), ek))
        lifted_ok = True
        for g in (g1, g2):
            lifted = lift(generated_language(g), ek - g.alphabet)
            if not is_lcc(lifted, ek).holds:
                lifted_ok = False
        if not lifted_ok:
            continue
        checked += 1
        plant = generated_language(parallel_compose(g1, g2, gk, trim_result=False))
        assert is_lcc(plant, ek).holds
