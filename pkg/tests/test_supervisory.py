"""Controllability, the supremal controllable sublanguage, marking closure."""

import random

import pytest

from descoord.automata import (
    EventTable,
    enumerate_bounded,
    generated_language,
    language_equal,
    language_subset,
    parallel_compose,
    prefix_closure,
    trim,
)
from descoord.errors import EventTableMismatch
from descoord.harness import random_generator, random_table
from descoord.oracle import is_controllable_words
from descoord.supervisory import is_controllable, is_lm_closed, supcon

from helpers import ABC, gen

TU = EventTable.from_names(["a", "b", "u"], uncontrollable=["u"])


def shared_plant():
    g1 = gen(TU, {"a", "u"}, [("a", "u")])
    g2 = gen(TU, {"b", "u"}, [("b", "u")])
    return parallel_compose(g1, g2)


def test_controllable_spec_example():
    k = gen(TU, {"a"}, [("a",)])
    assert is_controllable(k, shared_plant()).holds


def test_uncontrollable_projection_with_witness():
    k = gen(TU, set(), [()])  # the language {epsilon}
    plant = gen(TU, {"u"}, [("u",)], prefix_closed=True)
    verdict = is_controllable(k, plant)
    assert not verdict.holds
    assert verdict.witness == ((), "u")


def test_self_controllability():
    plant = shared_plant()
    assert is_controllable(plant, plant).holds


def test_controllability_witness_replays():
    rng = random.Random(7)
    seen = 0
    while seen < 30:
        table = random_table(rng)
        k = random_generator(rng, table, table.names(), max_states=4)
        l = random_generator(rng, table, table.names(), max_states=4)
        verdict = is_controllable(k, l)
        if verdict.holds or k.is_empty:
            continue
        seen += 1
        word, u = verdict.witness
        assert trim(k).generates(word)
        assert generated_language(l).accepts(word + (u,))
        assert not trim(k).generates(word + (u,))


def test_supcon_fixpoint_when_controllable():
    k = gen(TU, {"a"}, [("a",)])
    result = supcon(k, shared_plant())
    assert language_equal(result, k).marked


def test_supcon_empty_when_nothing_survives():
    k = gen(TU, set(), [()])
    plant = gen(TU, {"u"}, [("u",)], prefix_closed=True)
    assert supcon(k, plant).is_empty


def test_supcon_output_is_controllable_and_contained():
    rng = random.Random(11)
    for _ in range(60):
        table = random_table(rng)
        k = random_generator(rng, table, table.names(), max_states=5, acyclic=True)
        l = random_generator(rng, table, table.names(), max_states=5)
        result = supcon(k, l)
        assert is_controllable(result, l).holds
        assert language_subset(result, k).marked


def test_supcon_is_greatest_on_bounded_instances():
    # adding back any removed plant-executable word must break controllability
    rng = random.Random(13)
    checked = 0
    while checked < 25:
        table = random_table(rng)
        k = random_generator(rng, table, table.names(), max_states=4, acyclic=True)
        l = random_generator(rng, table, table.names(), max_states=4)
        result = supcon(k, l)
        kw = enumerate_bounded(trim(k), 6)[0].words
        lw = enumerate_bounded(l, 6)[1].words
        rw = enumerate_bounded(result, 6)[0].words
        removed = {w for w in kw if w in lw} - rw
        if not removed:
            continue
        checked += 1
        eu = table.uncontrollable()
        for w in removed:
            assert not is_controllable_words(rw | {w}, lw, eu)


def test_controllability_transitivity():
    # K controllable wrt closure(L), L controllable wrt closure(M)
    # implies K controllable wrt closure(M)
    rng = random.Random(17)
    confirmed = 0
    while confirmed < 20:
        table = random_table(rng)
        m = random_generator(rng, table, table.names(), max_states=4)
        l = supcon(random_generator(rng, table, table.names(), max_states=4,
                                    acyclic=True), m)
        k = supcon(random_generator(rng, table, table.names(), max_states=4,
                                    acyclic=True), prefix_closure(l))
        if k.is_empty or l.is_empty:
            continue
        assert is_controllable(k, prefix_closure(l)).holds
        assert is_controllable(l, m).holds
        assert is_controllable(k, m).holds
        confirmed += 1


def test_composition_preserves_controllability():
    # prefix-closed plants, nonconflicting controllable parts
    rng = random.Random(19)
    confirmed = 0
    while confirmed < 20:
        table = random_table(rng, max_events=4)
        names = table.names()
        half = max(1, len(names) // 2)
        e1, e2 = set(names[:half + 1]), set(names[half - 1:])
        l1 = generated_language(random_generator(rng, table, sorted(e1), max_states=3))
        l2 = generated_language(random_generator(rng, table, sorted(e2), max_states=3))
        if l1.is_empty or l2.is_empty:
            continue
        k1 = supcon(random_generator(rng, table, sorted(e1), max_states=3,
                                     acyclic=True), l1)
        k2 = supcon(random_generator(rng, table, sorted(e2), max_states=3,
                                     acyclic=True), l2)
        if k1.is_empty or k2.is_empty:
            continue
        composed = parallel_compose(k1, k2)
        nonconflicting = language_equal(
            prefix_closure(composed),
            parallel_compose(prefix_closure(k1), prefix_closure(k2))).marked
        if not nonconflicting:
            continue
        confirmed += 1
        assert is_controllable(composed, parallel_compose(l1, l2)).holds


def test_lm_closed_spec_examples():
    t = EventTable.from_names(["a1", "a2", "a"])
    k = gen(t, {"a1", "a2", "a"}, [("a1", "a2", "a"), ("a2", "a1", "a")])
    g1 = gen(t, {"a1", "a"}, [("a1", "a")])
    g2 = gen(t, {"a2", "a"}, [("a2", "a")])
    gk = gen(t, {"a"}, [(), ("a",)])
    plant = parallel_compose(g1, g2, gk)
    assert is_lm_closed(k, plant)
    from descoord.automata import project

    assert not is_lm_closed(project(k, {"a"}), gk)


def test_lm_closed_trivial_for_prefix_closed():
    k = gen(ABC, {"a", "b"}, [("a",)], prefix_closed=True)
    g = gen(ABC, {"a", "b"}, [("a", "b"), ("a",)], prefix_closed=True)
    assert language_subset(k, g).marked
    assert is_lm_closed(k, g)


def test_supcon_preserves_lm_closedness():
    # if K is L_m(G)-closed, the supremal controllable sublanguage stays closed
    rng = random.Random(23)
    confirmed = 0
    while confirmed < 20:
        table = random_table(rng)
        plant = random_generator(rng, table, table.names(), max_states=4)
        k = random_generator(rng, table, table.names(), max_states=4, acyclic=True)
        if plant.is_empty or k.is_empty:
            continue
        if not is_lm_closed(k, plant):
            continue
        result = supcon(k, plant)
        if result.is_empty:
            continue
        confirmed += 1
        assert is_lm_closed(result, plant)


def test_table_mismatch_raises():
    other = EventTable.from_names(["a", "u"], uncontrollable=["u"])
    with pytest.raises(EventTableMismatch):
        is_controllable(gen(TU, {"a"}, [("a",)]), gen(other, {"a"}, [("a",)]))
