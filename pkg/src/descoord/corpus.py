"""Bundled fixtures: small coordination problems with known answers.

Each bundle is a self-contained problem used by the CLI ``corpus``
command, the HTTP fixtures endpoint, and the test suite:

- ``interleaving``: a four-word specification over two subsystems that is
  conditionally decomposable while its prefix closure is not, plus a
  second language showing the reverse situation.
- ``uncontrollable-merge``: two tiny plants joined by a shared
  uncontrollable completion event; the specification is controllable
  globally but its coordinator projection is not.
- ``closedness-gap``: marking consistency holds globally but fails at the
  coordinator, so no coordinator supervisor can realize the projection.
- ``database``: three users issue request / access / exit transactions;
  the specification serializes the access-to-exit critical sections.
  Reconstructed from the prose description, so derived answers (such as
  supervisor state counts) are reported by the tests rather than assumed.
- ``inclusion-gap``: a minimal instance where the coordinator-level
  supremal language is not covered by the local projections, so the
  triplet composition is not supremal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .automata import EventTable, Generator, parallel_compose, prefix_closure, trim
from .coordination import CoordinationProblem


@dataclass(frozen=True)
class Bundle:
    name: str
    table: EventTable
    automata: dict[str, Generator]
    problem: Optional[CoordinationProblem]
    notes: tuple[str, ...] = ()


def interleaving() -> Bundle:
    """Two producers handing over to shared confirmations a and b."""
    t = EventTable.from_names(["a1", "a2", "b1", "b2", "a", "b"])
    e1 = frozenset({"a1", "b1", "a", "b"})
    e2 = frozenset({"a2", "b2", "a", "b"})
    spec = Generator.from_words(t, e1 | e2, [
        ("a1", "a2", "a"), ("a2", "a1", "a"),
        ("b1", "b2", "b"), ("b2", "b1", "b"),
    ])
    g1 = Generator.from_words(t, e1, [("a1", "a"), ("b1", "b")])
    g2 = Generator.from_words(t, e2, [("a2", "a"), ("b2", "b")])
    problem = CoordinationProblem(t, (g1, g2), spec, frozenset({"a", "b"}))
    # second part: a language whose closure is decomposable but that is not
    t_chain = EventTable.from_names(["a", "b", "c"])
    chain = Generator.from_words(t_chain, {"a", "b", "c"}, [
        (), ("a", "b"), ("b", "a"), ("a", "b", "c"), ("b", "a", "c"),
    ])
    return Bundle(
        "interleaving", t,
        {"spec": spec, "plant1": g1, "plant2": g2, "chain": chain},
        problem,
        notes=("chain uses its own table; check it against alphabets "
               "{a,c} / {b,c} with coordinator {c}",))


def uncontrollable_merge() -> Bundle:
    """Local work a / b ends in a shared uncontrollable completion u."""
    t = EventTable.from_names(["a", "b", "u"], uncontrollable=["u"])
    g1 = Generator.from_words(t, {"a", "u"}, [("a", "u")], prefix_closed=True)
    g2 = Generator.from_words(t, {"b", "u"}, [("b", "u")], prefix_closed=True)
    spec = Generator.from_words(t, {"a"}, [("a",)])
    gk = parallel_compose(Generator.from_words(t, {"u"}, [("u",)], prefix_closed=True),
                          Generator.from_words(t, {"u"}, [("u",)], prefix_closed=True))
    problem = CoordinationProblem(t, (g1, g2), spec, frozenset({"u"}), gk)
    return Bundle("uncontrollable-merge", t,
                  {"spec": spec, "plant1": g1, "plant2": g2, "coordinator": gk},
                  problem)


def closedness_gap() -> Bundle:
    """Marking agreed on globally, lost at the coordinator projection."""
    t = EventTable.from_names(["a1", "a2", "a"])
    g1 = Generator.from_words(t, {"a1", "a"}, [("a1", "a")])
    g2 = Generator.from_words(t, {"a2", "a"}, [("a2", "a")])
    gk = Generator.from_words(t, {"a"}, [(), ("a",)])
    spec = Generator.from_words(t, {"a1", "a2", "a"},
                                [("a1", "a2", "a"), ("a2", "a1", "a")])
    problem = CoordinationProblem(t, (g1, g2), spec, frozenset({"a"}), gk)
    return Bundle("closedness-gap", t,
                  {"spec": spec, "plant1": g1, "plant2": g2, "coordinator": gk},
                  problem)


def _transaction(t: EventTable, i: int) -> Generator:
    """request -> access -> exit cycle of user i, marked at home."""
    r, a, e = f"r{i}", f"a{i}", f"e{i}"
    return Generator(t, frozenset({r, a, e}), 3, 0, frozenset({0}),
                     {(0, r): 1, (1, a): 2, (2, e): 0})


def _mutex_monitor(t: EventTable, users: int) -> Generator:
    """Only the user inside the access..exit section may exit; no other access."""
    alphabet = frozenset(x for i in range(1, users + 1) for x in (f"a{i}", f"e{i}"))
    trans: dict[tuple[int, str], int] = {}
    for i in range(1, users + 1):
        trans[(0, f"a{i}")] = i
        trans[(i, f"e{i}")] = 0
    return Generator(t, alphabet, users + 1, 0, frozenset({0}), trans)


def database(users: int = 3) -> Bundle:
    """Concurrent database transactions with serialized critical sections."""
    names = [f"{kind}{i}" for i in range(1, users + 1) for kind in ("r", "a", "e")]
    unc = [n for n in names if not n.startswith("a")]
    t = EventTable.from_names(names, uncontrollable=unc)
    plants = tuple(_transaction(t, i) for i in range(1, users + 1))
    spec = trim(parallel_compose(*plants, _mutex_monitor(t, users)))
    ek = frozenset(f"a{i}" for i in range(1, users + 1))
    problem = CoordinationProblem(t, plants, spec, ek)
    automata = {"spec": spec}
    automata.update({f"plant{i}": g for i, g in enumerate(plants, start=1)})
    return Bundle("database", t, automata, problem,
                  notes=("reconstructed from the prose description: between an "
                         "access and its exit no other access may occur",))


def database_prefix_closed(users: int = 3) -> Bundle:
    """Prefix-closed variant of the database problem (all languages closed)."""
    base = database(users)
    plants = tuple(prefix_closure(g) for g in base.problem.plants)
    spec = prefix_closure(base.problem.spec)
    problem = CoordinationProblem(base.table, plants, spec, base.problem.ek)
    automata = {"spec": spec}
    automata.update({f"plant{i}": g for i, g in enumerate(plants, start=1)})
    return Bundle("database-prefix-closed", base.table, automata, problem)


def inclusion_gap() -> Bundle:
    """Coordinator-level supremal language escapes both local projections.

    Each subsystem can run the two controllable actions in either order,
    but a private uncontrollable follow-up loop constrains which orders
    the specification tolerates, one order per subsystem. At the
    coordinator (which sees only the controllable actions) both orders
    survive. The coordinator projections are observers of and locally
    control consistent for the composed plant, so those properties alone
    do not rescue the coverage condition.
    """
    t = EventTable.from_names(["a1", "a2", "u1", "u2"], uncontrollable=["u1", "u2"])
    g1 = Generator(t, frozenset({"a1", "a2", "u1"}), 5, 0, frozenset(range(5)), {
        (0, "a1"): 1, (1, "u1"): 1, (1, "a2"): 2, (2, "u1"): 2,
        (0, "a2"): 3, (3, "a1"): 4, (4, "u1"): 4,
    })
    g2 = Generator(t, frozenset({"a1", "a2", "u2"}), 5, 0, frozenset(range(5)), {
        (0, "a2"): 1, (1, "u2"): 1, (1, "a1"): 2, (2, "u2"): 2,
        (0, "a1"): 3, (3, "a2"): 4, (4, "u2"): 4,
    })
    spec = Generator(t, frozenset(t.names()), 5, 0, frozenset(range(5)), {
        (0, "a2"): 1, (1, "a1"): 2, (2, "u1"): 2,
        (0, "a1"): 3, (3, "a2"): 4, (4, "u2"): 4,
    })
    problem = CoordinationProblem(t, (g1, g2), spec, frozenset({"a1", "a2"}))
    return Bundle("inclusion-gap", t,
                  {"spec": spec, "plant1": g1, "plant2": g2},
                  problem,
                  notes=("minimal reconstruction; the private uncontrollable "
                         "events play the role of the original follow-ups",))


BUNDLES: dict[str, Callable[[], Bundle]] = {
    "interleaving": interleaving,
    "uncontrollable-merge": uncontrollable_merge,
    "closedness-gap": closedness_gap,
    "database": database,
    "inclusion-gap": inclusion_gap,
}


def load(name: str) -> Bundle:
    try:
        return BUNDLES[name]()
    except KeyError:
        raise KeyError(f"unknown corpus bundle {name!r}; "
                       f"available: {sorted(BUNDLES)}") from None
