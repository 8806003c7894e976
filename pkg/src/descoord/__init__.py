"""Coordination control synthesis for modular discrete-event systems."""

from .automata import (
    BoundedLanguage,
    Event,
    EventTable,
    Generator,
    LanguageRelation,
    ProjectionSpec,
    Word,
    difference_word,
    enumerate_bounded,
    event_range,
    generated_language,
    is_nonblocking,
    language_equal,
    language_subset,
    lift,
    minimize,
    parallel_compose,
    prefix_closure,
    project,
    trim,
)
from .supervisory import ControllabilityVerdict, is_controllable, is_lm_closed, supcon
from .observers import PropertyVerdict, PropertyWitness, extend_for_observer, is_lcc, is_observer
from .coordination import (
    CoordinationProblem,
    Status,
    SupCTriplet,
    SupervisorSet,
    SynthesisReport,
    Verdict,
    build_coordinator,
    check_supck_inclusion,
    extend_alphabet_cd,
    is_conditionally_closed,
    is_conditionally_controllable,
    is_conditionally_decomposable,
    is_conditionally_independent,
    prefix_closed_supcc,
    supc_triplet,
    supcc_from_triplet,
    synthesize_supervisors,
    verify_global_optimality,
)
from .nonblocking import nonblocking_coordinator, verify_nonblocking
from .oracle import OracleInstance, oracle_check_observer_acyclic, oracle_supcc, oracle_supcon
from .pipeline import run_pipeline

__version__ = "0.1.0"
