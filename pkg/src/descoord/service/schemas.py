"""Pydantic models: the wire format of the service and the on-disk JSON format.

The same ``AutomatonModel`` backs automaton files read by the CLI and the
request/response bodies of the HTTP API, so there is exactly one schema
to document. Serialization is canonical: integer states, events in table
order, transitions sorted by (source, event index), which makes emitted
files round-trip byte-identically.
"""
from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from ..automata import EventTable, Generator
from ..coordination import CoordinationProblem, SynthesisReport, Verdict
from ..observers import PropertyWitness

StateRef = Union[int, str]


class EventModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    controllable: bool


class AutomatonModel(BaseModel):
    """JSON form of a generator.

    ``states`` is either a state count (states are then ``0..n-1``) or a
    list of state names; ``initial``, ``marked`` and transition endpoints
    reference states accordingly. ``events`` lists this automaton's own
    alphabet with controllability flags.
    """

    model_config = ConfigDict(extra="forbid")
    events: list[EventModel]
    states: Union[int, list[str]]
    initial: Optional[StateRef] = None
    marked: list[StateRef] = Field(default_factory=list)
    transitions: list[tuple[StateRef, str, StateRef]] = Field(default_factory=list)

    def state_id(self, ref: StateRef) -> int:
        if isinstance(self.states, int):
            if not isinstance(ref, int):
                raise ValueError(f"state {ref!r} must be an integer index")
            if not (0 <= ref < self.states):
                raise ValueError(f"state index {ref} out of range")
            return ref
        try:
            return self.states.index(ref) if isinstance(ref, str) else int(ref)
        except ValueError:
            raise ValueError(f"unknown state name {ref!r}") from None

    def to_generator(self, table: Optional[EventTable] = None) -> Generator:
        mask = frozenset(e.name for e in self.events)
        if table is None:
            table = EventTable((e.name, e.controllable) for e in self.events)
        else:
            for e in self.events:
                if e.name not in table:
                    raise ValueError(f"event {e.name!r} not in the problem table")
                if table.is_controllable(e.name) != e.controllable:
                    raise ValueError(f"controllability of {e.name!r} disagrees "
                                     "with the problem table")
        n = self.states if isinstance(self.states, int) else len(self.states)
        if n == 0:
            return Generator.empty(table, mask)
        if self.initial is None:
            raise ValueError("non-empty automaton needs an initial state")
        trans = {(self.state_id(src), e): self.state_id(dst)
                 for src, e, dst in self.transitions}
        return Generator(table, mask, n, self.state_id(self.initial),
                         frozenset(self.state_id(m) for m in self.marked), trans)

    @classmethod
    def from_generator(cls, g: Generator) -> "AutomatonModel":
        events = [EventModel(name=e, controllable=g.table.is_controllable(e))
                  for e in g.table.ordered(g.alphabet)]
        key = g.table.index
        transitions = sorted(((q, e, r) for (q, e), r in g.transitions.items()),
                             key=lambda t: (t[0], key(t[1])))
        return cls(events=events, states=g.n_states, initial=g.initial,
                   marked=sorted(g.marked), transitions=transitions)

    def canonical_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"


def union_table(models: list["AutomatonModel"]) -> EventTable:
    """Global table from automaton models, in first-seen order, flags checked."""
    seen: dict[str, bool] = {}
    for m in models:
        for e in m.events:
            if e.name in seen:
                if seen[e.name] != e.controllable:
                    raise ValueError(f"controllability of {e.name!r} disagrees "
                                     "between automata")
            else:
                seen[e.name] = e.controllable
    return EventTable(seen.items())


class ProblemModel(BaseModel):
    """A coordination problem with all automata inlined."""

    model_config = ConfigDict(extra="forbid")
    events: Optional[list[EventModel]] = None
    plants: list[AutomatonModel]
    specification: AutomatonModel
    coordinator: Optional[AutomatonModel] = None
    coordinator_events: list[str] = Field(default_factory=list)
    step2b: bool = False
    prefix_closed: bool = False

    def build_table(self) -> EventTable:
        if self.events is not None:
            return EventTable((e.name, e.controllable) for e in self.events)
        return union_table([*self.plants, self.specification] + (
            [self.coordinator] if self.coordinator else []))

    def to_problem(self) -> CoordinationProblem:
        table = self.build_table()
        plants = tuple(m.to_generator(table) for m in self.plants)
        spec = self.specification.to_generator(table)
        gk = self.coordinator.to_generator(table) if self.coordinator else None
        return CoordinationProblem(table, plants, spec,
                                   frozenset(self.coordinator_events), gk)


class ProblemFileModel(BaseModel):
    """On-disk problem description: automata by relative path."""

    model_config = ConfigDict(extra="forbid")
    events: Optional[list[EventModel]] = None
    plants: list[str]
    specification: str
    coordinator: Optional[str] = None
    coordinator_events: list[str] = Field(default_factory=list)
    step2b: bool = False
    prefix_closed: bool = False


class VerdictModel(BaseModel):
    status: Literal["holds", "fails", "not_applicable"]
    witness: Any = None
    note: str = ""

    @classmethod
    def from_verdict(cls, v: Verdict) -> "VerdictModel":
        return cls(status=v.status.value, witness=witness_payload(v.witness), note=v.note)


def witness_payload(w: Any) -> Any:
    """JSON-friendly rendering of the various witness shapes."""
    if w is None:
        return None
    if isinstance(w, PropertyWitness):
        return {"kind": w.kind, "words": [list(x) for x in w.words],
                **({"event": w.event} if w.event else {})}
    if isinstance(w, tuple):
        if all(isinstance(x, str) for x in w):
            return {"word": list(w)}
        if len(w) == 2 and isinstance(w[0], tuple) and isinstance(w[1], str):
            return {"word": list(w[0]), "event": w[1]}
        return [witness_payload(x) for x in w]
    return w


class SupervisorsModel(BaseModel):
    coordinator: AutomatonModel
    locals: list[AutomatonModel]


class TripletModel(BaseModel):
    supc_k: AutomatonModel
    supc_ik: list[AutomatonModel]


class SynthesisReportModel(BaseModel):
    coordinator_events: list[str]
    coordinator: AutomatonModel
    verdicts: dict[str, VerdictModel]
    triplet: Optional[TripletModel] = None
    supremal: Optional[AutomatonModel] = None
    supervisors: Optional[SupervisorsModel] = None
    supervisor_states: Optional[list[int]] = None
    composed: Optional[AutomatonModel] = None
    nonblocking_events: Optional[list[str]] = None
    nonblocking_coordinator: Optional[AutomatonModel] = None
    notes: list[str] = Field(default_factory=list)

    @classmethod
    def from_report(cls, r: SynthesisReport) -> "SynthesisReportModel":
        table = r.coordinator.table
        conv = AutomatonModel.from_generator
        return cls(
            coordinator_events=table.ordered(r.coordinator_events),
            coordinator=conv(r.coordinator),
            verdicts={k: VerdictModel.from_verdict(v) for k, v in r.verdicts.items()},
            triplet=None if r.triplet is None else TripletModel(
                supc_k=conv(r.triplet.supc_k),
                supc_ik=[conv(s) for s in r.triplet.supc_ik]),
            supremal=None if r.supremal is None else conv(r.supremal),
            supervisors=None if r.supervisors is None else SupervisorsModel(
                coordinator=conv(r.supervisors.coordinator),
                locals=[conv(s) for s in r.supervisors.locals]),
            supervisor_states=None if r.supervisors is None else [
                s.n_states for s in r.supervisors.locals],
            composed=None if r.composed is None else conv(r.composed),
            nonblocking_events=None if r.nonblocking_events is None else
                table.ordered(r.nonblocking_events),
            nonblocking_coordinator=None if r.nonblocking_coordinator is None else
                conv(r.nonblocking_coordinator),
            notes=list(r.notes),
        )


class CheckRequest(BaseModel):
    """One property check. Which fields matter depends on the property."""

    model_config = ConfigDict(extra="forbid")
    spec: Optional[AutomatonModel] = None
    plant: Optional[AutomatonModel] = None
    automaton: Optional[AutomatonModel] = None
    kept: Optional[list[str]] = None
    alphabets: Optional[list[list[str]]] = None
    coordinator_events: Optional[list[str]] = None
    closure: bool = False
    problem: Optional[ProblemModel] = None


class CheckResponse(BaseModel):
    property: str
    holds: Optional[bool] = None
    verdicts: Optional[dict[str, VerdictModel]] = None
    witness: Any = None


class ComposeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    automata: list[AutomatonModel]


class ProjectRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    automaton: AutomatonModel
    kept: list[str]


class SupconRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    spec: AutomatonModel
    plant: AutomatonModel


class UnaryRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    automaton: AutomatonModel


class OracleRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    seed: int = 0
    instances: int = 50
    bound: int = 6


class OracleResponse(BaseModel):
    seed: int
    instances: int
    mismatches: int
    detail: dict[str, int]


class CorpusResponse(BaseModel):
    name: str
    automata: dict[str, AutomatonModel]
    problem: Optional[ProblemModel] = None
    notes: list[str] = Field(default_factory=list)
