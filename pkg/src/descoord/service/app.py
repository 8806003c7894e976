"""HTTP service wrapping the synthesis library.

Every endpoint is a stateless pure function over the request body, so the
service scales by workers alone. The CLI drives the same handlers
in-process by default and can target a running instance with --server.

Routes:

- POST /automata/{compose,project,supcon,trim,minimize}: one automaton op
- POST /check/{property}: property verdicts with witnesses
- POST /coordinate: the full pipeline, returning a synthesis report
- POST /dot: Graphviz text for an automaton
- POST /oracle: the randomized cross-validation harness
- GET  /corpus and /corpus/{name}: bundled worked examples
- GET  /health
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from .. import corpus
from ..automata import is_nonblocking, minimize, parallel_compose, project, trim
from ..coordination import (
    is_conditionally_closed,
    is_conditionally_controllable,
    is_conditionally_decomposable,
)
from ..dot import to_dot
from ..errors import DescoordError, PreconditionFailed
from ..harness import run_harness
from ..observers import is_lcc, is_observer
from ..pipeline import run_pipeline
from ..supervisory import is_controllable, is_lm_closed, supcon
from .schemas import (
    AutomatonModel,
    CheckRequest,
    CheckResponse,
    ComposeRequest,
    CorpusResponse,
    OracleRequest,
    OracleResponse,
    ProblemModel,
    ProjectRequest,
    SupconRequest,
    SynthesisReportModel,
    UnaryRequest,
    VerdictModel,
    union_table,
    witness_payload,
)

CHECKS = ("controllable", "lm-closed", "cond-decomposable", "cond-controllable",
          "cond-closed", "observer", "lcc", "nonblocking")


def create_app() -> FastAPI:
    app = FastAPI(title="descoord", version="0.1.0",
                  description="Coordination control synthesis for modular "
                              "discrete-event systems")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/automata/compose", response_model=AutomatonModel)
    def compose(req: ComposeRequest) -> AutomatonModel:
        if not req.automata:
            raise HTTPException(422, "need at least one automaton")
        table = union_table(req.automata)
        gens = [m.to_generator(table) for m in req.automata]
        return AutomatonModel.from_generator(parallel_compose(*gens))

    @app.post("/automata/project", response_model=AutomatonModel)
    def project_op(req: ProjectRequest) -> AutomatonModel:
        g = req.automaton.to_generator()
        kept = frozenset(req.kept) & frozenset(g.table.names())
        return AutomatonModel.from_generator(project(g, kept))

    @app.post("/automata/supcon", response_model=AutomatonModel)
    def supcon_op(req: SupconRequest) -> AutomatonModel:
        table = union_table([req.spec, req.plant])
        return AutomatonModel.from_generator(
            supcon(req.spec.to_generator(table), req.plant.to_generator(table)))

    @app.post("/automata/trim", response_model=AutomatonModel)
    def trim_op(req: UnaryRequest) -> AutomatonModel:
        return AutomatonModel.from_generator(trim(req.automaton.to_generator()))

    @app.post("/automata/minimize", response_model=AutomatonModel)
    def minimize_op(req: UnaryRequest) -> AutomatonModel:
        return AutomatonModel.from_generator(minimize(req.automaton.to_generator()))

    @app.post("/check/{prop}", response_model=CheckResponse)
    def check(prop: str, req: CheckRequest) -> CheckResponse:
        if prop not in CHECKS:
            raise HTTPException(404, f"unknown property {prop!r}; known: {CHECKS}")
        try:
            return run_check(prop, req)
        except (DescoordError, ValueError) as exc:
            raise HTTPException(422, str(exc)) from exc

    @app.post("/coordinate", response_model=SynthesisReportModel)
    def coordinate(req: ProblemModel) -> SynthesisReportModel:
        try:
            problem = req.to_problem()
            report = run_pipeline(problem, step2b=req.step2b,
                                  prefix_closed=req.prefix_closed)
        except PreconditionFailed as exc:
            raise HTTPException(422, f"{exc.condition}: {exc}") from exc
        except (DescoordError, ValueError) as exc:
            raise HTTPException(422, str(exc)) from exc
        return SynthesisReportModel.from_report(report)

    @app.post("/dot", response_class=PlainTextResponse)
    def dot(req: UnaryRequest) -> str:
        return to_dot(req.automaton.to_generator())

    @app.post("/oracle", response_model=OracleResponse)
    def oracle(req: OracleRequest) -> OracleResponse:
        detail = run_harness(req.seed, req.instances, req.bound)
        return OracleResponse(seed=req.seed, instances=req.instances,
                              mismatches=detail["mismatches"], detail=detail)

    @app.get("/corpus")
    def corpus_index() -> dict:
        return {"bundles": sorted(corpus.BUNDLES)}

    @app.get("/corpus/{name}", response_model=CorpusResponse)
    def corpus_bundle(name: str) -> CorpusResponse:
        try:
            bundle = corpus.load(name)
        except KeyError as exc:
            raise HTTPException(404, str(exc)) from exc
        return bundle_response(bundle)

    return app


def bundle_response(bundle: corpus.Bundle) -> CorpusResponse:
    automata = {name: AutomatonModel.from_generator(g)
                for name, g in bundle.automata.items()}
    problem = None
    if bundle.problem is not None:
        p = bundle.problem
        problem = ProblemModel(
            events=[{"name": e.name, "controllable": e.controllable} for e in p.table],
            plants=[AutomatonModel.from_generator(g) for g in p.plants],
            specification=AutomatonModel.from_generator(p.spec),
            coordinator=None if p.gk is None else AutomatonModel.from_generator(p.gk),
            coordinator_events=p.table.ordered(p.ek),
        )
    return CorpusResponse(name=bundle.name, automata=automata, problem=problem,
                          notes=list(bundle.notes))


def run_check(prop: str, req: CheckRequest) -> CheckResponse:
    """Shared property-check dispatch used by the endpoint and the CLI."""
    if prop == "controllable":
        _need(req.spec, "spec")
        _need(req.plant, "plant")
        table = union_table([req.spec, req.plant])
        v = is_controllable(req.spec.to_generator(table), req.plant.to_generator(table))
        return CheckResponse(property=prop, holds=v.holds,
                             witness=witness_payload(v.witness))
    if prop == "lm-closed":
        _need(req.spec, "spec")
        _need(req.plant, "plant")
        table = union_table([req.spec, req.plant])
        ok = is_lm_closed(req.spec.to_generator(table), req.plant.to_generator(table))
        return CheckResponse(property=prop, holds=ok)
    if prop == "cond-decomposable":
        if req.problem is not None:
            problem = req.problem.to_problem()
            spec = problem.spec
            alphabets = [g.alphabet for g in problem.plants]
            ek = problem.ek
        else:
            _need(req.spec, "spec")
            _need(req.alphabets, "alphabets")
            spec = req.spec.to_generator()
            alphabets = [frozenset(a) for a in req.alphabets]
            ek = frozenset(req.coordinator_events or [])
        d = is_conditionally_decomposable(spec, alphabets, ek, closed=req.closure)
        return CheckResponse(property=prop, holds=d.holds,
                             witness=witness_payload(d.witness))
    if prop in ("cond-controllable", "cond-closed"):
        _need(req.problem, "problem")
        problem = req.problem.to_problem()
        if problem.gk is None:
            from ..coordination import build_coordinator

            ek, gk = build_coordinator(problem)
            problem = problem.with_coordinator(ek, gk)
        fn = (is_conditionally_controllable if prop == "cond-controllable"
              else is_conditionally_closed)
        verdicts = fn(problem)
        return CheckResponse(
            property=prop,
            holds=all(v.holds for v in verdicts.values()),
            verdicts={k: VerdictModel.from_verdict(v) for k, v in verdicts.items()})
    if prop in ("observer", "lcc"):
        _need(req.automaton, "automaton")
        _need(req.kept, "kept")
        g = req.automaton.to_generator()
        kept = frozenset(req.kept)
        v = is_observer(g, kept) if prop == "observer" else is_lcc(g, kept)
        return CheckResponse(property=prop, holds=v.holds,
                             witness=witness_payload(v.witness))
    if prop == "nonblocking":
        _need(req.automaton, "automaton")
        return CheckResponse(property=prop,
                             holds=is_nonblocking(req.automaton.to_generator()))
    raise ValueError(f"unhandled property {prop!r}")


def _need(value, name: str):
    if value is None:
        raise ValueError(f"property check requires {name!r}")


app = create_app()
