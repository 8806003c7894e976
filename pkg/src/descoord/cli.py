"""Command-line client for the synthesis service.

Every subcommand builds the same request bodies the HTTP API accepts and
sends them either to an in-process application instance (the default; no
server needed) or to a running service named with ``--server``. Exit
codes for ``check``: 0 the property holds, 1 it fails (witness printed),
2 a precondition was violated or the input is malformed.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import click
import httpx

from .service.schemas import AutomatonModel, ProblemFileModel, ProblemModel


def _client(ctx: click.Context) -> httpx.Client:
    server = ctx.obj.get("server")
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=300.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _load_automaton(path: str) -> AutomatonModel:
    try:
        return AutomatonModel.model_validate_json(Path(path).read_text())
    except Exception as exc:
        raise click.ClickException(f"{path}: {exc}") from exc


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _post(ctx: click.Context, path: str, payload: dict) -> httpx.Response:
    with _client(ctx) as client:
        resp = client.post(path, json=payload)
    if resp.status_code == 422:
        raise click.ClickException(f"{path}: {resp.json().get('detail', resp.text)}")
    resp.raise_for_status()
    return resp


def _automaton_json(resp: httpx.Response) -> str:
    model = AutomatonModel.model_validate(resp.json())
    return model.canonical_json()


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Target a running descoord service instead of in-process.")
@click.pass_context
def main(ctx, server):
    """Coordination control synthesis for modular discrete-event systems."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@click.argument("files", nargs=-1, required=True)
@click.option("-o", "--out", default=None, help="Output file (stdout otherwise).")
@click.pass_context
def compose(ctx, files, out):
    """Synchronous product of automaton files."""
    payload = {"automata": [_load_automaton(f).model_dump() for f in files]}
    _emit(_automaton_json(_post(ctx, "/automata/compose", payload)), out)


@main.command()
@click.argument("file")
@click.option("--kept", required=True, help="Comma-separated events to keep.")
@click.option("-o", "--out", default=None)
@click.pass_context
def project(ctx, file, kept, out):
    """Natural projection onto the kept events."""
    payload = {"automaton": _load_automaton(file).model_dump(),
               "kept": [e for e in kept.split(",") if e]}
    _emit(_automaton_json(_post(ctx, "/automata/project", payload)), out)


@main.command()
@click.argument("spec")
@click.argument("plant")
@click.option("-o", "--out", default=None)
@click.pass_context
def supcon(ctx, spec, plant, out):
    """Supremal controllable sublanguage of SPEC wrt PLANT."""
    payload = {"spec": _load_automaton(spec).model_dump(),
               "plant": _load_automaton(plant).model_dump()}
    _emit(_automaton_json(_post(ctx, "/automata/supcon", payload)), out)


def _unary(ctx, file, out, path):
    payload = {"automaton": _load_automaton(file).model_dump()}
    _emit(_automaton_json(_post(ctx, path, payload)), out)


@main.command()
@click.argument("file")
@click.option("-o", "--out", default=None)
@click.pass_context
def trim(ctx, file, out):
    """Reachable and co-reachable part."""
    _unary(ctx, file, out, "/automata/trim")


@main.command()
@click.argument("file")
@click.option("-o", "--out", default=None)
@click.pass_context
def minimize(ctx, file, out):
    """Canonical minimal form."""
    _unary(ctx, file, out, "/automata/minimize")


@main.command()
@click.argument("file")
@click.option("-o", "--out", default=None)
@click.pass_context
def dot(ctx, file, out):
    """Graphviz DOT text for an automaton file."""
    payload = {"automaton": _load_automaton(file).model_dump()}
    _emit(_post(ctx, "/dot", payload).text, out)


@main.command()
@click.argument("prop", metavar="PROPERTY")
@click.option("--spec", default=None, help="Specification automaton file.")
@click.option("--plant", default=None, help="Plant automaton file.")
@click.option("--auto", default=None, help="Automaton file (observer/lcc/nonblocking).")
@click.option("--kept", default=None, help="Comma-separated kept events.")
@click.option("--alphabets", default=None,
              help="Subsystem alphabets, e.g. 'a,c;b,c' (cond-decomposable).")
@click.option("--coordinator-events", default=None, help="Comma-separated E_k.")
@click.option("--closure", is_flag=True, help="Check the prefix closure instead.")
@click.option("--problem", default=None, help="Problem file.")
@click.pass_context
def check(ctx, prop, spec, plant, auto, kept, alphabets, coordinator_events,
          closure, problem):
    """Run a named property check; exit 0 holds, 1 fails, 2 precondition error."""
    payload: dict = {"closure": closure}
    if spec:
        payload["spec"] = _load_automaton(spec).model_dump()
    if plant:
        payload["plant"] = _load_automaton(plant).model_dump()
    if auto:
        payload["automaton"] = _load_automaton(auto).model_dump()
    if kept:
        payload["kept"] = [e for e in kept.split(",") if e]
    if alphabets:
        payload["alphabets"] = [[e for e in part.split(",") if e]
                                for part in alphabets.split(";")]
    if coordinator_events:
        payload["coordinator_events"] = [e for e in coordinator_events.split(",") if e]
    if problem:
        payload["problem"] = _load_problem(problem).model_dump()
    try:
        resp = _post(ctx, f"/check/{prop}", payload)
    except click.ClickException as exc:
        click.echo(f"precondition error: {exc.message}", err=True)
        ctx.exit(2)
    body = resp.json()
    if body.get("verdicts"):
        for name, verdict in body["verdicts"].items():
            line = f"{name}: {verdict['status']}"
            if verdict.get("witness"):
                line += f"  witness={json.dumps(verdict['witness'])}"
            click.echo(line)
    result = "holds" if body["holds"] else "fails"
    line = f"{prop}: {result}"
    if body.get("witness"):
        line += f"  witness={json.dumps(body['witness'])}"
    click.echo(line)
    ctx.exit(0 if body["holds"] else 1)


def _load_problem(path: str) -> ProblemModel:
    """Resolve a problem file's automaton paths into an inline problem."""
    p = Path(path)
    try:
        model = ProblemFileModel.model_validate_json(p.read_text())
    except Exception as exc:
        raise click.ClickException(f"{path}: {exc}") from exc
    base = p.parent
    return ProblemModel(
        events=model.events,
        plants=[_load_automaton(str(base / f)) for f in model.plants],
        specification=_load_automaton(str(base / model.specification)),
        coordinator=None if model.coordinator is None
            else _load_automaton(str(base / model.coordinator)),
        coordinator_events=model.coordinator_events,
        step2b=model.step2b,
        prefix_closed=model.prefix_closed,
    )


@main.command()
@click.argument("problem")
@click.option("--out", default=None, help="Directory for the report and supervisors.")
@click.option("--step2b", is_flag=True, help="Also extend E_k for the observer property.")
@click.option("--prefix-closed", is_flag=True, help="Use the prefix-closed route.")
@click.pass_context
def coordinate(ctx, problem, out, step2b, prefix_closed):
    """Full pipeline: coordinator, triplet, supervisors, nonblocking coordinator."""
    model = _load_problem(problem)
    if step2b:
        model = model.model_copy(update={"step2b": True})
    if prefix_closed:
        model = model.model_copy(update={"prefix_closed": True})
    resp = _post(ctx, "/coordinate", model.model_dump())
    report = resp.json()
    for name, verdict in report["verdicts"].items():
        line = f"{name}: {verdict['status']}"
        if verdict.get("witness"):
            line += f"  witness={json.dumps(verdict['witness'])}"
        click.echo(line)
    for note in report.get("notes", []):
        click.echo(f"note: {note}")
    if report.get("supervisor_states"):
        click.echo(f"local supervisor states: {report['supervisor_states']}")
    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
        sups = report.get("supervisors")
        if sups:
            _write_model(outdir / "supervisor_k.json", sups["coordinator"])
            for i, s in enumerate(sups["locals"], start=1):
                _write_model(outdir / f"supervisor_{i}.json", s)
        if report.get("supremal"):
            _write_model(outdir / "supremal.json", report["supremal"])
        if report.get("nonblocking_coordinator"):
            _write_model(outdir / "nonblocking_coordinator.json",
                         report["nonblocking_coordinator"])
        click.echo(f"report written to {outdir}")


def _write_model(path: Path, payload: dict):
    path.write_text(AutomatonModel.model_validate(payload).canonical_json())


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--instances", default=100, show_default=True)
@click.option("--bound", default=6, show_default=True)
@click.pass_context
def oracle(ctx, seed, instances, bound):
    """Cross-validate the algorithms against the brute-force oracles."""
    resp = _post(ctx, "/oracle", {"seed": seed, "instances": instances, "bound": bound})
    body = resp.json()
    for key, value in body["detail"].items():
        click.echo(f"{key}: {value}")
    ctx.exit(0 if body["mismatches"] == 0 else 1)


@main.command()
@click.option("--out", required=True, help="Directory to materialize fixtures into.")
@click.option("--name", default=None, help="Single bundle to write (all otherwise).")
@click.pass_context
def corpus(ctx, out, name):
    """Write the bundled worked examples as automaton and problem files."""
    from . import corpus as corpus_mod
    from .service.app import bundle_response

    names = [name] if name else sorted(corpus_mod.BUNDLES)
    outdir = Path(out)
    for n in names:
        try:
            bundle = corpus_mod.load(n)
        except KeyError as exc:
            raise click.ClickException(str(exc)) from exc
        target = outdir / n
        target.mkdir(parents=True, exist_ok=True)
        payload = bundle_response(bundle)
        for fname, model in payload.automata.items():
            (target / f"{fname}.json").write_text(model.canonical_json())
        if payload.problem is not None:
            pm = payload.problem
            file_model = ProblemFileModel(
                events=pm.events,
                plants=[f"plant{i}.json" for i in range(1, len(pm.plants) + 1)],
                specification="spec.json",
                coordinator="coordinator.json" if pm.coordinator else None,
                coordinator_events=pm.coordinator_events,
            )
            (target / "problem.json").write_text(
                file_model.model_dump_json(indent=2) + "\n")
        if payload.notes:
            (target / "notes.txt").write_text("\n".join(payload.notes) + "\n")
        click.echo(f"wrote {target}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("descoord.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
