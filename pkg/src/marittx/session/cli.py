"""Command-line entry points: run, serve, analyze, replay."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from ..analytics import (
    PROSPECTIVE_SCENARIOS,
    classify_scenario,
    descriptive_stats,
    fit_ols,
    parse_survey_csv,
    predict,
    reference_model,
)
from ..scenario import load_scenario
from ..scenario.loader import BUNDLED_SCENARIO, load_bundled
from .orchestrator import Orchestrator, Participants, replay_session
from .store import SessionStore


def _load_scenario_with_overrides(spec: str, seed: int | None, mode: str | None):
    """Load a scenario file (or bundled id), baking overrides into the document.

    Overrides go into the document itself so the stored per-session copy
    replays under exactly the configuration that ran.
    """
    path = Path(spec)
    if path.exists():
        text = path.read_text(encoding="utf-8")
    else:
        try:
            from importlib import resources

            text = (
                resources.files("marittx.scenario")
                .joinpath(f"data/{spec}.json")
                .read_text(encoding="utf-8")
            )
        except FileNotFoundError:
            raise FileNotFoundError(f"scenario not found: {spec}") from None
    if seed is None and mode is None:
        return load_scenario(text)
    doc = json.loads(text)
    if seed is not None:
        doc["simulation"]["baseSeed"] = seed
    if mode is not None:
        doc["simulation"]["mode"] = mode
    return load_scenario(json.dumps(doc))


def _cmd_run(args) -> int:
    if not args.headless:
        print("interactive runs happen through the facilitator console; "
              "use --headless here or start `marittx serve`", file=sys.stderr)
        return 2
    scenario = _load_scenario_with_overrides(args.scenario, args.seed, args.mode)
    orchestrator = Orchestrator(args.out)
    orchestrator.register_scenario(scenario)
    participants = Participants(args.participants, args.observers, args.group_size)
    session = orchestrator.create_session(scenario.id, participants,
                                          session_id=args.session_id)
    sid = session.session_id
    print(f"session {sid} | scenario {scenario.id} | mode {scenario.sim.mode.value} "
          f"| seed {scenario.sim.base_seed} | {scenario.event_count} events x "
          f"{scenario.sim.runs_per_event} runs")

    orchestrator.advance(sid, "BEGIN_EXECUTION")
    for index in range(1, scenario.event_count + 1):
        orchestrator.advance(sid, "NEXT_STEP")  # -> MODEL_APPLICATION (runs attach)
        orchestrator.advance(sid, "NEXT_STEP")  # -> INTERPRETATION
        orchestrator.advance(sid, "NEXT_STEP")  # -> DISCUSSION
        event = scenario.event(index)
        chosen = None
        if args.coa_policy == "first" and event.courses:
            chosen = event.courses[0].id
        elif args.coa_policy == "best" and event.courses:
            scored = []
            for course in event.courses:
                result = orchestrator.whatif(sid, course.id, scenario.sim.horizon_per_event)
                scored.append((result["score"]["score"], course.id))
            scored.sort(reverse=True)
            chosen = scored[0][1]
        if chosen is not None:
            orchestrator.advance(sid, "SUBMIT_COA", {"coaId": chosen})
        orchestrator.advance(sid, "NEXT_STEP")  # -> CONCLUSIONS
        view = orchestrator.advance(sid, "NEXT_STEP")  # conclude, open next event
        cycle = view["cycles"][index - 1]
        runs = orchestrator.runs(sid, index)["runs"]
        last = runs[0]["samples"][-1]
        print(f"  event {index} [{event.phase.value}] course={cycle['chosenCourse'] or '-'} "
              f"availability={last['serviceAvailability']:.3f} "
              f"risk={last['cyberRisk']:.3f}")
    view = orchestrator.advance(sid, "BEGIN_CLOSURE")
    print(f"phase: {view['phase']}")
    print(f"state hash: {view['stateHash']}")
    print(f"session dir: {Path(args.out) / sid}")
    return 0


def _cmd_replay(args) -> int:
    store_root = Path(args.store)
    store = SessionStore(store_root)
    session = replay_session(store, args.session)
    print(f"replayed {args.session}: phase {session.phase.value}, "
          f"{sum(1 for c in session.cycles if c.concluded)} events concluded")
    print(f"state hash: {session.state_hash()}")
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    orchestrator = Orchestrator(args.store)
    orchestrator.register_scenario(load_bundled())
    for extra in args.scenario or ():
        orchestrator.register_scenario(load_scenario(Path(extra).read_text(encoding="utf-8")))
    port = args.port if args.port is not None else int(os.environ.get("MARITTX_PORT", "8000"))
    print(f"serving on http://{args.host}:{port} (store: {args.store})")
    serve(orchestrator, host=args.host, port=port)
    return 0


def _format_number(value, digits=4):
    return f"{value:.{digits}f}"


def _cmd_analyze(args) -> int:
    report: dict = {}
    lines: list[str] = []
    rows = None
    if args.survey:
        rows = parse_survey_csv(Path(args.survey).read_text(encoding="utf-8"))
        stats = descriptive_stats(rows)
        report["descriptive"] = stats
        lines.append(f"survey rows: {stats['n']}")
        lines.append("binary proportions: " + "  ".join(
            f"{k}={v:.3f}" for k, v in stats["proportions"].items()))
        lines.append("section composites: " + "  ".join(
            f"{k}={v:.3f}" for k, v in stats["composites"].items()))

    if args.fit:
        if rows is None:
            print("error: --fit requires --survey", file=sys.stderr)
            return 2
        model = fit_ols(rows)
        report["fit"] = model.to_wire()
        lines.append("fitted model (response: overall satisfaction):")
        lines.append(f"  intercept = {_format_number(model.intercept)}")
        for name, coefficient in zip(model.predictor_names, model.coefficients):
            lines.append(f"  {name} = {_format_number(coefficient)}")
        lines.append(f"  R2={model.r_squared:.4f} adjR2={model.adjusted_r_squared:.4f} "
                     f"residStd={model.residual_std_dev:.4f} "
                     f"multipleR={model.multiple_correlation:.4f}")

    if args.paper_model:
        model = reference_model()
        evaluations = {
            scenario.name: predict(model, scenario.values)
            for scenario in PROSPECTIVE_SCENARIOS
        }
        report["referenceModel"] = {
            "model": model.to_wire(),
            "scenarioPredictions": evaluations,
        }
        lines.append("built-in reference model:")
        lines.append(f"  intercept = {_format_number(model.intercept)}")
        for name, coefficient in zip(model.predictor_names, model.coefficients):
            lines.append(f"  {name} = {_format_number(coefficient)}")
        lines.append(f"  reported: R2={model.r_squared} adjR2={model.adjusted_r_squared} "
                     f"residStd={model.residual_std_dev} multipleR={model.multiple_correlation}")
        lines.append("  note: multipleR is stored as the multiple correlation (sqrt R2); "
                     "the source phrasing is ambiguous between that and inter-predictor "
                     "correlation")
        for scenario in PROSPECTIVE_SCENARIOS:
            lines.append(f"  {scenario.name}: predicted={evaluations[scenario.name]:.4f} "
                         f"reference={scenario.reference_y}")

    if args.scenarios:
        if rows is None:
            print("error: --scenarios requires --survey", file=sys.stderr)
            return 2
        counts = {scenario.name: 0 for scenario in PROSPECTIVE_SCENARIOS}
        classified = []
        for row in rows:
            name, distance = classify_scenario(row.predictors())
            counts[name] += 1
            classified.append({"scenario": name, "distance": distance})
        report["classification"] = {"counts": counts, "rows": classified}
        lines.append("prospective-scenario classification: " + "  ".join(
            f"{name}={count}" for name, count in counts.items()))

    if not lines:
        print("nothing to do: pass --survey and/or --paper-model", file=sys.stderr)
        return 2
    print("\n".join(lines))
    if args.json_out:
        Path(args.json_out).write_text(
            json.dumps(report, indent=2, sort_keys=True), encoding="utf-8")
        print(f"wrote {args.json_out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marittx",
        description="Hybrid tabletop-exercise platform for maritime cyber crises",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="auto-play a full exercise headlessly")
    run.add_argument("--scenario", default=BUNDLED_SCENARIO,
                     help="scenario file path or bundled scenario id")
    run.add_argument("--headless", action="store_true",
                     help="run every event cycle without interaction")
    run.add_argument("--seed", type=int, default=None, help="override the scenario base seed")
    run.add_argument("--mode", choices=["meanfield", "agent"], default=None,
                     help="override the simulation mode")
    run.add_argument("--out", default="sessions", help="session store directory")
    run.add_argument("--coa-policy", choices=["first", "none", "best"], default="first",
                     help="course-of-action auto-choice per event")
    run.add_argument("--session-id", default=None)
    run.add_argument("--participants", type=int, default=10, metavar="NP")
    run.add_argument("--observers", type=int, default=0, metavar="NO")
    run.add_argument("--group-size", default="3-4", metavar="GS")
    run.set_defaults(func=_cmd_run)

    replay = sub.add_parser("replay", help="rebuild a session from its log and print the hash")
    replay.add_argument("--store", default="sessions", help="session store directory")
    replay.add_argument("--session", required=True, help="session id inside the store")
    replay.set_defaults(func=_cmd_replay)

    serve = sub.add_parser("serve", help="start the orchestrator HTTP service")
    serve.add_argument("--port", type=int, default=None,
                       help="listen port (or MARITTX_PORT env var; default 8000)")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--store", default="sessions", help="session store directory")
    serve.add_argument("--scenario", action="append",
                       help="extra scenario file(s) to register")
    serve.set_defaults(func=_cmd_serve)

    analyze = sub.add_parser("analyze", help="survey statistics and model evaluation")
    analyze.add_argument("--survey", default=None, help="survey CSV (header Y,X1,...,X19)")
    analyze.add_argument("--fit", action="store_true",
                         help="fit the satisfaction regression on the survey rows")
    analyze.add_argument("--paper-model", "--reference-model", dest="paper_model",
                         action="store_true",
                         help="evaluate the built-in published reference model")
    analyze.add_argument("--scenarios", action="store_true",
                         help="classify each row against the prospective scenarios")
    analyze.add_argument("--json-out", default=None, help="also write a structured JSON report")
    analyze.set_defaults(func=_cmd_analyze)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
