"""Command-line entry point: run, validate, and report on scenarios.

``run`` simulates a scenario headlessly and writes CSV artifacts (add
``--realtime`` to instead serve the HTTP API with the virtual clock pinned
to wall time); ``validate`` checks a scenario without running it; ``report``
prints the activity summary for an existing artifact directory.
"""

from __future__ import annotations

import argparse
import sys
import threading
import time as time_mod
from datetime import timedelta
from pathlib import Path

from .attacks import AttackScheduleError
from .scenario import ScenarioCheckError, load_scenario, report_text, run_scenario, scenario_prices, validate_scenario
from .tariff import PriceDataError


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
        if args.seed is not None:
            scenario.seed = args.seed
        if args.realtime:
            return _run_realtime(scenario, rate=args.rate)
        out_dir = Path(args.out) if args.out else Path("runs") / scenario.name
        manifest = run_scenario(scenario, out_dir)
    except (ScenarioCheckError, AttackScheduleError, PriceDataError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(manifest['artifacts'])} artifacts to {out_dir} ({manifest['events']} events)")
    return 0


def _run_realtime(scenario, rate: float) -> int:
    import uvicorn

    from .api import build_app
    from .engine import AgentAction, Engine
    from .plant import draw_action_times

    import numpy as np

    prices = validate_scenario(scenario)
    engine = Engine(
        prices,
        start=scenario.start,
        seed=np.random.SeedSequence([scenario.seed, 0, 2]).generate_state(4).tolist(),
        thermal=scenario.thermal,
        initial_temperature=scenario.initial_temperature,
        attack_specs=scenario.attacks,
    )
    if scenario.agents:
        policy = scenario.agents[0]
        rng = np.random.default_rng(np.random.SeedSequence([scenario.seed, 0, 1]))
        for at in draw_action_times(policy, scenario.start, scenario.end, rng):
            engine.submit(
                AgentAction(
                    true_bias=policy.true_bias,
                    true_slope=policy.true_slope,
                    noise_sd=policy.noise_sd,
                    actions_per_day=policy.actions_per_day,
                ),
                at=at,
            )
    app = build_app(engine)
    stop = threading.Event()

    def pace() -> None:
        wall_start = time_mod.monotonic()
        while not stop.is_set():
            elapsed = time_mod.monotonic() - wall_start
            target = scenario.start + timedelta(seconds=elapsed * rate)
            if target > scenario.end:
                target = scenario.end
            with app.state.engine_lock:
                engine.advance_to(max(target, engine.now()))
            stop.wait(0.5)

    pacer = threading.Thread(target=pace, daemon=True)
    pacer.start()
    print(f"serving on http://127.0.0.1:8000 (virtual clock at {rate}x wall time)")
    try:
        uvicorn.run(app, host="127.0.0.1", port=8000, log_level="warning")
    finally:
        stop.set()
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
        validate_scenario(scenario, scenario_prices(scenario))
    except (ScenarioCheckError, AttackScheduleError, PriceDataError, FileNotFoundError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(f"ok: {scenario.name}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    try:
        print(report_text(args.directory), end="")
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heatlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario and write artifacts")
    run.add_argument("scenario", help="path to the scenario JSON file")
    run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run.add_argument("--out", default=None, help="artifact output directory")
    run.add_argument("--realtime", action="store_true", help="serve the HTTP API at wall-clock pace")
    run.add_argument("--rate", type=float, default=1.0, help="virtual seconds per wall second in realtime mode")
    run.set_defaults(fn=_cmd_run)

    validate = sub.add_parser("validate", help="check a scenario without running it")
    validate.add_argument("scenario")
    validate.set_defaults(fn=_cmd_validate)

    report = sub.add_parser("report", help="print the activity summary for run artifacts")
    report.add_argument("directory")
    report.set_defaults(fn=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
