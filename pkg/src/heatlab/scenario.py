"""Headless scenario runs: configuration, execution, artifacts, reporting.

A scenario is one JSON file describing the simulated span, the tariff data,
the simulated households (one engine each), scripted operator actions, and
the attack schedule.  Runs are deterministic: the same scenario and seed
produce byte-identical CSV artifacts.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from . import attacks as attacks_mod
from . import tariff as tariff_mod
from .attacks import AttackKind, AttackSpec
from .engine import AgentAction, Engine, command_from_record
from .events import EventKind, render_notification
from .model import Origin
from .plant import AgentPolicy, AnalysisError, ThermalConstants, draw_action_times, rationality_regression
from .schedule import WEEKDAY_NAMES
from .tariff import PriceSeries


class ScenarioCheckError(ValueError):
    """Scenario fails validation before any simulation starts."""


@dataclass(frozen=True)
class ScriptedAction:
    at: datetime
    household: int | None  # None applies to every household
    command_record: dict


@dataclass
class Scenario:
    name: str
    start: datetime
    duration: timedelta
    seed: int
    phase1: timedelta
    price_spec: dict
    agents: list[AgentPolicy]
    attacks: list[AttackSpec]
    actions: list[ScriptedAction]
    thermal: ThermalConstants
    initial_temperature: float
    base_dir: Path
    households: int | None = None  # defaults to one per agent (min 1)

    @property
    def end(self) -> datetime:
        return self.start + self.duration

    @property
    def phase1_end(self) -> datetime:
        return min(self.start + self.phase1, self.end)


def _parse_attack(entry: dict) -> AttackSpec:
    duration = entry.get("duration_minutes")
    return AttackSpec(
        kind=AttackKind(entry["kind"]),
        start=tariff_mod.parse_timestamp(entry["start"]),
        count=entry.get("count", 40),
        low=entry.get("low", 7.5),
        high=entry.get("high", 10.0),
        multiplier=entry.get("multiplier", 3.0),
        duration=timedelta(minutes=duration) if duration is not None else None,
    )


def _parse_action(entry: dict) -> ScriptedAction:
    entry = dict(entry)
    at = tariff_mod.parse_timestamp(entry.pop("at"))
    household = entry.pop("household", None)
    action = entry.pop("action")
    if action == "adjust-setpoint":
        record = {"type": "adjust-setpoint", "value": entry["value"], "origin": "user", "visible": True}
    elif action == "set-mode":
        record = {"type": "set-mode", "mode": entry["mode"]}
    elif action == "reset-profile":
        record = {"type": "reset-profile", "profile": entry.get("profile")}
    elif action == "clear-day":
        record = {"type": "clear-day", "day": WEEKDAY_NAMES.index(entry["day"])}
    elif action == "copy-day":
        record = {
            "type": "copy-day",
            "from_day": WEEKDAY_NAMES.index(entry["from_day"]),
            "to_day": WEEKDAY_NAMES.index(entry["to_day"]),
        }
    elif action == "edit-day":
        def minutes(text: str) -> int:
            hours, _, mins = text.partition(":")
            return int(hours) * 60 + int(mins)

        record = {
            "type": "edit-day",
            "day": WEEKDAY_NAMES.index(entry["day"]),
            "slots": [(minutes(s["start"]), minutes(s["end"]), s["profile"]) for s in entry["slots"]],
        }
    else:
        raise ScenarioCheckError(f"unknown scripted action {action!r}")
    return ScriptedAction(at=at, household=household, command_record=record)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        thermal = ThermalConstants(**raw.get("thermal", {}))
        agents = [AgentPolicy(**a) for a in raw.get("agents", [])]
        scenario = Scenario(
            name=raw.get("name", path.stem),
            start=tariff_mod.parse_timestamp(raw["start"]),
            duration=timedelta(days=raw["duration_days"]),
            seed=int(raw.get("seed", 0)),
            phase1=timedelta(days=raw.get("phase1_days", 21)),
            price_spec=raw["prices"],
            agents=agents,
            attacks=[_parse_attack(a) for a in raw.get("attacks", [])],
            actions=[_parse_action(a) for a in raw.get("actions", [])],
            thermal=thermal,
            initial_temperature=raw.get("initial_temperature", 18.0),
            base_dir=path.parent,
            households=raw.get("households"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioCheckError(f"bad scenario file {path}: {exc}") from exc
    return scenario


def scenario_prices(scenario: Scenario) -> PriceSeries:
    spec = scenario.price_spec
    if "file" in spec:
        file_path = Path(spec["file"])
        if not file_path.is_absolute():
            file_path = scenario.base_dir / file_path
        return tariff_mod.load_prices(
            file_path,
            year_offset=spec.get("year_offset", 0),
            region_tag=spec.get("region_tag", ""),
        )
    if "synthetic" in spec:
        syn = spec["synthetic"]
        return tariff_mod.synthetic_prices(
            start=tariff_mod.parse_timestamp(syn.get("start")) if syn.get("start") else scenario.start,
            days=syn.get("days", int(scenario.duration.days) + 1),
            seed=syn.get("seed", scenario.seed),
        )
    raise ScenarioCheckError("prices must name a 'file' or a 'synthetic' generator")


def validate_scenario(scenario: Scenario, prices: PriceSeries | None = None) -> PriceSeries:
    """Check the attack spacing rule and tariff coverage; returns the prices."""
    attacks_mod.validate_schedule(scenario.attacks)
    for spec in scenario.attacks:
        if not scenario.start <= spec.start < scenario.end:
            raise ScenarioCheckError(f"attack at {spec.start.isoformat()} lies outside the run")
    prices = prices if prices is not None else scenario_prices(scenario)
    if scenario.duration.total_seconds() > 0 and not prices.covers(scenario.start, scenario.end):
        lo, hi = prices.coverage
        raise ScenarioCheckError(
            f"price data covers [{lo.isoformat()}, {hi.isoformat()}) "
            f"but the run needs [{scenario.start.isoformat()}, {scenario.end.isoformat()})"
        )
    return prices


ACTIVITY_LABELS = (
    "Schedule edits",
    "Setpoint adjustments",
    "Mode changes (to on)",
    "Mode changes (to off)",
    "Mode changes (to auto)",
    "Profile resets (one profile)",
    "Profile resets (all profiles)",
)


def _classify(record: dict) -> str | None:
    """Map one event to an activity label (None if it is not user activity)."""
    kind = record["kind"]
    payload = record["payload"]
    if kind == EventKind.SCHEDULE_EDIT.value:
        return "Schedule edits"
    if kind == EventKind.USER_SETPOINT.value and payload.get("origin") == Origin.USER.value:
        return "Setpoint adjustments"
    if kind == EventKind.USER_MODE.value:
        return f"Mode changes (to {payload.get('mode')})"
    if kind == EventKind.PROFILE_RESET.value:
        return "Profile resets (one profile)" if payload.get("scope") == "one" else None
    return None


def count_activities(records: list[dict], start: datetime, end: datetime) -> dict[str, int]:
    """Per-label activity counts for events with start <= at < end."""
    counts = {label: 0 for label in ACTIVITY_LABELS}
    reset_all_instants = set()
    for record in records:
        at = tariff_mod.parse_timestamp(record["at"])
        if not start <= at < end:
            continue
        label = _classify(record)
        if label is not None:
            counts[label] += 1
        if (
            record["kind"] == EventKind.PROFILE_RESET.value
            and record["payload"].get("scope") == "all"
        ):
            reset_all_instants.add(record["at"])
    counts["Profile resets (all profiles)"] = len(reset_all_instants)
    return counts


def _fmt(value: float) -> str:
    return str(value)


def run_scenario(scenario: Scenario, out_dir: str | Path) -> dict:
    """Simulate every household and write the CSV artifacts; returns the manifest."""
    prices = validate_scenario(scenario)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    households = scenario.households or max(1, len(scenario.agents))
    engines: list[Engine] = []
    for i in range(households):
        engine = Engine(
            prices,
            start=scenario.start,
            seed=np.random.SeedSequence([scenario.seed, i, 2]).generate_state(4).tolist(),
            thermal=scenario.thermal,
            initial_temperature=scenario.initial_temperature,
            attack_specs=scenario.attacks,
        )
        if i < len(scenario.agents):
            policy = scenario.agents[i]
            times_rng = np.random.default_rng(np.random.SeedSequence([scenario.seed, i, 1]))
            for at in draw_action_times(policy, scenario.start, scenario.end, times_rng):
                engine.submit(
                    AgentAction(
                        true_bias=policy.true_bias,
                        true_slope=policy.true_slope,
                        noise_sd=policy.noise_sd,
                        actions_per_day=policy.actions_per_day,
                    ),
                    at=at,
                )
        for action in scenario.actions:
            if action.household is None or action.household == i:
                engine.submit(command_from_record(action.command_record), at=action.at)
        engine.advance_to(scenario.end)
        engines.append(engine)

    _write_events_csv(out / "events.csv", engines)
    _write_model_timeline_csv(out / "model_timeline.csv", engines)
    _write_samples_csv(out / "samples.csv", engines)
    _write_regression_csv(out / "regression.csv", engines)
    records_by_household = [
        [
            {"at": r.at.isoformat(), "kind": r.kind.value, "payload": r.payload}
            for r in engine.log.records
        ]
        for engine in engines
    ]
    summary = summarize_activity(records_by_household, scenario.start, scenario.phase1_end, scenario.end)
    _write_summary_csv(out / "summary.csv", summary)

    manifest = {
        "name": scenario.name,
        "seed": scenario.seed,
        "households": households,
        "start": scenario.start.isoformat(),
        "phase1_end": scenario.phase1_end.isoformat(),
        "end": scenario.end.isoformat(),
        "events": sum(len(e.log.records) for e in engines),
        "artifacts": ["events.csv", "model_timeline.csv", "samples.csv", "regression.csv", "summary.csv"],
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def _write_events_csv(path: Path, engines: list[Engine]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["household", "id", "at", "category", "kind", "visible", "message", "payload"])
        for i, engine in enumerate(engines):
            for r in engine.log.records:
                writer.writerow(
                    [
                        i,
                        r.id,
                        r.at.isoformat(),
                        r.category.value,
                        r.kind.value,
                        int(r.visible),
                        render_notification(r),
                        json.dumps(r.payload, sort_keys=True),
                    ]
                )


def _write_model_timeline_csv(path: Path, engines: list[Engine]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["household", "at", "profile", "bias_mean", "slope_mean", "cov_bias", "cov_cross", "cov_slope", "input_count"]
        )
        for i, engine in enumerate(engines):
            for at, profile, record in engine.model_timeline:
                cov = record["covariance"]
                writer.writerow(
                    [
                        i,
                        at.isoformat(),
                        profile.value,
                        _fmt(record["mean"][0]),
                        _fmt(record["mean"][1]),
                        _fmt(cov[0][0]),
                        _fmt(cov[0][1]),
                        _fmt(cov[1][1]),
                        record["input_count"],
                    ]
                )


def _write_samples_csv(path: Path, engines: list[Engine]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["household", "at", "temperature", "valve_open"])
        for i, engine in enumerate(engines):
            for s in engine.samples:
                writer.writerow([i, s.at.isoformat(), _fmt(s.temperature), int(s.valve_open)])


def _write_regression_csv(path: Path, engines: list[Engine]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["household", "n", "slope", "intercept", "p_value"])
        for i, engine in enumerate(engines):
            observations = [
                obs
                for pairs in engine.observations.values()
                for _, obs in pairs
                if obs.origin is Origin.USER
            ]
            try:
                result = rationality_regression(observations)
                writer.writerow([i, result.n, _fmt(result.slope), _fmt(result.intercept), _fmt(result.p_value)])
            except AnalysisError:
                writer.writerow([i, len(observations), "", "", ""])


def summarize_activity(
    records_by_household: list[list[dict]],
    start: datetime,
    phase1_end: datetime,
    end: datetime,
) -> list[dict]:
    """Per-activity mean/median/SD across households for each phase."""
    rows = []
    phases = (("phase1", start, phase1_end), ("phase2", phase1_end, end), ("both", start, end))
    per_phase_counts = {
        phase: [count_activities(records, lo, hi) for records in records_by_household]
        for phase, lo, hi in phases
    }
    for label in ACTIVITY_LABELS:
        row: dict = {"activity": label}
        for phase, _, _ in phases:
            values = [counts[label] for counts in per_phase_counts[phase]] or [0]
            row[f"{phase}_mean"] = statistics.fmean(values)
            row[f"{phase}_median"] = statistics.median(values)
            row[f"{phase}_sd"] = statistics.pstdev(values)
        rows.append(row)
    return rows


_SUMMARY_COLUMNS = [
    "activity",
    "phase1_mean",
    "phase1_median",
    "phase1_sd",
    "phase2_mean",
    "phase2_median",
    "phase2_sd",
    "both_mean",
    "both_median",
    "both_sd",
]


def _write_summary_csv(path: Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_SUMMARY_COLUMNS)
        for row in rows:
            writer.writerow([row[c] if c == "activity" else _fmt(row[c]) for c in _SUMMARY_COLUMNS])


def report_text(out_dir: str | Path) -> str:
    """Re-derive the activity table from run artifacts (events.csv + manifest)."""
    out = Path(out_dir)
    manifest_path = out / "manifest.json"
    events_path = out / "events.csv"
    if not manifest_path.exists() or not events_path.exists():
        raise FileNotFoundError(f"run artifacts not found in {out}")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    households: dict[int, list[dict]] = {}
    with open(events_path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            households.setdefault(int(row["household"]), []).append(
                {"at": row["at"], "kind": row["kind"], "payload": json.loads(row["payload"])}
            )
    ordered = [households.get(i, []) for i in range(manifest["households"])]
    rows = summarize_activity(
        ordered,
        tariff_mod.parse_timestamp(manifest["start"]),
        tariff_mod.parse_timestamp(manifest["phase1_end"]),
        tariff_mod.parse_timestamp(manifest["end"]),
    )
    buf = io.StringIO()
    buf.write(f"Activity summary for {manifest['name']} ({manifest['households']} household(s))\n")
    header = f"{'activity':<32}" + "".join(
        f"{phase + ' ' + stat:>16}" for phase in ("phase1", "phase2", "both") for stat in ("mean", "median", "sd")
    )
    buf.write(header + "\n")
    for row in rows:
        line = f"{row['activity']:<32}"
        for phase in ("phase1", "phase2", "both"):
            for stat in ("mean", "median", "sd"):
                line += f"{row[f'{phase}_{stat}']:>16.2f}"
        buf.write(line + "\n")
    return buf.getvalue()
