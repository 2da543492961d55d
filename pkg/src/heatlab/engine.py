"""Single-writer simulation engine on the virtual clock.

All mutable state -- controller, model bank, schedule, room, logs -- lives
behind one command loop that processes events in strict virtual-time order:
scheduled commands (user actions, agent actions, attack injections), the
one-minute worker that pre-generates chart frames, the five-minute sensor
poll, half-hourly price-slot boundaries, mode-timer expiries, and evasion
window edges.  With a fixed seed the whole run is deterministic.
"""

from __future__ import annotations

import hashlib
import heapq
import json
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Iterable

import numpy as np

from . import attacks as attacks_mod
from . import control as control_mod
from . import model as model_mod
from . import schedule as schedule_mod
from . import tariff as tariff_mod
from . import xai as xai_mod
from .attacks import AttackKind, AttackSpec, VisibilityMask
from .control import ControllerState, Mode, ControlRejected, ValidationError
from .events import EventKind, EventLog, FlashKind, render_flash
from .model import Hyperparameters, ModelState, Observation, Origin
from .plant import AgentPolicy, RoomState, ThermalConstants, VirtualClock, preferred_setpoint, step_thermal
from .schedule import Profile, WeekSchedule
from .tariff import MissingDataError, PriceSeries

MINUTE = timedelta(minutes=1)
AI_TICK_PERIOD = MINUTE
SENSOR_POLL_PERIOD = timedelta(minutes=5)
DEFAULT_ADMIN_TOKEN = "local-admin-token"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdjustSetpoint:
    value: float
    origin: str = Origin.USER.value
    visible: bool = True


@dataclass(frozen=True)
class SetMode:
    mode: str


@dataclass(frozen=True)
class EditDay:
    day: int
    slots: tuple  # ((start, end, profile-name), ...)


@dataclass(frozen=True)
class CopyDay:
    from_day: int
    to_day: int


@dataclass(frozen=True)
class ClearDay:
    day: int


@dataclass(frozen=True)
class SetWeek:
    payload_json: str


@dataclass(frozen=True)
class ResetProfile:
    profile: str | None  # None resets all five


@dataclass(frozen=True)
class AgentAction:
    true_bias: float
    true_slope: float
    noise_sd: float
    actions_per_day: float


@dataclass(frozen=True)
class PriceEdge:
    """No-op marker forcing a tick exactly at an evasion window boundary."""


Command = (
    AdjustSetpoint | SetMode | EditDay | CopyDay | ClearDay | SetWeek | ResetProfile | AgentAction | PriceEdge
)

_COMMAND_TYPES = {
    "adjust-setpoint": AdjustSetpoint,
    "set-mode": SetMode,
    "edit-day": EditDay,
    "copy-day": CopyDay,
    "clear-day": ClearDay,
    "set-week": SetWeek,
    "reset-profile": ResetProfile,
    "agent-action": AgentAction,
    "price-edge": PriceEdge,
}
_COMMAND_TAGS = {cls: tag for tag, cls in _COMMAND_TYPES.items()}


def command_record(cmd: Command) -> dict:
    body = {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(cmd).items()}
    return {"type": _COMMAND_TAGS[type(cmd)], **body}


def command_from_record(record: dict) -> Command:
    record = dict(record)
    cls = _COMMAND_TYPES[record.pop("type")]
    if cls is EditDay:
        record["slots"] = tuple(tuple(s) for s in record["slots"])
    return cls(**record)


@dataclass(frozen=True)
class FlashRecord:
    id: int
    at: datetime
    kind: FlashKind
    text: str


@dataclass
class Sample:
    at: datetime
    temperature: float
    valve_open: bool


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------

class Engine:
    """Owns all mutable state; see module docstring for the event order."""

    def __init__(
        self,
        prices: PriceSeries,
        *,
        start: datetime,
        seed: int = 0,
        hyper: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
        thermal: ThermalConstants = ThermalConstants(),
        step: timedelta = MINUTE,
        initial_temperature: float = 18.0,
        attack_specs: Iterable[AttackSpec] = (),
        admin_token: str = DEFAULT_ADMIN_TOKEN,
    ) -> None:
        if start.tzinfo is None:
            start = start.replace(tzinfo=timezone.utc)
        self.prices = prices
        self.hyper = hyper
        self.thermal = thermal
        self.admin_token = admin_token
        self.clock = VirtualClock(now=start, step=step)
        self.start = start
        self.week: WeekSchedule = schedule_mod.default_week()
        self.bank: dict[Profile, ModelState] = {p: model_mod.default_model(hyper) for p in Profile}
        self.controller: ControllerState = control_mod.initial_controller(self.week, start)
        self.room = RoomState(temperature=initial_temperature, outside_temperature=thermal.outside, valve_open=False)
        self.log = EventLog()
        self.flashes: list[FlashRecord] = []
        self._next_flash_id = 1
        self.mask = VisibilityMask()
        self.observations: dict[Profile, list[tuple[int, Observation]]] = {p: [] for p in Profile}
        self._next_obs_id = 1
        self.attack_specs: list[AttackSpec] = []
        self._pending: list[tuple[datetime, int, Command]] = []
        self._seq = 0
        self.rng = np.random.default_rng(seed)
        self.samples: list[Sample] = []
        self.model_timeline: list[tuple[datetime, Profile, dict]] = []
        self.frames: dict[Profile, list[xai_mod.XaiFrame]] = {}
        self._dirty: set[Profile] = set(Profile)
        self._last_thermal = start
        self._next_ai = start + AI_TICK_PERIOD
        self._next_sensor = start + SENSOR_POLL_PERIOD
        self._next_step = start + step

        specs = list(attack_specs)
        attacks_mod.validate_schedule(specs)
        for spec in specs:
            self._schedule_attack(spec)
        self._tick(start)
        self._regenerate_frames()

    # -- scheduling ---------------------------------------------------------

    def now(self) -> datetime:
        return self.clock.now

    def submit(self, command: Command, at: datetime | None = None) -> None:
        at = at if at is not None else self.clock.now
        if at < self.clock.now:
            raise ValueError("cannot schedule a command in the past")
        self._seq += 1
        heapq.heappush(self._pending, (at, self._seq, command))

    def schedule_attack(self, spec: AttackSpec) -> None:
        """Register an attack (runtime or scenario); enforces the 24h spacing."""
        if spec.start < self.clock.now:
            raise ValueError("attack start lies in the past")
        attacks_mod.validate_schedule(self.attack_specs + [spec])
        self._schedule_attack(spec)

    def _schedule_attack(self, spec: AttackSpec) -> None:
        self.attack_specs.append(spec)
        if spec.kind in attacks_mod.POISONING_KINDS:
            origin = attacks_mod.injection_origin(spec.kind)
            visible = spec.kind is AttackKind.SIMPLE_POISONING
            for at, value in attacks_mod.plan_injections(spec):
                self.submit(AdjustSetpoint(value=value, origin=origin.value, visible=visible), at=at)
        else:
            self.submit(PriceEdge(), at=spec.start)
            self.submit(PriceEdge(), at=spec.end)

    # -- price view ---------------------------------------------------------

    def effective_price_at(self, t: datetime) -> float | None:
        try:
            base = tariff_mod.price_at(self.prices, t)
        except MissingDataError:
            return None
        return attacks_mod.effective_price(base, attacks_mod.active_evasion(self.attack_specs, t), t)

    # -- event loop ---------------------------------------------------------

    def advance_to(self, target: datetime) -> None:
        if target < self.clock.now:
            raise ValueError("cannot advance backwards")
        if self._drain_due(self.clock.now):
            self._tick(self.clock.now)
        while self.clock.now < target:
            t = self._next_event_time(target)
            self._advance_thermal(t)
            self.clock.advance_to(t)
            self._drain_due(t)
            self._tick(t)
            while self._next_ai <= t:
                self._ai_worker_tick(t)
                self._next_ai += AI_TICK_PERIOD
            while self._next_sensor <= t:
                self._sensor_poll_tick(t)
                self._next_sensor += SENSOR_POLL_PERIOD
            while self._next_step <= t:
                self._next_step += self.clock.step

    def run_for(self, duration: timedelta) -> None:
        self.advance_to(self.clock.now + duration)

    def _next_event_time(self, target: datetime) -> datetime:
        now = self.clock.now
        candidates = [target, self._next_ai, self._next_sensor, self._next_step]
        if self._pending:
            candidates.append(self._pending[0][0])
        boundary = tariff_mod.slot_start(now) + tariff_mod.SLOT
        candidates.append(boundary)
        expiry = self.controller.mode_state.expires_at
        if expiry is not None and expiry > now:
            candidates.append(expiry)
        return min(c for c in candidates if c > now)

    def _drain_due(self, t: datetime) -> int:
        drained = 0
        while self._pending and self._pending[0][0] <= t:
            at, _, command = heapq.heappop(self._pending)
            self._apply(command, at, interactive=False)
            drained += 1
        return drained

    def _advance_thermal(self, t: datetime) -> None:
        if t <= self._last_thermal:
            return
        dt = t - self._last_thermal
        mode = self.controller.mode
        if mode is Mode.ON:
            self.room = step_thermal(self.room, dt, force_valve=True, constants=self.thermal)
        elif mode is Mode.OFF:
            self.room = step_thermal(self.room, dt, force_valve=False, constants=self.thermal)
        else:
            self.room = step_thermal(self.room, dt, setpoint=self.controller.setpoint, constants=self.thermal)
        self._last_thermal = t

    def _tick(self, t: datetime) -> None:
        result = control_mod.controller_tick(
            self.controller, self.bank, self.week, self.effective_price_at(t), t, self.hyper
        )
        self.controller = result.state
        self._append_drafts(t, result.events, result.flashes)

    def _ai_worker_tick(self, t: datetime) -> None:
        """Pre-generate chart frames for profiles whose inputs changed."""
        if self._dirty:
            self._regenerate_frames()

    def _sensor_poll_tick(self, t: datetime) -> None:
        self.samples.append(Sample(at=t, temperature=self.room.temperature, valve_open=self.room.valve_open))

    def _regenerate_frames(self) -> None:
        for profile in sorted(self._dirty, key=lambda p: p.value):
            pairs = self.observations[profile]
            self.frames[profile] = xai_mod.frames(
                [obs for _, obs in pairs],
                self.hyper,
                hidden_ids=self.mask.hidden_ids,
                ids=[obs_id for obs_id, _ in pairs],
            )
        self._dirty.clear()

    # -- command application --------------------------------------------------

    def execute(self, command: Command) -> None:
        """Apply a command immediately at the current virtual instant."""
        self._apply(command, self.clock.now, interactive=True)
        self._tick(self.clock.now)

    def _append_drafts(self, at: datetime, events, flashes) -> None:
        for kind, payload, visible in events:
            self.log.append(at, kind, payload, visible=visible)
        for kind, payload in flashes:
            record = FlashRecord(
                id=self._next_flash_id, at=at, kind=kind, text=render_flash(kind, payload)
            )
            self._next_flash_id += 1
            self.flashes.append(record)

    def _dead_letter(self, at: datetime, command: Command, reason: str) -> None:
        self.log.append(
            at,
            EventKind.INTEGRITY,
            {"message": f"Command {_COMMAND_TAGS[type(command)]} rejected: {reason}"},
            visible=True,
        )

    def _apply(self, command: Command, at: datetime, interactive: bool) -> None:
        try:
            self._apply_inner(command, at)
        except (ControlRejected, MissingDataError):
            # Disabled controller / missing coverage: a human's input would
            # simply bounce off the UI, so scheduled actors skip silently.
            if interactive:
                raise
        except (ValidationError, model_mod.RejectedInput, schedule_mod.ScheduleError) as exc:
            if interactive:
                raise
            self._dead_letter(at, command, str(exc))

    def _apply_inner(self, command: Command, at: datetime) -> None:
        if isinstance(command, AdjustSetpoint):
            self._apply_adjust(command.value, Origin(command.origin), command.visible, at)
        elif isinstance(command, AgentAction):
            price = self.effective_price_at(at)
            if price is None:
                raise MissingDataError("no price at agent action time")
            policy = AgentPolicy(
                true_bias=command.true_bias,
                true_slope=command.true_slope,
                noise_sd=command.noise_sd,
                actions_per_day=command.actions_per_day,
            )
            value = preferred_setpoint(policy, price, self.rng)
            self._apply_adjust(value, Origin.USER, True, at)
        elif isinstance(command, SetMode):
            result = control_mod.set_mode(self.controller, Mode(command.mode), at)
            self.controller = result.state
            self._append_drafts(at, result.events, result.flashes)
        elif isinstance(command, EditDay):
            slots = tuple(
                schedule_mod.TimeSlot(int(s), int(e), Profile(p)) for s, e, p in command.slots
            )
            self.week = schedule_mod.edit_day(self.week, command.day, slots)
            self._schedule_mutation(at, [command.day])
        elif isinstance(command, CopyDay):
            self.week = schedule_mod.copy_day(self.week, command.from_day, command.to_day)
            self._schedule_mutation(at, [command.to_day])
        elif isinstance(command, ClearDay):
            self.week = schedule_mod.clear_day(self.week, command.day)
            self._schedule_mutation(at, [command.day])
        elif isinstance(command, SetWeek):
            proposed = schedule_mod.from_payload(json.loads(command.payload_json))
            changed = [i for i in range(7) if proposed.days[i] != self.week.days[i]]
            self.week = proposed
            self._schedule_mutation(at, changed)
        elif isinstance(command, ResetProfile):
            target = Profile(command.profile) if command.profile is not None else None
            bank, events, flashes = control_mod.reset_profiles(self.bank, target, self.hyper)
            self.bank = bank
            for profile in [target] if target is not None else list(Profile):
                self.observations[profile] = []
                self._dirty.add(profile)
                self.model_timeline.append((at, profile, self.bank[profile].record()))
            self._append_drafts(at, events, flashes)
        elif isinstance(command, PriceEdge):
            pass  # the post-command tick sees the new effective price
        else:
            raise ValidationError(f"unknown command {command!r}")

    def _apply_adjust(self, value: float, origin: Origin, visible: bool, at: datetime) -> None:
        profile = schedule_mod.active_profile(self.week, at)
        price = self.effective_price_at(at)
        if price is None:
            raise MissingDataError("no price at adjustment time")
        result = control_mod.user_adjust_setpoint(
            self.controller, self.bank[profile], value, price, at, self.hyper, origin=origin, visible=visible
        )
        self.controller = result.state
        self.bank[profile] = result.model
        obs_id = self._next_obs_id
        self._next_obs_id += 1
        self.observations[profile].append((obs_id, result.observation))
        if not visible:
            self.mask.hide(obs_id)
        self.model_timeline.append((at, profile, result.model.record()))
        self._dirty.add(profile)
        self._append_drafts(at, result.events, result.flashes)

    def _schedule_mutation(self, at: datetime, changed_days: list[int]) -> None:
        days = [schedule_mod.WEEKDAY_NAMES[d] for d in changed_days]
        self.log.append(at, EventKind.SCHEDULE_EDIT, {"days": days}, visible=True)
        flashes = [(FlashKind.SCHEDULE, {"day": name}) for name in days]
        self._append_drafts(at, [], flashes)

    # -- read-side payloads ---------------------------------------------------

    def model_bank_digest(self) -> str:
        """Stable hash of the whole model bank (attack-isolation checks)."""
        blob = json.dumps({p.value: self.bank[p].record() for p in Profile}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def flashes_since(self, last_id: int = 0) -> list[FlashRecord]:
        return [f for f in self.flashes if f.id > last_id]

    # -- snapshot (persistence) ------------------------------------------------

    def meta_record(self) -> dict:
        """Everything the four data tables don't hold, JSON-ready."""
        h = self.hyper
        th = self.thermal
        return {
            "start": self.start.isoformat(),
            "now": self.clock.now.isoformat(),
            "step_seconds": self.clock.step.total_seconds(),
            "admin_token": self.admin_token,
            "hyper": {
                "bias_mean": h.bias_mean,
                "slope_mean": h.slope_mean,
                "bias_var": h.bias_var,
                "slope_var": h.slope_var,
                "correlation": h.correlation,
                "noise_precision": h.noise_precision,
            },
            "thermal": {
                "loss_per_hour": th.loss_per_hour,
                "heat_per_hour": th.heat_per_hour,
                "hysteresis": th.hysteresis,
                "outside": th.outside,
            },
            "week": schedule_mod.to_payload(self.week),
            "controller": {
                "mode": self.controller.mode.value,
                "expires_at": self.controller.mode_state.expires_at.isoformat()
                if self.controller.mode_state.expires_at
                else None,
                "setpoint": self.controller.setpoint,
                "active_profile": self.controller.active_profile.value,
                "last_price": self.controller.last_price,
                "price_missing": self.controller.price_missing,
                "last_auto_decision": self.controller.last_auto_decision.isoformat()
                if self.controller.last_auto_decision
                else None,
            },
            "room": {
                "temperature": self.room.temperature,
                "outside_temperature": self.room.outside_temperature,
                "valve_open": self.room.valve_open,
            },
            "bank": {p.value: self.bank[p].record() for p in Profile},
            "mask": sorted(self.mask.hidden_ids),
            "next_obs_id": self._next_obs_id,
            "next_flash_id": self._next_flash_id,
            "seq": self._seq,
            "attacks": [
                {
                    "kind": s.kind.value,
                    "start": s.start.isoformat(),
                    "count": s.count,
                    "low": s.low,
                    "high": s.high,
                    "multiplier": s.multiplier,
                    "duration_seconds": s.duration.total_seconds(),
                }
                for s in self.attack_specs
            ],
            "pending": [
                {"at": at.isoformat(), "seq": seq, "command": command_record(cmd)}
                for at, seq, cmd in sorted(self._pending)
            ],
            "rng_state": _jsonify_rng(self.rng.bit_generator.state),
            "flashes": [
                {"id": f.id, "at": f.at.isoformat(), "kind": f.kind.value, "text": f.text}
                for f in self.flashes
            ],
            "next_ai": self._next_ai.isoformat(),
            "next_sensor": self._next_sensor.isoformat(),
            "next_step": self._next_step.isoformat(),
            "last_thermal": self._last_thermal.isoformat(),
        }

    @classmethod
    def from_snapshot(
        cls,
        prices: PriceSeries,
        meta: dict,
        observations: list[dict],
        events: list[dict],
        samples: list[dict],
        model_timeline: list[dict],
    ) -> "Engine":
        """Rebuild a live engine from persisted state (see store module)."""
        from .events import EventRecord  # local to avoid import cycles at module load

        engine = cls.__new__(cls)
        engine.prices = prices
        engine.hyper = Hyperparameters(**meta["hyper"])
        engine.thermal = ThermalConstants(**meta["thermal"])
        engine.admin_token = meta["admin_token"]
        engine.start = tariff_mod.parse_timestamp(meta["start"])
        engine.clock = VirtualClock(
            now=tariff_mod.parse_timestamp(meta["now"]),
            step=timedelta(seconds=meta["step_seconds"]),
        )
        engine.week = schedule_mod.from_payload(meta["week"])
        c = meta["controller"]
        engine.controller = ControllerState(
            mode_state=control_mod.ModeState(
                Mode(c["mode"]),
                tariff_mod.parse_timestamp(c["expires_at"]) if c["expires_at"] else None,
            ),
            setpoint=c["setpoint"],
            active_profile=Profile(c["active_profile"]),
            last_price=c["last_price"],
            price_missing=c["price_missing"],
            last_auto_decision=tariff_mod.parse_timestamp(c["last_auto_decision"])
            if c["last_auto_decision"]
            else None,
        )
        r = meta["room"]
        engine.room = RoomState(r["temperature"], r["outside_temperature"], r["valve_open"])
        engine.bank = {Profile(name): ModelState.from_record(rec) for name, rec in meta["bank"].items()}
        engine.log = EventLog()
        engine.log.restore(
            EventRecord(
                id=e["id"],
                at=tariff_mod.parse_timestamp(e["at"]),
                kind=EventKind(e["kind"]),
                payload=e["payload"],
                visible=e["visible"],
            )
            for e in events
        )
        engine.flashes = [
            FlashRecord(
                id=f["id"],
                at=tariff_mod.parse_timestamp(f["at"]),
                kind=FlashKind(f["kind"]),
                text=f["text"],
            )
            for f in meta["flashes"]
        ]
        engine._next_flash_id = meta["next_flash_id"]
        engine.mask = VisibilityMask(hidden_ids=set(meta["mask"]))
        engine.observations = {p: [] for p in Profile}
        for o in observations:
            engine.observations[Profile(o["profile"])].append(
                (
                    o["id"],
                    Observation(
                        price=o["price"],
                        setpoint=o["setpoint"],
                        at=tariff_mod.parse_timestamp(o["at"]),
                        origin=Origin(o["origin"]),
                    ),
                )
            )
        engine._next_obs_id = meta["next_obs_id"]
        engine.attack_specs = [
            AttackSpec(
                kind=AttackKind(a["kind"]),
                start=tariff_mod.parse_timestamp(a["start"]),
                count=a["count"],
                low=a["low"],
                high=a["high"],
                multiplier=a["multiplier"],
                duration=timedelta(seconds=a["duration_seconds"]),
            )
            for a in meta["attacks"]
        ]
        engine._pending = [
            (tariff_mod.parse_timestamp(p["at"]), p["seq"], command_from_record(p["command"]))
            for p in meta["pending"]
        ]
        heapq.heapify(engine._pending)
        engine._seq = meta["seq"]
        engine.rng = np.random.default_rng(0)
        engine.rng.bit_generator.state = _unjsonify_rng(meta["rng_state"])
        engine.samples = [
            Sample(
                at=tariff_mod.parse_timestamp(s["at"]),
                temperature=s["temperature"],
                valve_open=s["valve_open"],
            )
            for s in samples
        ]
        engine.model_timeline = [
            (tariff_mod.parse_timestamp(m["at"]), Profile(m["profile"]), m["record"])
            for m in model_timeline
        ]
        engine.frames = {}
        engine._dirty = set(Profile)
        engine._regenerate_frames()
        engine._last_thermal = tariff_mod.parse_timestamp(meta["last_thermal"])
        engine._next_ai = tariff_mod.parse_timestamp(meta["next_ai"])
        engine._next_sensor = tariff_mod.parse_timestamp(meta["next_sensor"])
        engine._next_step = tariff_mod.parse_timestamp(meta["next_step"])
        return engine


def _jsonify_rng(state: dict) -> dict:
    return json.loads(json.dumps(state, default=int))


def _unjsonify_rng(state: dict) -> dict:
    # PCG64 state entries are large ints; json round-trips them natively.
    return state
