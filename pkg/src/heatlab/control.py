"""Heating controller state machine.

Modes: auto (the model drives the setpoint), override (a manual setpoint
holds for one hour while the model has already learned from it), and on/off
(valve forced, setpoint control disabled, one-hour timer).  All operations
are pure: they take the current state and return the next state together
with the notification/flash drafts the caller should append.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from enum import Enum

from . import model as model_mod
from . import schedule as schedule_mod
from .events import EventKind, FlashKind
from .model import Hyperparameters, ModelState, Observation, Origin, gauge, is_on_grid, predict, publish_setpoint
from .schedule import Profile, WeekSchedule

MODE_PERIOD = timedelta(minutes=60)

EventDraft = tuple[EventKind, dict, bool]
FlashDraft = tuple[FlashKind, dict]


class Mode(Enum):
    ON = "on"
    OFF = "off"
    AUTO = "auto"
    OVERRIDE = "override"


class ControlRejected(ValueError):
    """Command refused in the current mode."""


class ValidationError(ValueError):
    """Command arguments out of range."""


@dataclass(frozen=True)
class ModeState:
    mode: Mode
    expires_at: datetime | None = None

    def __post_init__(self) -> None:
        if (self.mode is Mode.AUTO) != (self.expires_at is None):
            raise ValueError("expires_at must be set exactly when the mode is not auto")


@dataclass(frozen=True)
class ControllerState:
    mode_state: ModeState
    setpoint: float
    active_profile: Profile
    last_price: float | None = None
    price_missing: bool = False
    last_auto_decision: datetime | None = None

    @property
    def mode(self) -> Mode:
        return self.mode_state.mode

    @property
    def setpoint_enabled(self) -> bool:
        """Setpoint control is disabled while the valve is forced on/off."""
        return self.mode not in (Mode.ON, Mode.OFF)


def initial_controller(week: WeekSchedule, now: datetime) -> ControllerState:
    return ControllerState(
        mode_state=ModeState(Mode.AUTO, None),
        setpoint=model_mod.SETPOINT_MIN,
        active_profile=schedule_mod.active_profile(week, now),
    )


@dataclass(frozen=True)
class AdjustResult:
    state: ControllerState
    model: ModelState
    observation: Observation
    events: list[EventDraft]
    flashes: list[FlashDraft]


def user_adjust_setpoint(
    state: ControllerState,
    m: ModelState,
    value: float,
    price: float,
    now: datetime,
    h: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
    origin: Origin = Origin.USER,
    visible: bool = True,
) -> AdjustResult:
    """Manual setpoint change: learn immediately, hold the value for an hour.

    The model update happens up front; override mode then pins the chosen
    value until the timer lapses (a repeat adjustment restarts the hour).
    """
    if not state.setpoint_enabled:
        raise ControlRejected("setpoint controller is disabled in on/off mode")
    if not is_on_grid(value):
        raise ValidationError(f"setpoint {value} is not on the hardware grid")
    if price is None:
        raise ValidationError("no price available for the adjustment")

    obs = Observation(price=price, setpoint=value, at=now, origin=origin)
    updated = model_mod.update(m, obs, h)
    was_override = state.mode is Mode.OVERRIDE
    next_state = replace(
        state,
        mode_state=ModeState(Mode.OVERRIDE, now + MODE_PERIOD),
        setpoint=value,
    )
    reading = gauge(updated)
    events: list[EventDraft] = [
        (
            EventKind.USER_SETPOINT,
            {"setpoint": value, "mode": Mode.OVERRIDE.value, "origin": origin.value},
            visible,
        ),
        (
            EventKind.PROFILE_UPDATE,
            {
                "profile": state.active_profile.value,
                "setpoint": value,
                "price": price,
                "sensitivity": reading.segment.value,
                "preferred": float(updated.mean[0]),
                "origin": origin.value,
            },
            visible,
        ),
    ]
    flashes: list[FlashDraft] = []
    if visible:
        flashes.append((FlashKind.SETPOINT, {"setpoint": value}))
        if not was_override:
            flashes.append((FlashKind.MODE, {"mode": Mode.OVERRIDE.value}))
    return AdjustResult(next_state, updated, obs, events, flashes)


@dataclass(frozen=True)
class ModeResult:
    state: ControllerState
    events: list[EventDraft]
    flashes: list[FlashDraft]


def set_mode(state: ControllerState, target: Mode, now: datetime) -> ModeResult:
    """Switch to on/off (one-hour timer, restarted on repeats) or back to auto."""
    if target is Mode.OVERRIDE:
        raise ValidationError("override mode is entered by adjusting the setpoint")
    if target is Mode.AUTO:
        mode_state = ModeState(Mode.AUTO, None)
    else:
        mode_state = ModeState(target, now + MODE_PERIOD)
    next_state = replace(state, mode_state=mode_state)
    events: list[EventDraft] = [(EventKind.USER_MODE, {"mode": target.value}, True)]
    flashes: list[FlashDraft] = [(FlashKind.MODE, {"mode": target.value})]
    return ModeResult(next_state, events, flashes)


def reset_profiles(
    bank: dict[Profile, ModelState],
    target: Profile | None,
    h: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
) -> tuple[dict[Profile, ModelState], list[EventDraft], list[FlashDraft]]:
    """Replace the targeted model(s) with the default (None resets all five)."""
    fresh = dict(bank)
    targets = [target] if target is not None else list(Profile)
    events: list[EventDraft] = []
    for profile in targets:
        fresh[profile] = model_mod.default_model(h)
        events.append(
            (
                EventKind.PROFILE_RESET,
                {"profile": profile.value, "scope": "one" if target is not None else "all"},
                True,
            )
        )
    if target is None:
        flashes: list[FlashDraft] = [(FlashKind.RESET_ALL, {})]
    else:
        flashes = [(FlashKind.RESET_ONE, {"profile": target.value})]
    return fresh, events, flashes


@dataclass(frozen=True)
class TickResult:
    state: ControllerState
    events: list[EventDraft]
    flashes: list[FlashDraft]


def controller_tick(
    state: ControllerState,
    bank: dict[Profile, ModelState],
    week: WeekSchedule,
    price: float | None,
    now: datetime,
    h: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
) -> TickResult:
    """One pass of the automatic loop at virtual instant ``now``.

    Expires due timers, tracks the active profile and price, and in auto
    mode republishes the model's setpoint -- announcing it only when the
    published value actually changes, so replays are idempotent.
    """
    events: list[EventDraft] = []
    flashes: list[FlashDraft] = []
    st = state

    expiry = st.mode_state.expires_at
    if st.mode is not Mode.AUTO and expiry is not None and now >= expiry:
        st = replace(st, mode_state=ModeState(Mode.AUTO, None))
        flashes.append((FlashKind.MODE, {"mode": Mode.AUTO.value}))

    profile = schedule_mod.active_profile(week, now)
    if profile is not st.active_profile:
        st = replace(st, active_profile=profile)
        flashes.append((FlashKind.ACTIVE_PROFILE, {"profile": profile.value}))

    if price is None:
        if not st.price_missing:
            events.append(
                (EventKind.INTEGRITY, {"message": f"No price data at {now.isoformat()}; holding the last setpoint."}, True)
            )
            st = replace(st, price_missing=True)
        return TickResult(st, events, flashes)

    if st.last_price is not None and price != st.last_price:
        flashes.append((FlashKind.PRICE, {"price": price}))
    if st.last_price != price or st.price_missing:
        st = replace(st, last_price=price, price_missing=False)

    if st.mode is Mode.AUTO:
        m = bank[st.active_profile]
        published = publish_setpoint(predict(m, price, h))
        if published != st.setpoint:
            reading = gauge(m)
            st = replace(st, setpoint=published, last_auto_decision=now)
            events.append(
                (
                    EventKind.SYSTEM_SETPOINT,
                    {
                        "setpoint": published,
                        "price": price,
                        "profile": st.active_profile.value,
                        "sensitivity": reading.segment.value,
                        "preferred": float(m.mean[0]),
                    },
                    True,
                )
            )
            flashes.append((FlashKind.SETPOINT, {"setpoint": published}))
    return TickResult(st, events, flashes)
