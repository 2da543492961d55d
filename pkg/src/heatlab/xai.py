"""Chart data products for the glass-box model.

Everything a chart needs is computed here, server-side, so clients only
plot numbers they were given: per-input model snapshots with confidence
ellipses and predictive bands (the replayable input history), and daily
price-vs-setpoint series for the schedule charts.  Concealed injections
never get a frame of their own -- their learning folds into the next
visible frame -- while the newest frame always equals the live model.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timedelta
from typing import Sequence

import numpy as np

from . import model as model_mod
from . import schedule as schedule_mod
from . import tariff as tariff_mod
from .attacks import AttackSpec, effective_price
from .model import (
    ConfidenceEllipse,
    Hyperparameters,
    ModelState,
    Observation,
    confidence_ellipse,
    predict,
    predictive_band,
    publish_setpoint,
)
from .schedule import Profile, WeekSchedule
from .tariff import SLOT, MissingDataError, PriceSeries

# Price grid the predictive-band chart is sampled on: the tariff's full range.
BAND_PRICES = np.round(np.arange(0.0, 35.0 + 1e-9, 0.5), 1)
CONFIDENCE_LEVEL = 0.95

TOOLTIPS = (
    "This chart visualises your profile inputs over time, since your last profile reset. "
    "Each input is comprised of a target temperature change and the energy price when the "
    "change was made. Each input serves to update your AI model.",
    "This chart visualises your AI model over time. The best guess is a learned estimation "
    "of your preferred temperature (if energy were free) and your price sensitivity. The "
    "confidence region represents uncertainty over the best guess: a larger confidence region "
    "means more uncertainty. The AI model is used to make predictions about your ideal target "
    "temperature relative to energy price.",
    "This chart visualises your AI model predictions over time. The best guess is a learned "
    "estimation of your ideal target temperature relative to energy price. The confidence "
    "region represents uncertainty over the best guess: a larger confidence region means more "
    "uncertainty. The predictions are used in auto mode to choose your target temperature "
    "relative to the current energy price.",
    "This chart visualises the energy price shedule for a given day along with your target "
    "temperatures in auto mode for that schedule and this current profile. In reality your "
    "target temperatures in auto mode will depend on both the energy price schedule and your "
    "profile schedule: each profile has its own AI model with its own predictions, even if "
    "energy prices remain the same.",
)


@dataclass(frozen=True)
class XaiFrame:
    """One step of the input-history replay."""

    index: int
    model: ModelState
    ellipse: ConfidenceEllipse
    band: np.ndarray  # (n, 3) of (mean, lower, upper) over BAND_PRICES
    inputs_so_far: tuple[tuple[float, float], ...]  # visible (price, setpoint)


def _frame(index: int, m: ModelState, inputs: tuple[tuple[float, float], ...], h: Hyperparameters) -> XaiFrame:
    return XaiFrame(
        index=index,
        model=m,
        ellipse=confidence_ellipse(m, CONFIDENCE_LEVEL),
        band=predictive_band(m, BAND_PRICES, CONFIDENCE_LEVEL, h),
        inputs_so_far=inputs,
    )


def frames(
    observations: Sequence[Observation],
    h: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
    *,
    hidden_ids: frozenset | set = frozenset(),
    ids: Sequence[int] | None = None,
) -> list[XaiFrame]:
    """Replay a profile's observations into per-input frames.

    Frame 0 is the default model; each visible observation appends one
    frame whose model has absorbed everything up to and including it
    (concealed observations included).  Trailing concealed observations
    fold into the newest frame so it always matches the live model.
    """
    if ids is None:
        ids = range(len(observations))
    running = model_mod.default_model(h)
    inputs: tuple[tuple[float, float], ...] = ()
    out = [_frame(0, running, inputs, h)]
    for obs_id, obs in zip(ids, observations):
        running = model_mod.update(running, obs, h)
        if obs_id in hidden_ids:
            continue
        inputs = inputs + ((obs.price, obs.setpoint),)
        out.append(_frame(len(out), running, inputs, h))
    last = out[-1]
    if last.model.input_count != running.input_count:
        out[-1] = _frame(last.index, running, last.inputs_so_far, h)
    return out


@dataclass(frozen=True)
class ScheduleSeries:
    """Half-hourly (price, published setpoint) pairs for one day or window."""

    day: date
    points: tuple[tuple[datetime, float, float], ...]  # (slot start, price, setpoint)


def schedule_series(
    m: ModelState,
    prices: PriceSeries,
    day: date,
    evasion: AttackSpec | None = None,
    h: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
) -> ScheduleSeries:
    """Effective price and model setpoint for every 30-minute slot of ``day``."""
    points = []
    for slot in tariff_mod.day_slots(prices, day):
        eff = effective_price(slot.price, evasion, slot.start)
        setpoint = publish_setpoint(predict(m, eff, h))
        points.append((slot.start, eff, setpoint))
    return ScheduleSeries(day=day, points=tuple(points))


def _next_occurrence(day_of_week: int, slot: schedule_mod.TimeSlot, now: datetime) -> date:
    """Date of the timeslot's next occurrence; today while it is current or upcoming."""
    today = now.date()
    delta = (day_of_week - now.weekday()) % 7
    candidate = today + timedelta(days=delta)
    if delta == 0:
        minutes = now.hour * 60 + now.minute
        if minutes >= slot.end:
            candidate = today + timedelta(days=7)
    return candidate


def timeslot_series(
    week: WeekSchedule,
    bank: dict[Profile, ModelState],
    prices: PriceSeries,
    day_of_week: int,
    slot_start_minutes: int,
    now: datetime,
    evasion: AttackSpec | None = None,
    h: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
) -> ScheduleSeries:
    """Price/setpoint series restricted to one schedule timeslot.

    Uses the timeslot's next occurrence -- or today when it is the current
    timeslot, so already-elapsed slots of today stay inspectable.
    """
    day_schedule = week.days[day_of_week]
    matches = [s for s in day_schedule.slots if s.start == slot_start_minutes]
    if not matches:
        raise schedule_mod.ScheduleError(
            f"no timeslot starting at minute {slot_start_minutes} on {schedule_mod.WEEKDAY_NAMES[day_of_week]}"
        )
    slot = matches[0]
    on_date = _next_occurrence(day_of_week, slot, now)
    midnight = datetime(on_date.year, on_date.month, on_date.day, tzinfo=now.tzinfo)
    window_start = midnight + timedelta(minutes=slot.start)
    window_end = midnight + timedelta(minutes=slot.end)
    m = bank[slot.profile]

    points = []
    t = tariff_mod.slot_start(window_start)
    if t < window_start:
        t += SLOT
    while t < window_end:
        base = tariff_mod.price_at(prices, t)  # raises MissingDataError past coverage
        eff = effective_price(base, evasion, t)
        points.append((t, eff, publish_setpoint(predict(m, eff, h))))
        t += SLOT
    if not points:
        raise MissingDataError("timeslot window contains no complete price slot")
    return ScheduleSeries(day=on_date, points=tuple(points))
