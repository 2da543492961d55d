"""Simulated hardware and household: clock, room thermals, and a rational agent.

The room is a single-node first-order stand-in -- warm air leaks toward the
outside temperature and the radiator valve adds heat when open -- just enough
physics for a falling temperature and valve chatter to be observable effects.
The agent plays an economically rational occupant whose true preference is a
noisy line from price to setpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np
from scipy import stats

from .model import Observation, publish_setpoint

MINUTE = timedelta(minutes=1)


class AnalysisError(ValueError):
    """Regression input is degenerate."""


@dataclass
class VirtualClock:
    """Monotone simulation time.

    The step is the base tick used for continuous processes; it must divide
    one minute evenly or be a whole multiple of a minute.
    """

    now: datetime
    step: timedelta = MINUTE

    def __post_init__(self) -> None:
        seconds = self.step.total_seconds()
        if seconds <= 0:
            raise ValueError("step must be positive")
        if 60 % seconds != 0 and seconds % 60 != 0:
            raise ValueError("step must divide one minute or be a multiple of it")

    def advance_to(self, at: datetime) -> None:
        if at < self.now:
            raise ValueError(f"clock cannot run backwards ({at} < {self.now})")
        self.now = at

    def tick(self) -> datetime:
        self.now += self.step
        return self.now


@dataclass(frozen=True)
class ThermalConstants:
    loss_per_hour: float = 0.1   # fractional approach to outside temp, 1/h
    heat_per_hour: float = 3.0   # heating rate with the valve open, degC/h
    hysteresis: float = 0.3      # valve dead-band half-width, degC
    outside: float = 8.0         # degC


@dataclass(frozen=True)
class RoomState:
    temperature: float
    outside_temperature: float
    valve_open: bool


def step_thermal(
    room: RoomState,
    dt: timedelta,
    *,
    setpoint: float | None = None,
    force_valve: bool | None = None,
    constants: ThermalConstants = ThermalConstants(),
) -> RoomState:
    """Advance the room by ``dt``.

    The valve is either forced (on/off modes) or bang-bang controlled around
    the setpoint with a +/-hysteresis dead band; the new valve state applies
    for the whole step.
    """
    if dt.total_seconds() <= 0:
        raise ValueError("dt must be positive")
    valve = room.valve_open
    if force_valve is not None:
        valve = force_valve
    elif setpoint is not None:
        if room.temperature < setpoint - constants.hysteresis:
            valve = True
        elif room.temperature > setpoint + constants.hysteresis:
            valve = False
    hours = dt.total_seconds() / 3600.0
    drift = constants.loss_per_hour * (room.outside_temperature - room.temperature)
    gain = constants.heat_per_hour if valve else 0.0
    return RoomState(
        temperature=room.temperature + hours * (drift + gain),
        outside_temperature=room.outside_temperature,
        valve_open=valve,
    )


@dataclass(frozen=True)
class AgentPolicy:
    """Rational-household stand-in: setpoint = bias + slope * price + noise."""

    true_bias: float = 21.0
    true_slope: float = -0.2
    noise_sd: float = 0.5
    actions_per_day: float = 3.0

    def __post_init__(self) -> None:
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be non-negative")
        if self.actions_per_day <= 0:
            raise ValueError("actions_per_day must be positive")


def preferred_setpoint(policy: AgentPolicy, price: float, rng: np.random.Generator) -> float:
    """The setpoint the agent would pick right now, clipped to the grid."""
    value = policy.true_bias + policy.true_slope * price
    if policy.noise_sd > 0:
        value += float(rng.normal(0.0, policy.noise_sd))
    return publish_setpoint(value)


def agent_act(
    policy: AgentPolicy,
    price: float,
    dt: timedelta,
    rng: np.random.Generator,
) -> float | None:
    """Poisson-thinned action: with the per-tick probability implied by the
    daily action rate, return a grid setpoint; otherwise None.
    """
    rate = policy.actions_per_day * dt.total_seconds() / 86400.0
    if float(rng.random()) >= -math.expm1(-rate):
        return None
    return preferred_setpoint(policy, price, rng)


def draw_action_times(
    policy: AgentPolicy,
    start: datetime,
    end: datetime,
    rng: np.random.Generator,
) -> list[datetime]:
    """Sample a Poisson process of action instants over [start, end)."""
    times: list[datetime] = []
    t = start
    scale = 86400.0 / policy.actions_per_day
    while True:
        t = t + timedelta(seconds=float(rng.exponential(scale)))
        if t >= end:
            return times
        times.append(t)


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    p_value: float
    n: int


def rationality_regression(observations: list[Observation]) -> RegressionResult:
    """Ordinary least squares of setpoint on price with a two-sided slope test."""
    if len(observations) < 3:
        raise AnalysisError("need at least 3 observations")
    prices = np.array([o.price for o in observations], dtype=float)
    setpoints = np.array([o.setpoint for o in observations], dtype=float)
    if np.unique(prices).size < 2:
        raise AnalysisError("all prices are equal; slope is unidentifiable")
    fit = stats.linregress(prices, setpoints)
    p_value = float(fit.pvalue)
    if math.isnan(p_value):  # exact fit: zero residual variance
        p_value = 0.0
    return RegressionResult(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        p_value=p_value,
        n=len(observations),
    )
