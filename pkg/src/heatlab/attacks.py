"""Attack harness: training-data poisoning and price-evasion simulation.

Two poisoning flavours inject the same stream of forty alternating
low/high setpoints -- the overt one over twenty minutes leaving a full
audit trail, the concealed one over sixty minutes with its interface
indicators masked (the learned effects stay visible).  The evasion attack
triples every price consumers see for five hours and never touches a model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from typing import Iterable, Sequence

from . import model as model_mod
from .events import EventKind
from .model import Hyperparameters, ModelState, Observation, Origin, gauge
from .schedule import Profile


class AttackKind(Enum):
    SIMPLE_POISONING = "simple-poisoning"
    COMPLEX_POISONING = "complex-poisoning"
    EVASION = "evasion"


POISONING_KINDS = (AttackKind.SIMPLE_POISONING, AttackKind.COMPLEX_POISONING)

_DEFAULT_DURATIONS = {
    AttackKind.SIMPLE_POISONING: timedelta(minutes=20),
    AttackKind.COMPLEX_POISONING: timedelta(minutes=60),
    AttackKind.EVASION: timedelta(hours=5),
}

_ORIGINS = {
    AttackKind.SIMPLE_POISONING: Origin.SIMPLE_POISONING,
    AttackKind.COMPLEX_POISONING: Origin.COMPLEX_POISONING,
}


class AttackScheduleError(ValueError):
    """Attack schedule violates the spacing constraint."""


@dataclass(frozen=True)
class AttackSpec:
    """One scheduled attack with its parameters.

    Poisoning: ``count`` injections evenly spaced over ``duration``,
    alternating ``low``/``high`` starting at ``low``.  Evasion: prices are
    multiplied by ``multiplier`` for ``duration``.
    """

    kind: AttackKind
    start: datetime
    count: int = 40
    low: float = 7.5
    high: float = 10.0
    multiplier: float = 3.0
    duration: timedelta | None = None

    def __post_init__(self) -> None:
        if self.duration is None:
            object.__setattr__(self, "duration", _DEFAULT_DURATIONS[self.kind])
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.duration.total_seconds() <= 0:
            raise ValueError("duration must be positive")

    @property
    def end(self) -> datetime:
        """Half-open end of the attack window."""
        return self.start + self.duration


def plan_injections(spec: AttackSpec) -> list[tuple[datetime, float]]:
    """Injection instants and values for a poisoning attack.

    The spacing is duration/count; the first injection fires at the start,
    so the last lands one interval before the window closes.
    """
    if spec.kind not in POISONING_KINDS:
        raise ValueError("only poisoning attacks inject observations")
    interval = spec.duration / spec.count
    return [
        (spec.start + i * interval, spec.low if i % 2 == 0 else spec.high)
        for i in range(spec.count)
    ]


def injection_origin(kind: AttackKind) -> Origin:
    return _ORIGINS[kind]


@dataclass
class VisibilityMask:
    """Observation ids whose interface indicators are concealed."""

    hidden_ids: set[int] = field(default_factory=set)

    def hide(self, obs_id: int) -> None:
        self.hidden_ids.add(obs_id)

    def is_hidden(self, obs_id: int) -> bool:
        return obs_id in self.hidden_ids


def apply_injection(
    m: ModelState,
    obs: Observation,
    mask: VisibilityMask,
    kind: AttackKind,
    h: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
    *,
    obs_id: int | None = None,
    profile: Profile | None = None,
) -> tuple[ModelState, VisibilityMask, list[tuple[EventKind, dict, bool]]]:
    """Learn from one injected observation and draft its notifications.

    Both flavours update the model identically; the overt kind drafts the
    same two records a genuine adjustment would, the concealed kind drafts
    them invisible and registers the observation id in the mask.
    """
    if kind not in POISONING_KINDS:
        raise ValueError("only poisoning attacks inject observations")
    updated = model_mod.update(m, obs, h)
    visible = kind is AttackKind.SIMPLE_POISONING
    mask_out = VisibilityMask(hidden_ids=set(mask.hidden_ids))
    if not visible and obs_id is not None:
        mask_out.hide(obs_id)
    profile_name = profile.value if profile is not None else None
    reading = gauge(updated)
    drafts = [
        (
            EventKind.USER_SETPOINT,
            {"setpoint": obs.setpoint, "mode": "override", "origin": obs.origin.value},
            visible,
        ),
        (
            EventKind.PROFILE_UPDATE,
            {
                "profile": profile_name,
                "setpoint": obs.setpoint,
                "price": obs.price,
                "sensitivity": reading.segment.value,
                "preferred": float(updated.mean[0]),
                "origin": obs.origin.value,
            },
            visible,
        ),
    ]
    return updated, mask_out, drafts


def active_evasion(specs: Iterable[AttackSpec], t: datetime) -> AttackSpec | None:
    """The evasion attack whose half-open window contains ``t``, if any."""
    for spec in specs:
        if spec.kind is AttackKind.EVASION and spec.start <= t < spec.end:
            return spec
    return None


def effective_price(base: float, evasion: AttackSpec | None, t: datetime) -> float:
    """Price every consumer sees: multiplied inside an active evasion window.

    Manipulated prices deliberately bypass the tariff cap.
    """
    if evasion is not None and evasion.kind is AttackKind.EVASION and evasion.start <= t < evasion.end:
        return base * evasion.multiplier
    return base


def validate_schedule(specs: Sequence[AttackSpec]) -> None:
    """Enforce at most one poisoning start per rolling 24-hour window.

    Windows are half-open on start times: two starts exactly 24 hours apart
    are allowed.  Evasion attacks are unconstrained.
    """
    starts = sorted(
        (s.start, s.kind) for s in specs if s.kind in POISONING_KINDS
    )
    for (a, kind_a), (b, kind_b) in zip(starts, starts[1:]):
        if b - a < timedelta(hours=24):
            raise AttackScheduleError(
                f"poisoning attacks too close: {kind_a.value} at {a.isoformat()} "
                f"and {kind_b.value} at {b.isoformat()} start within 24 hours"
            )


def mitigate_reset(
    bank: dict[Profile, ModelState],
    profile: Profile | None,
    now: datetime,
    specs: Sequence[AttackSpec] = (),
    h: Hyperparameters = model_mod.DEFAULT_HYPERPARAMETERS,
) -> dict[Profile, ModelState]:
    """Reset profile model(s) to the default.

    Resetting while a poisoning attack is still injecting does not stop it:
    later injections land on the fresh model (reinfection).  ``specs`` is
    accepted so callers can log that situation; the reset itself is
    unconditional.
    """
    fresh = dict(bank)
    targets = [profile] if profile is not None else list(Profile)
    for target in targets:
        fresh[target] = model_mod.default_model(h)
    return fresh


def poisoning_in_progress(specs: Sequence[AttackSpec], t: datetime) -> bool:
    """True if some poisoning attack still has injections due at or after ``t``."""
    for spec in specs:
        if spec.kind in POISONING_KINDS and spec.start <= t:
            last = plan_injections(spec)[-1][0]
            if t <= last:
                return True
    return False
