"""Weekly profile schedule.

Each day of the week is partitioned into 15-minute-aligned timeslots and
every timeslot is allocated one of the five named profiles.  The schedule
decides which learned model is in charge at any instant; it never holds
temperatures itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum

DAY_MINUTES = 1440
SLOT_ALIGNMENT = 15

WEEKDAY_NAMES = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday")


class Profile(Enum):
    NIGHTS = "Nights"
    MORNINGS = "Mornings"
    WEEKDAYS = "Weekdays"
    EVENINGS = "Evenings"
    WEEKENDS = "Weekends"


class ScheduleError(ValueError):
    """Proposed timeslots violate the day-partition rules."""


@dataclass(frozen=True)
class TimeSlot:
    start: int  # minutes from midnight, inclusive
    end: int    # minutes from midnight, exclusive
    profile: Profile


@dataclass(frozen=True)
class DaySchedule:
    """Timeslots that partition [00:00, 24:00) exactly."""

    slots: tuple[TimeSlot, ...]

    def __post_init__(self) -> None:
        if not self.slots:
            raise ScheduleError("day has no timeslots")
        # Coverage endpoints first, then alignment, then contiguity.
        if self.slots[0].start != 0:
            raise ScheduleError(f"coverage starts at {self.slots[0].start}, not 00:00")
        if self.slots[-1].end != DAY_MINUTES:
            raise ScheduleError(f"coverage ends at {self.slots[-1].end}, not 24:00")
        for slot in self.slots:
            for edge in (slot.start, slot.end):
                if edge % SLOT_ALIGNMENT != 0:
                    raise ScheduleError(f"boundary {edge} is not aligned to {SLOT_ALIGNMENT} minutes")
            if not 0 <= slot.start < slot.end <= DAY_MINUTES:
                raise ScheduleError(f"timeslot {slot.start}-{slot.end} is not an increasing span of the day")
        for prev, cur in zip(self.slots, self.slots[1:]):
            if cur.start < prev.end:
                raise ScheduleError(f"timeslots overlap at {cur.start}")
            if cur.start > prev.end:
                raise ScheduleError(f"gap between {prev.end} and {cur.start}")

    def profile_at(self, minutes: int) -> Profile:
        for slot in self.slots:
            if slot.start <= minutes < slot.end:
                return slot.profile
        raise ScheduleError(f"minute {minutes} outside the day")  # unreachable on valid days

    def slot_at(self, minutes: int) -> TimeSlot:
        for slot in self.slots:
            if slot.start <= minutes < slot.end:
                return slot
        raise ScheduleError(f"minute {minutes} outside the day")


@dataclass(frozen=True)
class WeekSchedule:
    """One DaySchedule per weekday, indexed 0=Monday .. 6=Sunday."""

    days: tuple[DaySchedule, ...]

    def __post_init__(self) -> None:
        if len(self.days) != 7:
            raise ScheduleError("a week schedule needs exactly 7 days")


CLEARED_DAY = DaySchedule(slots=(TimeSlot(0, DAY_MINUTES, Profile.NIGHTS),))

_WORKDAY = DaySchedule(slots=(
    TimeSlot(0, 390, Profile.NIGHTS),       # 00:00-06:30
    TimeSlot(390, 540, Profile.MORNINGS),   # 06:30-09:00
    TimeSlot(540, 1020, Profile.WEEKDAYS),  # 09:00-17:00
    TimeSlot(1020, 1320, Profile.EVENINGS), # 17:00-22:00
    TimeSlot(1320, DAY_MINUTES, Profile.NIGHTS),
))
_WEEKEND_DAY = DaySchedule(slots=(
    TimeSlot(0, 480, Profile.NIGHTS),       # 00:00-08:00
    TimeSlot(480, 1320, Profile.WEEKENDS),  # 08:00-22:00
    TimeSlot(1320, DAY_MINUTES, Profile.NIGHTS),
))


def default_week() -> WeekSchedule:
    """The schedule every fresh installation starts with."""
    return WeekSchedule(days=(_WORKDAY,) * 5 + (_WEEKEND_DAY,) * 2)


def clear_day(week: WeekSchedule, day: int) -> WeekSchedule:
    """Reset one day to a single all-day Nights timeslot."""
    days = list(week.days)
    days[day] = CLEARED_DAY
    return WeekSchedule(days=tuple(days))


def edit_day(week: WeekSchedule, day: int, slots: tuple[TimeSlot, ...] | list[TimeSlot]) -> WeekSchedule:
    """Replace one day's timeslots atomically; invalid proposals are rejected whole."""
    days = list(week.days)
    days[day] = DaySchedule(slots=tuple(slots))
    return WeekSchedule(days=tuple(days))


def copy_day(week: WeekSchedule, from_day: int, to_day: int) -> WeekSchedule:
    days = list(week.days)
    days[to_day] = days[from_day]
    return WeekSchedule(days=tuple(days))


def active_profile(week: WeekSchedule, t: datetime) -> Profile:
    """Profile in charge at ``t`` (start-inclusive, end-exclusive slots)."""
    return week.days[t.weekday()].profile_at(t.hour * 60 + t.minute)


def active_slot(week: WeekSchedule, t: datetime) -> TimeSlot:
    return week.days[t.weekday()].slot_at(t.hour * 60 + t.minute)


def _minutes_to_hhmm(minutes: int) -> str:
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def _hhmm_to_minutes(text: str) -> int:
    hours, _, mins = text.partition(":")
    return int(hours) * 60 + int(mins)


def to_payload(week: WeekSchedule) -> dict:
    """Serialise as a 7-key map of (start, end, profile) triples."""
    return {
        WEEKDAY_NAMES[i]: [
            {
                "start": _minutes_to_hhmm(slot.start),
                "end": _minutes_to_hhmm(slot.end),
                "profile": slot.profile.value,
            }
            for slot in day.slots
        ]
        for i, day in enumerate(week.days)
    }


def from_payload(payload: dict) -> WeekSchedule:
    days = []
    for name in WEEKDAY_NAMES:
        if name not in payload:
            raise ScheduleError(f"missing day {name}")
        slots = tuple(
            TimeSlot(
                start=_hhmm_to_minutes(entry["start"]),
                end=_hhmm_to_minutes(entry["end"]),
                profile=Profile(entry["profile"]),
            )
            for entry in payload[name]
        )
        days.append(DaySchedule(slots=slots))
    return WeekSchedule(days=tuple(days))
