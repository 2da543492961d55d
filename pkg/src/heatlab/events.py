"""Append-only notification log, flash messages, and their text templates.

Notification and flash text is generated from fixed templates so the log
reads the same everywhere: tests pin the rendered strings byte-for-byte.
Records are immutable once appended; visibility is assigned at creation
(concealed injections write invisible records) and queries only ever see
visible ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Iterable, Sequence


class Category(Enum):
    USER = "user"
    SYSTEM = "system"


class EventKind(Enum):
    USER_SETPOINT = "user-setpoint"
    USER_MODE = "user-mode"
    PROFILE_RESET = "profile-reset"
    SCHEDULE_EDIT = "schedule-edit"
    SYSTEM_SETPOINT = "system-setpoint"
    PROFILE_UPDATE = "profile-update"
    # Diagnostics channel for data-integrity problems (e.g. a missing price
    # slot); not one of the six user-facing notification templates.
    INTEGRITY = "integrity"


_USER_KINDS = {
    EventKind.USER_SETPOINT,
    EventKind.USER_MODE,
    EventKind.PROFILE_RESET,
    EventKind.SCHEDULE_EDIT,
}


def category_of(kind: EventKind) -> Category:
    return Category.USER if kind in _USER_KINDS else Category.SYSTEM


class FlashKind(Enum):
    MODE = "mode"
    PRICE = "price"
    ACTIVE_PROFILE = "active-profile"
    SETPOINT = "setpoint"
    RESET_ALL = "reset-all"
    RESET_ONE = "reset-one"
    SCHEDULE = "schedule"


class RenderError(ValueError):
    """Template parameter missing from the payload."""


class QueryError(ValueError):
    """Bad filter arguments."""


@dataclass(frozen=True)
class EventRecord:
    id: int
    at: datetime
    kind: EventKind
    payload: dict
    visible: bool = True

    @property
    def category(self) -> Category:
        return category_of(self.kind)


def format_temperature(value: float) -> str:
    """One decimal at most, with a trailing .0 elided (19, 18.5)."""
    text = f"{float(value):.1f}"
    return text[:-2] if text.endswith(".0") else text


def format_price(value: float) -> str:
    """Prices print like temperatures: at most one decimal."""
    return format_temperature(value)


def _require(payload: dict, keys: Sequence[str], kind: str) -> list:
    missing = [k for k in keys if k not in payload]
    if missing:
        raise RenderError(f"{kind} payload missing {', '.join(missing)}")
    return [payload[k] for k in keys]


def render_notification(event: EventRecord) -> str:
    """Instantiate the notification template for the event's kind."""
    kind, payload = event.kind, event.payload
    if kind is EventKind.USER_SETPOINT:
        setpoint, mode = _require(payload, ("setpoint", "mode"), kind.value)
        return f"You set the target temperature to {format_temperature(setpoint)}°C ({mode} mode is now active)."
    if kind is EventKind.USER_MODE:
        (mode,) = _require(payload, ("mode",), kind.value)
        return f"You switched to {mode} mode."
    if kind is EventKind.PROFILE_RESET:
        (profile,) = _require(payload, ("profile",), kind.value)
        return f"You reset profile {profile}."
    if kind is EventKind.SCHEDULE_EDIT:
        return "You edited the schedule."
    if kind is EventKind.SYSTEM_SETPOINT:
        setpoint, price, profile, sensitivity, preferred = _require(
            payload, ("setpoint", "price", "profile", "sensitivity", "preferred"), kind.value
        )
        return (
            f"The system set the target temperature to {format_temperature(setpoint)}°C "
            f"because the current price is {format_price(price)}p/kWh and the active profile is {profile} "
            f"where the AI believes your price sensitivity is {sensitivity} "
            f"and your preferred temperature (if energy were free) is {format_temperature(preferred)}°C."
        )
    if kind is EventKind.PROFILE_UPDATE:
        profile, setpoint, price, sensitivity, preferred = _require(
            payload, ("profile", "setpoint", "price", "sensitivity", "preferred"), kind.value
        )
        return (
            f"Profile {profile} has been updated because you set the target temperature to "
            f"{format_temperature(setpoint)}°C when the price was {format_price(price)}p/kWh "
            f"where the AI now believes your price sensitivity is {sensitivity} "
            f"and your preferred temperature (if energy were free) is {format_temperature(preferred)}°C."
        )
    if kind is EventKind.INTEGRITY:
        (message,) = _require(payload, ("message",), kind.value)
        return str(message)
    raise RenderError(f"unknown notification kind {kind!r}")


def render_flash(kind: FlashKind, payload: dict) -> str:
    """Instantiate one of the seven flash message templates."""
    if kind is FlashKind.MODE:
        (mode,) = _require(payload, ("mode",), kind.value)
        return f"System is in {mode} mode"
    if kind is FlashKind.PRICE:
        (price,) = _require(payload, ("price",), kind.value)
        return f"Current price is {format_price(price)}p/kWh"
    if kind is FlashKind.ACTIVE_PROFILE:
        (profile,) = _require(payload, ("profile",), kind.value)
        return f"Active profile is {profile}"
    if kind is FlashKind.SETPOINT:
        (setpoint,) = _require(payload, ("setpoint",), kind.value)
        return f"Target temperature is {format_temperature(setpoint)}°C"
    if kind is FlashKind.RESET_ALL:
        return "All profiles are reset"
    if kind is FlashKind.RESET_ONE:
        (profile,) = _require(payload, ("profile",), kind.value)
        return f"{profile} profile is reset"
    if kind is FlashKind.SCHEDULE:
        (day,) = _require(payload, ("day",), kind.value)
        return f"{day} schedule is updated"
    raise RenderError(f"unknown flash kind {kind!r}")


@dataclass
class EventLog:
    """Single-writer append-only log with filtered, paginated reads."""

    records: list[EventRecord] = field(default_factory=list)
    _next_id: int = 1

    def append(self, at: datetime, kind: EventKind, payload: dict, visible: bool = True) -> EventRecord:
        record = EventRecord(id=self._next_id, at=at, kind=kind, payload=dict(payload), visible=visible)
        self._next_id += 1
        self.records.append(record)
        return record

    def restore(self, records: Iterable[EventRecord]) -> None:
        self.records = list(records)
        self._next_id = (self.records[-1].id + 1) if self.records else 1

    def query(
        self,
        categories: set[Category] | None = None,
        start: datetime | None = None,
        end: datetime | None = None,
        page: int = 1,
        page_size: int = 20,
    ) -> tuple[list[EventRecord], int]:
        """Visible records, newest first, filtered then paginated.

        Returns (page of records, total matching count).
        """
        if page_size < 1:
            raise QueryError("page_size must be at least 1")
        if page < 1:
            raise QueryError("page must be at least 1")
        if start is not None and end is not None and start > end:
            raise QueryError("date range is inverted")
        matched = [
            r
            for r in self.records
            if r.visible
            and (categories is None or r.category in categories)
            and (start is None or r.at >= start)
            and (end is None or r.at <= end)
        ]
        matched.sort(key=lambda r: r.id, reverse=True)
        lo = (page - 1) * page_size
        return matched[lo : lo + page_size], len(matched)

    def dump(self, include_hidden: bool = True) -> str:
        """Newline-delimited JSON of the full log (audit/golden exports)."""
        lines = []
        for r in self.records:
            if not include_hidden and not r.visible:
                continue
            lines.append(
                json.dumps(
                    {
                        "id": r.id,
                        "at": r.at.isoformat(),
                        "category": r.category.value,
                        "kind": r.kind.value,
                        "visible": r.visible,
                        "payload": r.payload,
                        "message": render_notification(r),
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(lines) + ("\n" if lines else "")
