"""Half-hourly dynamic tariff data: loading, lookup, and summaries.

Historical price files are plain CSV (``start_utc,price_p_per_kwh``) with one
row per 30-minute slot.  A whole-year offset can be applied at load time so a
past year's prices replay on the simulation calendar with month/day/time
preserved; leap-day rows are dropped when the target year has no Feb 29.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from enum import Enum
from bisect import bisect_right
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .model import PRICE_CAP

SLOT = timedelta(minutes=30)
CSV_HEADER = "start_utc,price_p_per_kwh"


class PriceDataError(ValueError):
    """Malformed or inconsistent tariff data."""


class MissingDataError(LookupError):
    """Requested time lies outside the loaded price coverage."""


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 UTC timestamp (accepts a trailing ``Z``)."""
    raw = text.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


@dataclass(frozen=True)
class PriceSlot:
    start: datetime  # slot-aligned, UTC
    price: float     # p/kWh


class Window(Enum):
    DAY = "day"
    WEEK = "week"
    MONTH = "month"


@dataclass(frozen=True)
class PriceSummary:
    min: float
    max: float
    mean: float
    window: Window


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Contiguous, sorted half-hourly prices."""

    slots: tuple[PriceSlot, ...]
    region_tag: str = ""
    source_year_offset: int = 0

    def __post_init__(self) -> None:
        starts = []
        for slot in self.slots:
            if slot.start.minute not in (0, 30) or slot.start.second or slot.start.microsecond:
                raise PriceDataError(f"slot start {slot.start.isoformat()} is not 30-minute aligned")
            if not math.isfinite(slot.price):
                raise PriceDataError(f"non-finite price at {slot.start.isoformat()}")
            if slot.price > PRICE_CAP:
                raise PriceDataError(
                    f"price {slot.price} at {slot.start.isoformat()} exceeds the {PRICE_CAP}p/kWh cap"
                )
            starts.append(slot.start)
        for prev, cur in zip(starts, starts[1:]):
            if cur == prev:
                raise PriceDataError(f"duplicate slot at {cur.isoformat()}")
            if cur - prev != SLOT:
                raise PriceDataError(f"gap between {prev.isoformat()} and {cur.isoformat()}")
        object.__setattr__(self, "_starts", starts)

    @property
    def coverage(self) -> tuple[datetime, datetime]:
        """Half-open [first slot start, last slot end)."""
        if not self.slots:
            raise MissingDataError("empty price series")
        return self.slots[0].start, self.slots[-1].start + SLOT

    def covers(self, start: datetime, end: datetime) -> bool:
        if not self.slots:
            return False
        lo, hi = self.coverage
        return lo <= start and end <= hi


def _parse_price(field: str, line_no: int) -> float:
    text = field.strip()
    if "." in text and len(text.split(".", 1)[1]) > 4:
        raise PriceDataError(f"line {line_no}: price {text!r} has more than 4 fraction digits")
    try:
        return float(text)
    except ValueError as exc:
        raise PriceDataError(f"line {line_no}: bad price {text!r}") from exc


def load_prices(
    source: str | Path | TextIO | Iterable[str],
    *,
    year_offset: int = 0,
    region_tag: str = "",
) -> PriceSeries:
    """Load and validate a tariff CSV, applying ``year_offset`` to all rows."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_prices(fh, year_offset=year_offset, region_tag=region_tag)

    lines = iter(source)
    try:
        header = next(lines).strip()
    except StopIteration:
        raise PriceDataError("empty tariff file") from None
    if header != CSV_HEADER:
        raise PriceDataError(f"line 1: expected header {CSV_HEADER!r}, got {header!r}")

    slots: list[PriceSlot] = []
    for line_no, line in enumerate(lines, start=2):
        row = line.strip()
        if not row:
            continue
        parts = row.split(",")
        if len(parts) != 2:
            raise PriceDataError(f"line {line_no}: expected 2 fields, got {len(parts)}")
        try:
            start = parse_timestamp(parts[0])
        except ValueError as exc:
            raise PriceDataError(f"line {line_no}: bad timestamp {parts[0]!r}") from exc
        price = _parse_price(parts[1], line_no)
        if year_offset:
            try:
                start = start.replace(year=start.year + year_offset)
            except ValueError:
                continue  # leap day with no home in the target year
        slots.append(PriceSlot(start=start, price=price))

    slots.sort(key=lambda s: s.start)
    return PriceSeries(slots=tuple(slots), region_tag=region_tag, source_year_offset=year_offset)


def price_at(series: PriceSeries, t: datetime) -> float:
    """Price of the 30-minute slot containing ``t``."""
    starts = getattr(series, "_starts")
    if not starts:
        raise MissingDataError("empty price series")
    idx = bisect_right(starts, t) - 1
    if idx < 0 or t >= starts[idx] + SLOT:
        raise MissingDataError(f"no price data covering {t.isoformat()}")
    return series.slots[idx].price


def slot_start(t: datetime) -> datetime:
    """Floor a timestamp to its 30-minute slot boundary."""
    return t.replace(minute=(t.minute // 30) * 30, second=0, microsecond=0)


def window_bounds(t: datetime, window: Window) -> tuple[datetime, datetime]:
    """Half-open calendar window containing ``t`` (weeks start Monday)."""
    day = t.replace(hour=0, minute=0, second=0, microsecond=0)
    if window is Window.DAY:
        return day, day + timedelta(days=1)
    if window is Window.WEEK:
        monday = day - timedelta(days=day.weekday())
        return monday, monday + timedelta(days=7)
    first = day.replace(day=1)
    next_first = (first + timedelta(days=32)).replace(day=1)
    return first, next_first


def summarize(series: PriceSeries, t: datetime, window: Window) -> PriceSummary:
    """Min/max/mean over all slots of the calendar window containing ``t``."""
    lo, hi = window_bounds(t, window)
    prices = [s.price for s in series.slots if lo <= s.start < hi]
    if not prices:
        raise MissingDataError(f"no price data in the {window.value} window containing {t.isoformat()}")
    return PriceSummary(min=min(prices), max=max(prices), mean=sum(prices) / len(prices), window=window)


def day_slots(series: PriceSeries, day: date) -> list[PriceSlot]:
    """The 48 slots of one calendar day; raises if any are missing."""
    start = datetime(day.year, day.month, day.day, tzinfo=timezone.utc)
    end = start + timedelta(days=1)
    slots = [s for s in series.slots if start <= s.start < end]
    if len(slots) != 48:
        raise MissingDataError(f"incomplete price data for {day.isoformat()}")
    return slots


def synthetic_prices(
    start: datetime,
    days: int,
    seed: int = 0,
    region_tag: str = "synthetic",
) -> PriceSeries:
    """Generate a plausible half-hourly series: overnight trough, morning and
    evening peaks, seeded noise, clipped to the 35p cap (negatives allowed).
    """
    rng = np.random.default_rng(seed)
    base = start.replace(minute=0, second=0, microsecond=0)
    slots = []
    for i in range(days * 48):
        at = base + i * SLOT
        hour = at.hour + at.minute / 60.0
        price = (
            10.0
            + 6.0 * math.exp(-((hour - 8.0) ** 2) / 4.5)
            + 11.0 * math.exp(-((hour - 17.5) ** 2) / 3.0)
            - 4.0 * math.exp(-((hour - 3.0) ** 2) / 6.0)
        )
        price += float(rng.normal(0.0, 1.6))
        price = min(round(price, 2), PRICE_CAP)
        slots.append(PriceSlot(start=at, price=price))
    return PriceSeries(slots=tuple(slots), region_tag=region_tag)


def format_price_field(price: float) -> str:
    """Price formatted to at most 4 fraction digits, trailing zeros trimmed."""
    text = f"{price:.4f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-0") else "0"


def write_prices_csv(series: PriceSeries, target: str | Path | TextIO) -> None:
    """Emit a series in the tariff CSV contract (round-trips with load)."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as fh:
            write_prices_csv(series, fh)
            return
    target.write(CSV_HEADER + "\n")
    for slot in series.slots:
        stamp = slot.start.strftime("%Y-%m-%dT%H:%M:%SZ")
        target.write(f"{stamp},{format_price_field(slot.price)}\n")


def prices_to_csv_text(series: PriceSeries) -> str:
    buf = io.StringIO()
    write_prices_csv(series, buf)
    return buf.getvalue()
