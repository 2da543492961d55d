"""HTTP/JSON surface over the engine (all payloads versioned under /v1).

Handlers submit commands to the single-writer engine under a lock and read
immutable payloads back; no handler computes model math of its own.  The
attack trigger endpoint requires a static bearer token; everything else is
open, matching a single-household simulation.
"""

from __future__ import annotations

import json
import threading
from datetime import date, datetime, time, timedelta, timezone

from fastapi import FastAPI, Header, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import schedule as schedule_mod
from . import tariff as tariff_mod
from . import xai as xai_mod
from .attacks import AttackKind, AttackSpec, AttackScheduleError, active_evasion, effective_price
from .control import ControlRejected, ValidationError
from .engine import (
    AdjustSetpoint,
    ClearDay,
    CopyDay,
    EditDay,
    Engine,
    ResetProfile,
    SetMode,
    SetWeek,
)
from .events import Category, QueryError, render_notification
from .model import GaugeReading, RejectedInput, gauge, predictive_band
from .schedule import Profile, ScheduleError, WEEKDAY_NAMES
from .tariff import MissingDataError, Window


class SetpointBody(BaseModel):
    value: float


class ModeBody(BaseModel):
    mode: str = Field(pattern="^(on|off|auto)$")


class SlotBody(BaseModel):
    start: str
    end: str
    profile: str


class DayBody(BaseModel):
    slots: list[SlotBody]


class CopyBody(BaseModel):
    from_day: str
    to_day: str


class AttackBody(BaseModel):
    kind: str
    start: datetime | None = None
    count: int = 40
    low: float = 7.5
    high: float = 10.0
    multiplier: float = 3.0
    duration_minutes: float | None = None


def _day_index(name: str) -> int:
    try:
        return WEEKDAY_NAMES.index(name.capitalize())
    except ValueError:
        raise HTTPException(status_code=404, detail=f"unknown day {name!r}")


def _profile(name: str) -> Profile:
    try:
        return Profile(name.capitalize())
    except ValueError:
        raise HTTPException(status_code=404, detail=f"unknown profile {name!r}")


def _hhmm_minutes(text: str) -> int:
    hours, _, minutes = text.partition(":")
    return int(hours) * 60 + int(minutes)


def _gauge_payload(reading: GaugeReading) -> dict:
    return {
        "value": reading.value,
        "segment": reading.segment.value,
        "upper_bound": reading.upper_bound,
    }


def _band_payload(band) -> dict:
    return {
        "prices": [float(p) for p in xai_mod.BAND_PRICES],
        "mean": [float(v) for v in band[:, 0]],
        "lower": [float(v) for v in band[:, 1]],
        "upper": [float(v) for v in band[:, 2]],
    }


def _series_payload(series: xai_mod.ScheduleSeries) -> dict:
    return {
        "day": series.day.isoformat(),
        "points": [
            {"start": at.isoformat(), "price": price, "setpoint": setpoint}
            for at, price, setpoint in series.points
        ],
    }


def build_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="heatlab", version="1")
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    lock = threading.RLock()
    app.state.engine = engine
    app.state.engine_lock = lock  # shared with the realtime pacer thread

    def guarded(fn):
        with lock:
            return fn()

    @app.exception_handler(ValidationError)
    @app.exception_handler(RejectedInput)
    @app.exception_handler(ScheduleError)
    @app.exception_handler(QueryError)
    async def _validation_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ControlRejected)
    @app.exception_handler(AttackScheduleError)
    async def _conflict_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(MissingDataError)
    async def _missing_handler(request: Request, exc: Exception):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.get("/v1/state")
    def get_state(summary: str = Query(default="day", pattern="^(day|week|month)$")):
        def read():
            now = engine.now()
            price = engine.effective_price_at(now)
            try:
                price_summary = tariff_mod.summarize(engine.prices, now, Window(summary))
                summary_payload = {
                    "window": summary,
                    "min": price_summary.min,
                    "max": price_summary.max,
                    "mean": price_summary.mean,
                }
            except MissingDataError:
                summary_payload = None
            controller = engine.controller
            return {
                "time": now.isoformat(),
                "temperature": engine.room.temperature,
                "valve_open": engine.room.valve_open,
                "active_profile": controller.active_profile.value,
                "mode": controller.mode.value,
                "mode_expires_at": controller.mode_state.expires_at.isoformat()
                if controller.mode_state.expires_at
                else None,
                "setpoint": controller.setpoint if controller.setpoint_enabled else None,
                "price": price,
                "price_summary": summary_payload,
            }

        return guarded(read)

    @app.put("/v1/setpoint")
    def put_setpoint(body: SetpointBody):
        def write():
            engine.execute(AdjustSetpoint(value=body.value))
            return {"setpoint": engine.controller.setpoint, "mode": engine.controller.mode.value}

        return guarded(write)

    @app.put("/v1/mode")
    def put_mode(body: ModeBody):
        def write():
            engine.execute(SetMode(mode=body.mode))
            return {"mode": engine.controller.mode.value}

        return guarded(write)

    @app.get("/v1/schedule")
    def get_schedule():
        return guarded(lambda: schedule_mod.to_payload(engine.week))

    @app.put("/v1/schedule")
    def put_schedule(payload: dict):
        def write():
            engine.execute(SetWeek(payload_json=json.dumps(payload)))
            return schedule_mod.to_payload(engine.week)

        return guarded(write)

    @app.put("/v1/schedule/{day}")
    def put_day(day: str, body: DayBody):
        index = _day_index(day)

        def write():
            slots = tuple(
                (_hhmm_minutes(s.start), _hhmm_minutes(s.end), s.profile) for s in body.slots
            )
            engine.execute(EditDay(day=index, slots=slots))
            return schedule_mod.to_payload(engine.week)

        return guarded(write)

    @app.post("/v1/schedule/{day}/clear")
    def post_clear(day: str):
        index = _day_index(day)

        def write():
            engine.execute(ClearDay(day=index))
            return schedule_mod.to_payload(engine.week)

        return guarded(write)

    @app.post("/v1/schedule/copy")
    def post_copy(body: CopyBody):
        src, dst = _day_index(body.from_day), _day_index(body.to_day)

        def write():
            engine.execute(CopyDay(from_day=src, to_day=dst))
            return schedule_mod.to_payload(engine.week)

        return guarded(write)

    @app.get("/v1/profiles")
    def get_profiles():
        def read():
            return {
                "active": engine.controller.active_profile.value,
                "profiles": [p.value for p in Profile],
            }

        return guarded(read)

    @app.get("/v1/profiles/{name}")
    def get_profile(name: str):
        profile = _profile(name)

        def read():
            m = engine.bank[profile]
            return {
                "profile": profile.value,
                "model": m.record(),
                "preferred_temperature": float(m.mean[0]),
                "gauge": _gauge_payload(gauge(m)),
                "band": _band_payload(
                    predictive_band(m, xai_mod.BAND_PRICES, xai_mod.CONFIDENCE_LEVEL, engine.hyper)
                ),
            }

        return guarded(read)

    @app.post("/v1/profiles/reset-all")
    def post_reset_all():
        def write():
            engine.execute(ResetProfile(profile=None))
            return {"reset": [p.value for p in Profile]}

        return guarded(write)

    @app.post("/v1/profiles/{name}/reset")
    def post_reset(name: str):
        profile = _profile(name)

        def write():
            engine.execute(ResetProfile(profile=profile.value))
            return {"reset": [profile.value]}

        return guarded(write)

    @app.get("/v1/notifications")
    def get_notifications(
        category: list[str] | None = Query(default=None),
        date_from: date | None = Query(default=None, alias="from"),
        date_to: date | None = Query(default=None, alias="to"),
        page: int = 1,
        page_size: int = 20,
    ):
        def read():
            categories = None
            if category:
                try:
                    categories = {Category(c.lower()) for c in category}
                except ValueError:
                    raise QueryError(f"unknown category in {category}")
            start = datetime.combine(date_from, time.min, tzinfo=timezone.utc) if date_from else None
            end = datetime.combine(date_to, time.max, tzinfo=timezone.utc) if date_to else None
            records, total = engine.log.query(
                categories=categories, start=start, end=end, page=page, page_size=page_size
            )
            return {
                "total": total,
                "page": page,
                "page_size": page_size,
                "records": [
                    {
                        "id": r.id,
                        "at": r.at.isoformat(),
                        "category": r.category.value,
                        "kind": r.kind.value,
                        "message": render_notification(r),
                        "payload": r.payload,
                    }
                    for r in records
                ],
            }

        return guarded(read)

    @app.get("/v1/flashes")
    def get_flashes(since: int = 0):
        def read():
            return {
                "flashes": [
                    {"id": f.id, "at": f.at.isoformat(), "kind": f.kind.value, "text": f.text}
                    for f in engine.flashes_since(since)
                ]
            }

        return guarded(read)

    @app.get("/v1/xai/tooltips")
    def get_tooltips():
        return {"tooltips": list(xai_mod.TOOLTIPS)}

    @app.get("/v1/xai/{name}/frames")
    def get_frames(name: str):
        profile = _profile(name)

        def read():
            frames = engine.frames.get(profile, [])
            return {
                "profile": profile.value,
                "band_prices": [float(p) for p in xai_mod.BAND_PRICES],
                "frames": [
                    {
                        "index": f.index,
                        "model": f.model.record(),
                        "gauge": _gauge_payload(gauge(f.model)),
                        "ellipse": {
                            "center": list(f.ellipse.center),
                            "semi_axes": list(f.ellipse.semi_axes),
                            "orientation": f.ellipse.orientation,
                        },
                        "band": {
                            "mean": [float(v) for v in f.band[:, 0]],
                            "lower": [float(v) for v in f.band[:, 1]],
                            "upper": [float(v) for v in f.band[:, 2]],
                        },
                        "inputs": [[price, sp] for price, sp in f.inputs_so_far],
                    }
                    for f in frames
                ],
            }

        return guarded(read)

    @app.get("/v1/xai/{name}/schedule-series")
    def get_schedule_series(name: str, day: date):
        profile = _profile(name)

        def read():
            series = xai_mod.schedule_series(
                engine.bank[profile],
                engine.prices,
                day,
                evasion=_evasion_overlapping(engine, day),
                h=engine.hyper,
            )
            return _series_payload(series)

        return guarded(read)

    @app.get("/v1/xai/timeslot-series")
    def get_timeslot_series(day: str, start: str):
        index = _day_index(day)

        def read():
            now = engine.now()
            series = xai_mod.timeslot_series(
                engine.week,
                engine.bank,
                engine.prices,
                index,
                _hhmm_minutes(start),
                now,
                evasion=_evasion_overlapping(engine, now.date()),
                h=engine.hyper,
            )
            return _series_payload(series)

        return guarded(read)

    @app.get("/v1/prices")
    def get_prices(day: date):
        def read():
            slots = tariff_mod.day_slots(engine.prices, day)
            points = []
            for slot in slots:
                evasion = active_evasion(engine.attack_specs, slot.start)
                points.append(
                    {"start": slot.start.isoformat(), "price": effective_price(slot.price, evasion, slot.start)}
                )
            return {"day": day.isoformat(), "points": points}

        return guarded(read)

    @app.get("/v1/prices/days")
    def get_price_days():
        def read():
            lo, hi = engine.prices.coverage
            days = []
            cursor = lo.date()
            while datetime.combine(cursor, time.min, tzinfo=timezone.utc) + timedelta(days=1) <= hi:
                days.append(cursor.isoformat())
                cursor += timedelta(days=1)
            return {"days": days}

        return guarded(read)

    @app.post("/v1/admin/attacks")
    def post_attack(body: AttackBody, authorization: str = Header(default="")):
        if authorization != f"Bearer {engine.admin_token}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

        def write():
            try:
                kind = AttackKind(body.kind)
            except ValueError:
                raise ValidationError(f"unknown attack kind {body.kind!r}")
            start = body.start or engine.now()
            if start.tzinfo is None:
                start = start.replace(tzinfo=timezone.utc)
            spec = AttackSpec(
                kind=kind,
                start=start,
                count=body.count,
                low=body.low,
                high=body.high,
                multiplier=body.multiplier,
                duration=timedelta(minutes=body.duration_minutes) if body.duration_minutes else None,
            )
            engine.schedule_attack(spec)
            return {"scheduled": kind.value, "start": start.isoformat()}

        return guarded(write)

    return app


def _evasion_overlapping(engine: Engine, day: date) -> AttackSpec | None:
    """Evasion spec whose window touches the given day (for chart overlays)."""
    lo = datetime.combine(day, time.min, tzinfo=timezone.utc)
    hi = lo + timedelta(days=1)
    for spec in engine.attack_specs:
        if spec.kind is AttackKind.EVASION and spec.start < hi and spec.end > lo:
            return spec
    return None
