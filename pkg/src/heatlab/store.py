"""Embedded durable store (SQLite).

Logical schema: four data tables -- events, observations, model_snapshots,
samples -- plus one meta key-value table holding the live snapshot
(controller, clock, schedule, pending commands, RNG state).  A persisted
run recovers exactly: continuing a recovered engine replays identically
to an uninterrupted one.
"""

from __future__ import annotations

import json
import sqlite3
from pathlib import Path

from .engine import Engine
from .tariff import PriceSeries

SCHEMA = """
CREATE TABLE IF NOT EXISTS events (
    id INTEGER PRIMARY KEY,
    at TEXT NOT NULL,
    kind TEXT NOT NULL,
    payload TEXT NOT NULL,
    visible INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS observations (
    id INTEGER PRIMARY KEY,
    at TEXT NOT NULL,
    profile TEXT NOT NULL,
    price REAL NOT NULL,
    setpoint REAL NOT NULL,
    origin TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS model_snapshots (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    at TEXT NOT NULL,
    profile TEXT NOT NULL,
    record TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS samples (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    at TEXT NOT NULL,
    temperature REAL NOT NULL,
    valve_open INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS meta (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
"""


class RecoveryError(RuntimeError):
    """Store contents are unusable; the message carries the last-good watermark."""


def persist(engine: Engine, path: str | Path) -> None:
    """Write the engine's full state, replacing any previous snapshot."""
    con = sqlite3.connect(str(path))
    try:
        con.executescript(SCHEMA)
        con.execute("DELETE FROM events")
        con.execute("DELETE FROM observations")
        con.execute("DELETE FROM model_snapshots")
        con.execute("DELETE FROM samples")
        con.execute("DELETE FROM meta")
        con.executemany(
            "INSERT INTO events (id, at, kind, payload, visible) VALUES (?, ?, ?, ?, ?)",
            [
                (r.id, r.at.isoformat(), r.kind.value, json.dumps(r.payload, sort_keys=True), int(r.visible))
                for r in engine.log.records
            ],
        )
        con.executemany(
            "INSERT INTO observations (id, at, profile, price, setpoint, origin) VALUES (?, ?, ?, ?, ?, ?)",
            [
                (obs_id, obs.at.isoformat(), profile.value, obs.price, obs.setpoint, obs.origin.value)
                for profile, pairs in engine.observations.items()
                for obs_id, obs in pairs
            ],
        )
        con.executemany(
            "INSERT INTO model_snapshots (at, profile, record) VALUES (?, ?, ?)",
            [
                (at.isoformat(), profile.value, json.dumps(record, sort_keys=True))
                for at, profile, record in engine.model_timeline
            ],
        )
        con.executemany(
            "INSERT INTO samples (at, temperature, valve_open) VALUES (?, ?, ?)",
            [(s.at.isoformat(), s.temperature, int(s.valve_open)) for s in engine.samples],
        )
        con.execute(
            "INSERT INTO meta (key, value) VALUES ('snapshot', ?)",
            (json.dumps(engine.meta_record(), sort_keys=True),),
        )
        con.commit()
    finally:
        con.close()


def recover(path: str | Path, prices: PriceSeries) -> Engine:
    """Rebuild a live engine from a persisted snapshot."""
    con = sqlite3.connect(str(path))
    try:
        try:
            row = con.execute("SELECT value FROM meta WHERE key = 'snapshot'").fetchone()
        except sqlite3.DatabaseError as exc:
            raise RecoveryError(f"store unreadable: {exc}; last-good watermark unknown") from exc
        if row is None:
            raise RecoveryError("store has no snapshot; last-good watermark: none")
        try:
            meta = json.loads(row[0])
        except json.JSONDecodeError as exc:
            raise RecoveryError(f"corrupt snapshot: {exc}; last-good watermark unknown") from exc

        events = [
            {"id": r[0], "at": r[1], "kind": r[2], "payload": json.loads(r[3]), "visible": bool(r[4])}
            for r in con.execute("SELECT id, at, kind, payload, visible FROM events ORDER BY id")
        ]
        observations = [
            {"id": r[0], "at": r[1], "profile": r[2], "price": r[3], "setpoint": r[4], "origin": r[5]}
            for r in con.execute("SELECT id, at, profile, price, setpoint, origin FROM observations ORDER BY id")
        ]
        model_timeline = [
            {"at": r[0], "profile": r[1], "record": json.loads(r[2])}
            for r in con.execute("SELECT at, profile, record FROM model_snapshots ORDER BY seq")
        ]
        samples = [
            {"at": r[0], "temperature": r[1], "valve_open": bool(r[2])}
            for r in con.execute("SELECT at, temperature, valve_open FROM samples ORDER BY seq")
        ]
    finally:
        con.close()
    try:
        return Engine.from_snapshot(prices, meta, observations, events, samples, model_timeline)
    except (KeyError, ValueError) as exc:
        watermark = meta.get("now", "unknown")
        raise RecoveryError(f"snapshot inconsistent: {exc}; last-good watermark: {watermark}") from exc
