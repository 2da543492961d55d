#!/usr/bin/env python3
"""Generate test fixtures straight from the backend API.

The console's agreement tests compare what the UI renders against genuine
engine payloads, so the fixtures here are captured through the real HTTP
surface (via the in-process test client), not hand-written.
"""

import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from heatlab.api import build_app
from heatlab.engine import AdjustSetpoint, Engine
from heatlab.model import ModelState
from heatlab.schedule import Profile
from heatlab.tariff import synthetic_prices

OUT = Path(__file__).parent.parent / "tests" / "fixtures"
T0 = datetime(2023, 1, 16, tzinfo=timezone.utc)


def random_model(rng) -> ModelState:
    bias = float(rng.uniform(8, 30))
    slope = float(rng.uniform(-1.0, 0.4))
    a = float(rng.uniform(0.05, 2.0))
    c = float(rng.uniform(0.001, 0.05))
    b = float(rng.uniform(-0.8, 0.8)) * (a * c) ** 0.5
    return ModelState(
        mean=np.array([bias, slope]),
        covariance=np.array([[a, b], [b, c]]),
        input_count=int(rng.integers(0, 60)),
    )


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(11)

    engine = Engine(synthetic_prices(T0, days=9, seed=31), start=T0, seed=2)
    client = TestClient(build_app(engine))

    profiles = []
    for _ in range(20):
        engine.bank[Profile.NIGHTS] = random_model(rng)
        payload = client.get("/v1/profiles/Nights").json()
        profiles.append(payload)
    (OUT / "profiles.json").write_text(json.dumps(profiles, indent=1), encoding="utf-8")

    # A frames payload with real replay history: several adjustments at
    # different prices, then let the worker pre-generate the frames.
    engine.bank[Profile.NIGHTS] = random_model(rng)
    client.post("/v1/profiles/Nights/reset")
    for value in (19.0, 20.5, 18.0, 21.0, 19.5, 17.5):
        engine.execute(AdjustSetpoint(value=value))
        engine.advance_to(engine.now() + timedelta(minutes=31))
    frames = client.get("/v1/xai/Nights/frames").json()
    (OUT / "frames.json").write_text(json.dumps(frames, indent=1), encoding="utf-8")

    series = {
        "day1": client.get("/v1/xai/Nights/schedule-series", params={"day": "2023-01-17"}).json(),
        "day2": client.get("/v1/xai/Nights/schedule-series", params={"day": "2023-01-18"}).json(),
    }
    (OUT / "series.json").write_text(json.dumps(series, indent=1), encoding="utf-8")

    state = client.get("/v1/state").json()
    (OUT / "state.json").write_text(json.dumps(state, indent=1), encoding="utf-8")

    schedule = client.get("/v1/schedule").json()
    (OUT / "schedule.json").write_text(json.dumps(schedule, indent=1), encoding="utf-8")

    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
