"""Acceptance criteria, one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  The Agile-dataset anchor is conditional: it skips (with the reason
recorded in the pytest output) unless the genuine 2019 London half-hourly
file is supplied via HEATLAB_AGILE_2019_CSV or data/agile_2019_london.csv.
"""

import os
import time
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np
import pytest

from heatlab import store
from heatlab.attacks import AttackKind, AttackSpec
from heatlab.control import Mode
from heatlab.engine import AdjustSetpoint, Engine, ResetProfile, SetMode
from heatlab.events import Category, EventKind, render_flash, render_notification
from heatlab.model import DEFAULT_HYPERPARAMETERS as H
from heatlab.model import (
    GaugeSegment,
    ModelState,
    Observation,
    default_model,
    gauge,
    predict,
    publish_setpoint,
    update,
)
from heatlab.plant import AgentPolicy, preferred_setpoint, rationality_regression
from heatlab.schedule import Profile
from heatlab.scenario import load_scenario, run_scenario
from heatlab.tariff import PriceSeries, PriceSlot, load_prices, parse_timestamp
from heatlab.xai import frames

from oracles import batch_posterior, batch_predict, brute_force_gauge_segment, publish_grid
from test_events import FLASH_MATRIX, NOTIFICATION_MATRIX, record

UTC = timezone.utc
T0 = datetime(2023, 1, 16, tzinfo=UTC)  # Monday 00:00
GOLDENS = Path(__file__).parent / "goldens"
SCENARIOS = Path(__file__).parent.parent / "scenarios"


def passed(name: str) -> None:
    print(f"[acceptance] {name}: PASS")


def constant_series(days=7, price=12.5):
    slots = tuple(
        PriceSlot(start=T0 + timedelta(minutes=30 * i), price=price) for i in range(days * 48)
    )
    return PriceSeries(slots=slots)


def poisoned_engine(kind: AttackKind, seed=1):
    attack = AttackSpec(kind=kind, start=T0 + timedelta(hours=1))
    engine = Engine(constant_series(), start=T0, seed=seed, attack_specs=[attack])
    return engine, attack


def injected_observations(attack: AttackSpec):
    from heatlab.attacks import injection_origin, plan_injections

    return [
        Observation(price=12.5, setpoint=value, at=at, origin=injection_origin(attack.kind))
        for at, value in plan_injections(attack)
    ]


def test_online_equals_batch_with_permutation_invariance():
    started = time.perf_counter()
    rng = np.random.default_rng(20230116)
    for _ in range(200):
        n = int(rng.integers(1, 51))
        prices = rng.uniform(0, 35, size=n)
        setpoints = 7.0 + 0.5 * rng.integers(0, 47, size=n)
        observations = [
            Observation(price=float(p), setpoint=float(s)) for p, s in zip(prices, setpoints)
        ]
        online = default_model(H)
        for obs in observations:
            online = update(online, obs, H)
        mu, cov = batch_posterior(H, observations)
        assert np.allclose(online.mean, mu, rtol=1e-9, atol=1e-12)
        assert np.allclose(online.covariance, cov, rtol=1e-9, atol=1e-14)

        permuted = list(observations)
        rng.shuffle(permuted)
        reordered = default_model(H)
        for obs in permuted:
            reordered = update(reordered, obs, H)
        assert np.allclose(online.mean, reordered.mean, rtol=1e-9, atol=1e-12)
        assert np.allclose(online.covariance, reordered.covariance, rtol=1e-9, atol=1e-14)
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    passed("online-equals-batch (200 sets, permutation-invariant, <5s)")


def test_default_model_anchors():
    m = default_model(H)
    assert predict(m, 0.0, H).mean == 22.0
    assert predict(m, 12.5, H).mean == 18.9375
    assert publish_setpoint(predict(m, 12.5, H)) == 19.0
    assert abs(predict(m, 0.0, H).variance - (1 / 0.33 + 1)) < 1e-12
    passed("default-model anchors (22.0 / 18.9375 / 19.0 / noise floor)")


def test_gauge_anchors_and_full_bucketing():
    reading = gauge(default_model(H))
    assert reading.segment is GaugeSegment.HIGH
    assert reading.upper_bound == (22.0 - 12.2) / 35.0

    cov = default_model(H).covariance
    low_bias = gauge(ModelState(mean=np.array([12.2, -0.3]), covariance=cov))
    assert low_bias.segment is GaugeSegment.UNDEFINED
    lower_bias = gauge(ModelState(mean=np.array([11.0, -0.3]), covariance=cov))
    assert lower_bias.segment is GaugeSegment.UNDEFINED
    positive_slope = gauge(ModelState(mean=np.array([22.0, 0.25]), covariance=cov))
    assert positive_slope.segment is GaugeSegment.NEGATIVE

    rng = np.random.default_rng(7)
    for _ in range(2000):
        bias = float(rng.uniform(5, 30))
        slope = float(rng.uniform(-1.5, 0.8))
        ours = gauge(ModelState(mean=np.array([bias, slope]), covariance=cov)).segment.value
        assert ours == brute_force_gauge_segment(bias, slope)
    passed("gauge anchors + brute-force bucketing table")


def test_simple_poisoning_scenario():
    engine, attack = poisoned_engine(AttackKind.SIMPLE_POISONING)
    window_end = attack.start + timedelta(minutes=20)
    engine.advance_to(window_end)

    in_window = [r for r in engine.log.records if attack.start <= r.at <= window_end]
    assert len(in_window) == 80
    assert sum(r.category is Category.USER for r in in_window) == 40
    assert sum(r.category is Category.SYSTEM for r in in_window) == 40
    assert all(r.visible for r in in_window)

    # The override from the last injection lapses an hour later; the poisoned
    # model then drives the published setpoint to the oracle-pinned value.
    oracle_mean, _ = batch_predict(H, injected_observations(attack), 12.5)
    pinned = publish_grid(oracle_mean)
    assert 7.5 <= pinned <= 10.5
    engine.advance_to(attack.start + timedelta(minutes=19.5) + timedelta(hours=1))
    assert engine.controller.mode is Mode.AUTO
    assert engine.controller.setpoint == pinned
    assert 7.5 <= engine.controller.setpoint <= 10.5

    engine.execute(ResetProfile(profile=Profile.NIGHTS.value))
    engine.advance_to(engine.now() + timedelta(minutes=1))
    assert predict(engine.bank[Profile.NIGHTS], 12.5, H).mean == 18.9375
    assert engine.controller.setpoint == 19.0
    passed("overt-poisoning scenario (80 records, pinned setpoint, reset restores 19.0)")


def test_complex_poisoning_scenario():
    overt, overt_attack = poisoned_engine(AttackKind.SIMPLE_POISONING)
    covert, covert_attack = poisoned_engine(AttackKind.COMPLEX_POISONING)
    overt.advance_to(overt_attack.start + timedelta(hours=2))
    covert.advance_to(covert_attack.start + timedelta(hours=2))

    a = overt.bank[Profile.NIGHTS]
    b = covert.bank[Profile.NIGHTS]
    assert np.array_equal(a.mean, b.mean) and np.array_equal(a.covariance, b.covariance)
    assert a.input_count == b.input_count == 40

    visible_in_window = [
        r
        for r in covert.log.records
        if covert_attack.start <= r.at <= covert_attack.start + timedelta(hours=1)
        and r.visible
        and r.kind in (EventKind.USER_SETPOINT, EventKind.PROFILE_UPDATE)
    ]
    assert visible_in_window == []
    page, total = covert.log.query(categories={Category.USER}, page_size=500)
    assert total == 0

    assert len(covert.frames[Profile.NIGHTS]) == 1  # unchanged by 40 hidden injections
    final = covert.frames[Profile.NIGHTS][-1]
    mu, cov = batch_posterior(H, injected_observations(covert_attack))
    assert np.allclose(final.model.mean, mu, rtol=1e-9)
    assert np.allclose(final.model.covariance, cov, rtol=1e-9)
    assert final.model.input_count == 40
    passed("covert-poisoning scenario (same learning, zero visible indicators, frames collapsed)")


def test_evasion_scenario():
    attack = AttackSpec(kind=AttackKind.EVASION, start=T0 + timedelta(hours=2))
    engine = Engine(constant_series(), start=T0, seed=1, attack_specs=[attack])
    engine.advance_to(attack.start)
    digest_before = engine.model_bank_digest()

    probes = [attack.start, attack.start + timedelta(hours=2, minutes=13), attack.end - timedelta(minutes=1)]
    for probe in probes:
        engine.advance_to(probe)
        assert engine.effective_price_at(engine.now()) == 37.5
        assert engine.controller.setpoint == publish_setpoint(predict(default_model(H), 37.5, H))

    engine.advance_to(attack.end)
    assert engine.effective_price_at(engine.now()) == 12.5
    assert engine.controller.setpoint == 19.0
    assert engine.model_bank_digest() == digest_before
    passed("evasion scenario (3x prices, model bank untouched, exact half-open window)")


def test_reinfection_after_mid_attack_reset():
    engine, attack = poisoned_engine(AttackKind.SIMPLE_POISONING)
    # Injection 20 of 40 fires at +9.5 min; reset lands right before it.
    reset_at = attack.start + timedelta(minutes=9, seconds=45)
    engine.submit(ResetProfile(profile=Profile.NIGHTS.value), at=reset_at)
    engine.advance_to(attack.start + timedelta(minutes=20))
    reinfected = engine.bank[Profile.NIGHTS]
    assert reinfected.input_count == 20
    assert not np.allclose(reinfected.mean, default_model(H).mean)

    engine.execute(ResetProfile(profile=Profile.NIGHTS.value))
    engine.advance_to(engine.now() + timedelta(hours=1))
    clean = engine.bank[Profile.NIGHTS]
    assert clean.input_count == 0
    assert np.array_equal(clean.mean, default_model(H).mean)
    passed("reinfection (mid-attack reset relearns, post-attack reset stays clean)")


def test_mode_timers_exact():
    engine = Engine(constant_series(), start=T0, seed=1)
    at = T0 + timedelta(minutes=17)
    engine.advance_to(at)
    engine.execute(AdjustSetpoint(value=25.0))
    engine.advance_to(at + timedelta(minutes=60) - timedelta(seconds=1))
    assert engine.controller.mode is Mode.OVERRIDE
    engine.advance_to(at + timedelta(minutes=60))
    assert engine.controller.mode is Mode.AUTO
    expected = publish_setpoint(predict(engine.bank[Profile.NIGHTS], 12.5, H))
    assert engine.controller.setpoint == expected

    for mode in ("on", "off"):
        t_mode = engine.now() + timedelta(minutes=5)
        engine.advance_to(t_mode)
        engine.execute(SetMode(mode=mode))
        engine.advance_to(t_mode + timedelta(minutes=60) - timedelta(seconds=1))
        assert engine.controller.mode.value == mode
        engine.advance_to(t_mode + timedelta(minutes=60))
        assert engine.controller.mode is Mode.AUTO
    passed("timers (override/on/off expire at exactly +60:00, auto republishes)")


def test_rational_agent_consistency():
    started = time.perf_counter()
    rng = np.random.default_rng(42)
    policy = AgentPolicy(true_bias=21.0, true_slope=-0.2, noise_sd=0.5)
    prices = rng.uniform(2, 35, size=200)
    observations = [
        Observation(price=float(p), setpoint=preferred_setpoint(policy, float(p), rng))
        for p in prices
    ]
    posterior = default_model(H)
    for obs in observations:
        posterior = update(posterior, obs, H)
    assert posterior.mean[0] == pytest.approx(21.0, abs=0.3)
    assert posterior.mean[1] == pytest.approx(-0.2, abs=0.3)
    assert rationality_regression(observations).p_value < 0.01

    setpoints = np.array([obs.setpoint for obs in observations])
    false_positives = 0
    trials = 1000
    for seed in range(trials):
        shuffled = np.random.default_rng(seed).permutation(setpoints)
        shuffled_obs = [
            Observation(price=float(p), setpoint=float(s)) for p, s in zip(prices, shuffled)
        ]
        if rationality_regression(shuffled_obs).p_value < 0.05:
            false_positives += 1
    rate = false_positives / trials
    assert rate <= 0.08, f"shuffled-label significance rate {rate:.3f}"
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"took {elapsed:.2f}s"
    passed(f"rational agent (posterior within 0.3, p<0.01, calibration {rate:.1%}, <30s)")


def test_template_goldens_byte_identical():
    notifications = "".join(
        render_notification(record(kind, payload)) + "\n" for kind, payload in NOTIFICATION_MATRIX
    )
    assert notifications.encode() == (GOLDENS / "notifications.txt").read_bytes()
    flashes = "".join(render_flash(kind, payload) + "\n" for kind, payload in FLASH_MATRIX)
    assert flashes.encode() == (GOLDENS / "flashes.txt").read_bytes()
    labels = "".join(segment.value + "\n" for segment in GaugeSegment)
    assert labels.encode() == (GOLDENS / "sensitivity_labels.txt").read_bytes()
    passed("template goldens (6 notifications, 7 flashes, 7 labels)")


def test_bundled_seven_week_scenario_deterministic(tmp_path):
    started = time.perf_counter()
    scenario_path = SCENARIOS / "seven_week.json"
    first = run_scenario(load_scenario(scenario_path), tmp_path / "a")
    second = run_scenario(load_scenario(scenario_path), tmp_path / "b")
    assert first == second
    for name in ("events.csv", "model_timeline.csv", "samples.csv", "regression.csv", "summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"took {elapsed:.2f}s"
    passed(f"seven-week determinism (byte-identical artifacts, {elapsed:.1f}s)")


def _find_agile_dataset():
    candidate = os.environ.get("HEATLAB_AGILE_2019_CSV")
    if candidate and Path(candidate).exists():
        return Path(candidate)
    bundled = Path(__file__).parent.parent / "data" / "agile_2019_london.csv"
    if bundled.exists():
        return bundled
    return None


def test_agile_2019_study_window_anchor():
    path = _find_agile_dataset()
    if path is None:
        pytest.skip(
            "2019 London Agile dataset not supplied "
            "(set HEATLAB_AGILE_2019_CSV or add data/agile_2019_london.csv); "
            "anchor (min 1.4, max 35, mean 12.5, SD 5.9) not checked"
        )
    series = load_prices(path)
    tolerance = 0.05
    target = {"min": 1.4, "max": 35.0, "mean": 12.5, "sd": 5.9}
    best = None
    for start_day in range(10, 32):
        for weeks in (7, 8, 9):
            lo = parse_timestamp(f"2019-01-{start_day:02d}T00:00:00Z")
            hi = lo + timedelta(weeks=weeks)
            window = np.array([s.price for s in series.slots if lo <= s.start < hi])
            if window.size == 0:
                continue
            for ddof in (0, 1):
                stats = {
                    "min": float(window.min()),
                    "max": float(window.max()),
                    "mean": float(window.mean()),
                    "sd": float(window.std(ddof=ddof)),
                }
                error = max(abs(stats[k] - target[k]) for k in target)
                if best is None or error < best:
                    best = error
                if error <= tolerance:
                    passed("Agile 2019 study-window anchor (min/max/mean/SD)")
                    return
    pytest.fail(f"no candidate study window matches the anchor; best max-error {best}")
