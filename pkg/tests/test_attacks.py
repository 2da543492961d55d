from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from heatlab.attacks import (
    AttackKind,
    AttackScheduleError,
    AttackSpec,
    VisibilityMask,
    active_evasion,
    apply_injection,
    effective_price,
    mitigate_reset,
    plan_injections,
    validate_schedule,
)
from heatlab.model import DEFAULT_HYPERPARAMETERS as H
from heatlab.model import GaugeSegment, Observation, Origin, default_model, gauge, update
from heatlab.schedule import Profile

from oracles import batch_posterior

UTC = timezone.utc
T0 = datetime(2023, 2, 7, 19, 0, tzinfo=UTC)


def simple(start=T0):
    return AttackSpec(kind=AttackKind.SIMPLE_POISONING, start=start)

def complex_(start=T0):
    return AttackSpec(kind=AttackKind.COMPLEX_POISONING, start=start)

def evasion(start=T0):
    return AttackSpec(kind=AttackKind.EVASION, start=start)


class TestPlanInjections:
    def test_simple_spacing_and_values(self):
        plan = plan_injections(simple())
        assert len(plan) == 40
        assert plan[0] == (T0, 7.5)
        assert plan[1] == (T0 + timedelta(seconds=30), 10.0)
        assert plan[-1][0] == T0 + timedelta(seconds=30 * 39)

    def test_complex_last_injection_time(self):
        plan = plan_injections(complex_())
        assert plan[-1][0] == T0 + timedelta(minutes=58.5)
        assert plan[1][0] - plan[0][0] == timedelta(seconds=90)

    def test_alternation_parity(self):
        plan = plan_injections(simple())
        lows = [v for _, v in plan if v == 7.5]
        highs = [v for _, v in plan if v == 10.0]
        assert len(lows) == 20 and len(highs) == 20

    def test_evasion_does_not_inject(self):
        with pytest.raises(ValueError):
            plan_injections(evasion())


class TestApplyInjection:
    def test_overt_injection_drafts_two_visible_records(self):
        obs = Observation(price=12.5, setpoint=7.5, at=T0, origin=Origin.SIMPLE_POISONING)
        model, mask, drafts = apply_injection(
            default_model(H), obs, VisibilityMask(), AttackKind.SIMPLE_POISONING, H, obs_id=1
        )
        assert model.input_count == 1
        assert mask.hidden_ids == set()
        assert len(drafts) == 2
        assert all(visible for _, _, visible in drafts)

    def test_concealed_injection_hides_records_and_masks_id(self):
        obs = Observation(price=12.5, setpoint=7.5, at=T0, origin=Origin.COMPLEX_POISONING)
        model, mask, drafts = apply_injection(
            default_model(H), obs, VisibilityMask(), AttackKind.COMPLEX_POISONING, H, obs_id=7
        )
        assert model.input_count == 1
        assert mask.hidden_ids == {7}
        assert all(not visible for _, _, visible in drafts)

    def test_concealed_attack_moves_gauge_while_log_is_silent(self):
        model = default_model(H)
        mask = VisibilityMask()
        visible_drafts = []
        for i, (at, value) in enumerate(plan_injections(complex_())):
            obs = Observation(price=12.5, setpoint=value, at=at, origin=Origin.COMPLEX_POISONING)
            model, mask, drafts = apply_injection(model, obs, mask, AttackKind.COMPLEX_POISONING, H, obs_id=i)
            visible_drafts += [d for d in drafts if d[2]]
        assert visible_drafts == []
        assert gauge(model).segment is GaugeSegment.VERY_HIGH  # red, right-hand side

    def test_both_kinds_learn_identically(self):
        m1 = default_model(H)
        m2 = default_model(H)
        for i, (at, value) in enumerate(plan_injections(simple())):
            obs1 = Observation(price=12.5, setpoint=value, at=at, origin=Origin.SIMPLE_POISONING)
            obs2 = Observation(price=12.5, setpoint=value, at=at, origin=Origin.COMPLEX_POISONING)
            m1, _, _ = apply_injection(m1, obs1, VisibilityMask(), AttackKind.SIMPLE_POISONING, H, obs_id=i)
            m2, _, _ = apply_injection(m2, obs2, VisibilityMask(), AttackKind.COMPLEX_POISONING, H, obs_id=i)
        assert np.array_equal(m1.mean, m2.mean)
        assert np.array_equal(m1.covariance, m2.covariance)

    def test_final_model_matches_batch_oracle(self):
        model = default_model(H)
        observations = []
        for at, value in plan_injections(simple()):
            obs = Observation(price=12.5, setpoint=value, at=at, origin=Origin.SIMPLE_POISONING)
            observations.append(obs)
            model, _, _ = apply_injection(model, obs, VisibilityMask(), AttackKind.SIMPLE_POISONING, H)
        mu, cov = batch_posterior(H, observations)
        assert np.allclose(model.mean, mu, rtol=1e-9)
        assert np.allclose(model.covariance, cov, rtol=1e-9)


class TestEffectivePrice:
    def test_multiplies_inside_window(self):
        assert effective_price(12.5, evasion(), T0) == 37.5
        assert effective_price(12.5, evasion(), T0 + timedelta(hours=4, minutes=59)) == 37.5

    def test_reverts_at_exact_end(self):
        assert effective_price(12.5, evasion(), T0 + timedelta(hours=5)) == 12.5

    def test_identity_without_attack(self):
        assert effective_price(12.5, None, T0) == 12.5

    def test_bypasses_cap(self):
        assert effective_price(35.0, evasion(), T0) == 105.0

    def test_active_evasion_lookup(self):
        specs = [simple(), evasion(T0 + timedelta(days=1))]
        assert active_evasion(specs, T0) is None
        assert active_evasion(specs, T0 + timedelta(days=1, hours=2)) is specs[1]


class TestValidateSchedule:
    def test_same_day_pair_rejected_and_named(self):
        specs = [simple(T0.replace(hour=9)), complex_(T0.replace(hour=20))]
        with pytest.raises(AttackScheduleError) as err:
            validate_schedule(specs)
        message = str(err.value)
        assert "simple-poisoning" in message and "complex-poisoning" in message

    def test_exactly_24h_apart_allowed(self):
        specs = [simple(T0), complex_(T0 + timedelta(hours=24))]
        validate_schedule(specs)

    def test_evasion_overlap_allowed(self):
        specs = [simple(T0), evasion(T0 + timedelta(minutes=5)), evasion(T0 + timedelta(hours=2))]
        validate_schedule(specs)


class TestMitigation:
    def test_reset_restores_default(self):
        bank = {p: default_model(H) for p in Profile}
        bank[Profile.NIGHTS] = update(bank[Profile.NIGHTS], Observation(price=10.0, setpoint=7.5), H)
        fresh = mitigate_reset(bank, Profile.NIGHTS, T0, [])
        assert fresh[Profile.NIGHTS].input_count == 0

    def test_reset_unrelated_profile_leaves_attacked_model(self):
        bank = {p: default_model(H) for p in Profile}
        bank[Profile.NIGHTS] = update(bank[Profile.NIGHTS], Observation(price=10.0, setpoint=7.5), H)
        fresh = mitigate_reset(bank, Profile.EVENINGS, T0, [])
        assert fresh[Profile.NIGHTS].input_count == 1

    def test_reset_all(self):
        bank = {p: default_model(H) for p in Profile}
        bank[Profile.NIGHTS] = update(bank[Profile.NIGHTS], Observation(price=10.0, setpoint=7.5), H)
        fresh = mitigate_reset(bank, None, T0, [])
        assert all(fresh[p].input_count == 0 for p in Profile)
