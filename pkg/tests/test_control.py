from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from heatlab.control import (
    ControlRejected,
    ControllerState,
    Mode,
    ModeState,
    ValidationError,
    controller_tick,
    initial_controller,
    reset_profiles,
    set_mode,
    user_adjust_setpoint,
)
from heatlab.events import EventKind, FlashKind
from heatlab.model import DEFAULT_HYPERPARAMETERS as H
from heatlab.model import default_model, gauge, predict, publish_setpoint
from heatlab.schedule import Profile, default_week

UTC = timezone.utc
NOW = datetime(2023, 1, 2, 3, 0, tzinfo=UTC)  # Monday 03:00 -> Nights
WEEK = default_week()


def fresh_bank():
    return {p: default_model(H) for p in Profile}


def auto_state():
    return initial_controller(WEEK, NOW)


class TestUserAdjust:
    def test_adjust_enables_override_and_learns(self):
        result = user_adjust_setpoint(auto_state(), default_model(H), 19.0, 12.5, NOW, H)
        assert result.state.mode is Mode.OVERRIDE
        assert result.state.mode_state.expires_at == NOW + timedelta(minutes=60)
        assert result.state.setpoint == 19.0
        assert result.model.input_count == 1
        kinds = [kind for kind, _, _ in result.events]
        assert kinds == [EventKind.USER_SETPOINT, EventKind.PROFILE_UPDATE]

    def test_repeat_adjustment_restarts_timer(self):
        first = user_adjust_setpoint(auto_state(), default_model(H), 19.0, 12.5, NOW, H)
        later = NOW + timedelta(minutes=25)
        second = user_adjust_setpoint(first.state, first.model, 18.5, 12.5, later, H)
        assert second.state.mode_state.expires_at == later + timedelta(minutes=60)

    def test_off_grid_value_rejected(self):
        with pytest.raises(ValidationError):
            user_adjust_setpoint(auto_state(), default_model(H), 19.3, 12.5, NOW, H)

    def test_rejected_while_valve_forced(self):
        state = set_mode(auto_state(), Mode.ON, NOW).state
        with pytest.raises(ControlRejected):
            user_adjust_setpoint(state, default_model(H), 19.0, 12.5, NOW, H)

    def test_profile_update_event_carries_post_update_gauge(self):
        result = user_adjust_setpoint(auto_state(), default_model(H), 7.5, 12.5, NOW, H)
        _, payload, _ = result.events[1]
        assert payload["sensitivity"] == gauge(result.model).segment.value
        assert payload["preferred"] == pytest.approx(float(result.model.mean[0]))

    def test_hidden_adjustment_drafts_invisible_events_and_no_flashes(self):
        from heatlab.model import Origin

        result = user_adjust_setpoint(
            auto_state(), default_model(H), 7.5, 12.5, NOW, H,
            origin=Origin.COMPLEX_POISONING, visible=False,
        )
        assert all(not visible for _, _, visible in result.events)
        assert result.flashes == []


class TestSetMode:
    def test_on_sets_one_hour_timer(self):
        result = set_mode(auto_state(), Mode.ON, NOW)
        assert result.state.mode is Mode.ON
        assert result.state.mode_state.expires_at == NOW + timedelta(minutes=60)

    def test_auto_cancels_override_and_republishes(self):
        adjusted = user_adjust_setpoint(auto_state(), default_model(H), 25.0, 12.5, NOW, H)
        bank = fresh_bank()
        bank[Profile.NIGHTS] = adjusted.model
        cancelled = set_mode(adjusted.state, Mode.AUTO, NOW + timedelta(minutes=5))
        assert cancelled.state.mode is Mode.AUTO
        tick = controller_tick(cancelled.state, bank, WEEK, 12.5, NOW + timedelta(minutes=5), H)
        expected = publish_setpoint(predict(bank[Profile.NIGHTS], 12.5, H))
        assert tick.state.setpoint == expected

    def test_repeated_on_restarts_timer(self):
        first = set_mode(auto_state(), Mode.ON, NOW)
        second = set_mode(first.state, Mode.ON, NOW + timedelta(minutes=30))
        assert second.state.mode_state.expires_at == NOW + timedelta(minutes=90)

    def test_cannot_request_override_directly(self):
        with pytest.raises(ValidationError):
            set_mode(auto_state(), Mode.OVERRIDE, NOW)

    def test_mode_state_invariant(self):
        with pytest.raises(ValueError):
            ModeState(Mode.ON, None)
        with pytest.raises(ValueError):
            ModeState(Mode.AUTO, NOW)


class TestReset:
    def test_reset_one_profile(self):
        bank = fresh_bank()
        from heatlab.model import Observation, update

        bank[Profile.NIGHTS] = update(bank[Profile.NIGHTS], Observation(price=10.0, setpoint=25.0), H)
        bank[Profile.EVENINGS] = update(bank[Profile.EVENINGS], Observation(price=10.0, setpoint=25.0), H)
        fresh, events, flashes = reset_profiles(bank, Profile.NIGHTS, H)
        assert fresh[Profile.NIGHTS].input_count == 0
        assert fresh[Profile.EVENINGS].input_count == 1
        assert [kind for kind, _, _ in events] == [EventKind.PROFILE_RESET]
        assert flashes == [(FlashKind.RESET_ONE, {"profile": "Nights"})]

    def test_reset_all(self):
        bank = fresh_bank()
        from heatlab.model import Observation, update

        for profile in Profile:
            bank[profile] = update(bank[profile], Observation(price=10.0, setpoint=25.0), H)
        fresh, events, flashes = reset_profiles(bank, None, H)
        assert all(fresh[p].input_count == 0 for p in Profile)
        assert len(events) == 5
        assert flashes == [(FlashKind.RESET_ALL, {})]

    def test_reset_then_predict_default_bias(self):
        bank, _, _ = reset_profiles(fresh_bank(), None, H)
        assert predict(bank[Profile.NIGHTS], 0.0, H).mean == 22.0


class TestControllerTick:
    def test_price_change_republishes_once(self):
        state = auto_state()
        bank = fresh_bank()
        t1 = NOW + timedelta(minutes=30)
        first = controller_tick(state, bank, WEEK, 12.5, NOW, H)
        assert first.state.setpoint == 19.0
        # Same price: no new event.
        again = controller_tick(first.state, bank, WEEK, 12.5, t1, H)
        assert again.events == []
        # Slot rolls over to a price that moves the prediction by half a degree.
        moved = controller_tick(again.state, bank, WEEK, 14.5, t1 + timedelta(minutes=30), H)
        assert moved.state.setpoint == 18.5
        assert [kind for kind, _, _ in moved.events] == [EventKind.SYSTEM_SETPOINT]

    def test_no_publication_while_override(self):
        adjusted = user_adjust_setpoint(auto_state(), default_model(H), 25.0, 12.5, NOW, H)
        bank = fresh_bank()
        tick = controller_tick(adjusted.state, bank, WEEK, 20.0, NOW + timedelta(minutes=10), H)
        assert tick.state.setpoint == 25.0
        assert all(kind is not EventKind.SYSTEM_SETPOINT for kind, _, _ in tick.events)

    def test_expiry_returns_to_auto_with_updated_model(self):
        adjusted = user_adjust_setpoint(auto_state(), default_model(H), 25.0, 12.5, NOW, H)
        bank = fresh_bank()
        bank[Profile.NIGHTS] = adjusted.model
        expiry = adjusted.state.mode_state.expires_at
        tick = controller_tick(adjusted.state, bank, WEEK, 12.5, expiry, H)
        assert tick.state.mode is Mode.AUTO
        assert tick.state.setpoint == publish_setpoint(predict(adjusted.model, 12.5, H))

    def test_missing_price_holds_setpoint_and_warns_once(self):
        state = controller_tick(auto_state(), fresh_bank(), WEEK, 12.5, NOW, H).state
        first = controller_tick(state, fresh_bank(), WEEK, None, NOW + timedelta(minutes=1), H)
        assert first.state.setpoint == state.setpoint
        assert [kind for kind, _, _ in first.events] == [EventKind.INTEGRITY]
        second = controller_tick(first.state, fresh_bank(), WEEK, None, NOW + timedelta(minutes=2), H)
        assert second.events == []

    def test_profile_change_triggers_flash_and_republish(self):
        state = controller_tick(auto_state(), fresh_bank(), WEEK, 12.5, NOW, H).state
        bank = fresh_bank()
        from heatlab.model import Observation, update

        bank[Profile.MORNINGS] = update(
            bank[Profile.MORNINGS], Observation(price=12.5, setpoint=25.0), H
        )
        crossing = NOW.replace(hour=6, minute=30)
        tick = controller_tick(state, bank, WEEK, 12.5, crossing, H)
        assert tick.state.active_profile is Profile.MORNINGS
        assert (FlashKind.ACTIVE_PROFILE, {"profile": "Mornings"}) in tick.flashes
        assert tick.state.setpoint == publish_setpoint(predict(bank[Profile.MORNINGS], 12.5, H))

    def test_idempotent_replay(self):
        state = auto_state()
        bank = fresh_bank()
        once = controller_tick(state, bank, WEEK, 12.5, NOW, H)
        twice = controller_tick(once.state, bank, WEEK, 12.5, NOW, H)
        assert twice.events == [] and twice.flashes == []
        assert twice.state == once.state
