"""Walkthrough: a simulated household living a week on a dynamic tariff.

One engine owns everything: the five profile models, the weekly schedule,
the controller with its one-hour override timer, the room thermals, and the
notification log.  Here a rational agent nudges the setpoint a few times a
day and we watch the system follow the prices.
"""

from datetime import datetime, timedelta, timezone

from heatlab import Engine, Profile, synthetic_prices
from heatlab.engine import AgentAction
from heatlab.plant import AgentPolicy, draw_action_times

import numpy as np

start = datetime(2023, 1, 16, tzinfo=timezone.utc)  # a Monday
prices = synthetic_prices(start, days=8, seed=11)
engine = Engine(prices, start=start, seed=3)

policy = AgentPolicy(true_bias=21.0, true_slope=-0.2, noise_sd=0.5, actions_per_day=3.0)
rng = np.random.default_rng(5)
for at in draw_action_times(policy, start, start + timedelta(days=7), rng):
    engine.submit(
        AgentAction(
            true_bias=policy.true_bias,
            true_slope=policy.true_slope,
            noise_sd=policy.noise_sd,
            actions_per_day=policy.actions_per_day,
        ),
        at=at,
    )

engine.advance_to(start + timedelta(days=7))

print("A week has passed. Learned models per profile:")
for profile in Profile:
    m = engine.bank[profile]
    print(
        f"  {profile.value:9s}: {m.input_count:3d} inputs, "
        f"bias {m.mean[0]:6.2f}, slope {m.mean[1]:+.3f}"
    )

print(f"\nRoom temperature now: {engine.room.temperature:.1f} degC "
      f"(valve {'open' if engine.room.valve_open else 'closed'})")
print(f"Sensor samples recorded: {len(engine.samples)} (every 5 virtual minutes)")

records, total = engine.log.query(page_size=8)
print(f"\nNewest of {total} notifications:")
from heatlab.events import render_notification

for r in records:
    print(f"  {r.at:%a %H:%M}  [{r.category.value}] {render_notification(r)}")

print("\nLast few flash messages:")
for flash in engine.flashes[-5:]:
    print(f"  {flash.at:%a %H:%M}  {flash.text}")
