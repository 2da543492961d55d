"""Walkthrough: the price-evasion attack.

Evasion never touches a model.  For five hours every consumer of price --
the controller, the displays, the charts -- sees base price times three,
so the system quietly turns the heating down.  At exactly five hours the
window closes and everything snaps back.
"""

from datetime import datetime, timedelta, timezone

from heatlab import AttackKind, AttackSpec, Engine
from heatlab.tariff import PriceSeries, PriceSlot

start = datetime(2023, 1, 16, tzinfo=timezone.utc)
slots = tuple(
    PriceSlot(start=start + timedelta(minutes=30 * i), price=12.5) for i in range(2 * 48)
)
prices = PriceSeries(slots=slots)

attack = AttackSpec(kind=AttackKind.EVASION, start=start + timedelta(hours=3))
engine = Engine(prices, start=start, seed=1, attack_specs=[attack])

digest_before = engine.model_bank_digest()
checkpoints = [
    ("just before the attack", attack.start - timedelta(minutes=1)),
    ("attack begins", attack.start),
    ("mid-attack", attack.start + timedelta(hours=2, minutes=30)),
    ("final minute", attack.end - timedelta(minutes=1)),
    ("exactly five hours in", attack.end),
]
for label, at in checkpoints:
    engine.advance_to(at)
    price = engine.effective_price_at(engine.now())
    print(f"{label:24s} {at:%H:%M}  price {price:5.1f} p/kWh  "
          f"setpoint {engine.controller.setpoint} degC  room {engine.room.temperature:.1f} degC")

print()
print(f"Model bank digest unchanged: {engine.model_bank_digest() == digest_before}")
print("The only traces are the tripled prices, the lowered setpoints, the")
print("cooler room, and the valve's extra actuations -- all indicators a")
print("watchful operator can read off the panel and the logs.")
