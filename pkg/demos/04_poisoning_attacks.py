"""Walkthrough: overt vs concealed training-data poisoning.

Both attacks inject the same forty alternating 7.5/10 degC adjustments.
The overt one leaves 80 log entries; the concealed one leaves none visible,
yet the model ends up identically poisoned -- the dial and the predictions
are the only witnesses.
"""

from datetime import datetime, timedelta, timezone

from heatlab import AttackKind, AttackSpec, Engine, Profile, gauge, predict
from heatlab.events import Category
from heatlab.tariff import PriceSeries, PriceSlot

start = datetime(2023, 1, 16, tzinfo=timezone.utc)
slots = tuple(
    PriceSlot(start=start + timedelta(minutes=30 * i), price=12.5) for i in range(3 * 48)
)
prices = PriceSeries(slots=slots)


def run(kind: AttackKind):
    attack = AttackSpec(kind=kind, start=start + timedelta(hours=1))
    engine = Engine(prices, start=start, seed=1, attack_specs=[attack])
    engine.advance_to(attack.start + attack.duration + timedelta(hours=1, minutes=1))
    return engine


for kind in (AttackKind.SIMPLE_POISONING, AttackKind.COMPLEX_POISONING):
    engine = run(kind)
    model = engine.bank[Profile.NIGHTS]
    _, user_total = engine.log.query(categories={Category.USER}, page_size=1)
    reading = gauge(model)
    print(f"{kind.value}:")
    print(f"  model inputs learned: {model.input_count}")
    print(f"  visible user-category notifications: {user_total}")
    print(f"  hidden record ids in the mask: {len(engine.mask.hidden_ids)}")
    print(f"  prediction at 12.5p: {predict(model, 12.5).mean:.2f} degC "
          f"(published {engine.controller.setpoint})")
    print(f"  dial now reads: {reading.segment.value} "
          f"(value {reading.value:.3f} vs typical max {reading.upper_bound:.3f})")
    print(f"  replay frames for Nights: {len(engine.frames[Profile.NIGHTS])}")
    print()

print("Same learning, different visibility: the concealed attack shows no log")
print("entries and no extra replay frames, but the dial sits in the red and")
print("the controller obeys the poisoned model. Resetting the profile is the")
print("mitigation; resetting while injections are still arriving just gets")
print("the fresh model reinfected.")
