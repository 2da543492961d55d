"""Walkthrough: how the setpoint-learning model works.

The model is a tiny Bayesian linear regression from energy price to target
temperature.  It starts from a fixed prior (the "default model": preferred
temperature 22degC if energy were free, price sensitivity 0.245degC per
p/kWh) and every manual adjustment nudges it.
"""

from heatlab import Observation, default_model, predict, publish_setpoint, update

model = default_model()
print("The default model, before any inputs:")
print(f"  preferred temperature (if energy were free): {model.mean[0]:.2f} degC")
print(f"  slope: {model.mean[1]:.3f} degC per p/kWh")

print("\nWhat it would do at a few prices:")
for price in (0.0, 12.5, 35.0):
    d = predict(model, price)
    print(
        f"  at {price:5.1f} p/kWh -> mean {d.mean:7.4f} degC, "
        f"published setpoint {publish_setpoint(d):4.1f} degC "
        f"(sd {d.variance ** 0.5:.2f})"
    )

print("\nNow the household repeatedly asks for 19.5 degC while prices sit around 14p:")
for i in range(6):
    model = update(model, Observation(price=14.0 + 0.5 * (i % 3), setpoint=19.5))
    d = predict(model, 14.0)
    print(
        f"  after input {i + 1}: bias {model.mean[0]:6.3f}, slope {model.mean[1]:+.4f}, "
        f"prediction at 14p {d.mean:6.3f} -> {publish_setpoint(d):4.1f} degC"
    )

print("\nThe posterior tightened around the household's actual habits;")
print("the published value is always clamped to [7, 30] and the 0.5 degC grid.")
