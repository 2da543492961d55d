"""Walkthrough: the sensitivity dial and the confidence geometry.

The dial compresses the learned slope onto six segments: a red segment for
negative sensitivity, four cyan segments for the typical range, and a red
segment for contextually high sensitivity.  The typical range scales with
the learned bias, so the same slope can read differently for different
households.  Confidence ellipses and predictive bands expose the posterior
uncertainty the dial hides.
"""

import numpy as np

from heatlab import (
    ModelState,
    Observation,
    confidence_ellipse,
    default_model,
    gauge,
    predictive_band,
    update,
)

model = default_model()
reading = gauge(model)
print("Default model on the dial:")
print(f"  displayed sensitivity {reading.value:.3f}, typical range tops out at {reading.upper_bound:.3f}")
print(f"  segment: {reading.segment.value}")

print("\nSweeping the slope across the dial (bias fixed at 22):")
for slope in (0.15, -0.01, -0.05, -0.1, -0.18, -0.26, -0.4):
    m = ModelState(mean=np.array([22.0, slope]), covariance=model.covariance)
    print(f"  slope {slope:+.2f} -> {gauge(m).segment.value}")

low_bias = ModelState(mean=np.array([12.0, -0.245]), covariance=model.covariance)
print(f"\nWith a bias of 12 degC the scale is undefined: {gauge(low_bias).segment.value}")

ellipse = confidence_ellipse(model, 0.95)
print("\n95% confidence ellipse over (bias, slope) for the default model:")
print(f"  center {ellipse.center}, semi-axes {tuple(round(a, 3) for a in ellipse.semi_axes)}")

print("\nAfter twenty inputs the ellipse shrinks:")
for i in range(20):
    model = update(model, Observation(price=5.0 + i * 1.5, setpoint=19.5 if i % 2 else 20.0))
ellipse = confidence_ellipse(model, 0.95)
print(f"  center ({ellipse.center[0]:.2f}, {ellipse.center[1]:+.3f}), "
      f"semi-axes {tuple(round(a, 4) for a in ellipse.semi_axes)}")

band = predictive_band(model, [0, 10, 20, 30], 0.95)
print("\nPredictive 95% band (mean / lower / upper):")
for price, (mean, lower, upper) in zip((0, 10, 20, 30), band):
    print(f"  {price:2d} p/kWh: {mean:6.2f}  [{lower:6.2f}, {upper:6.2f}]")
