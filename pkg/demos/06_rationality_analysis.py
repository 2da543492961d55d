"""Walkthrough: checking whether a household behaves economically rationally.

If a household truly trades comfort against price, its manual adjustments
should show a statistically significant negative slope against price.  We
regress setpoint on price for agents at several noise levels and watch the
p-value give out.
"""

import numpy as np

from heatlab import AgentPolicy, Observation, rationality_regression
from heatlab.plant import preferred_setpoint

rng = np.random.default_rng(2023)
prices = rng.uniform(2, 35, size=60)

print(f"{'noise sd':>9s} {'slope':>8s} {'intercept':>10s} {'p-value':>10s}  verdict (p < 0.05)")
for noise in (0.0, 0.5, 1.5, 4.0, 12.0):
    policy = AgentPolicy(true_bias=21.0, true_slope=-0.2, noise_sd=noise)
    observations = [
        Observation(price=float(p), setpoint=preferred_setpoint(policy, float(p), rng))
        for p in prices
    ]
    result = rationality_regression(observations)
    verdict = "rational" if result.p_value < 0.05 else "not significant"
    print(f"{noise:9.1f} {result.slope:8.3f} {result.intercept:10.2f} {result.p_value:10.2e}  {verdict}")

print()
print("A price-indifferent household (true slope 0) for comparison:")
flat = AgentPolicy(true_bias=20.0, true_slope=0.0, noise_sd=1.0)
observations = [
    Observation(price=float(p), setpoint=preferred_setpoint(flat, float(p), rng)) for p in prices
]
result = rationality_regression(observations)
print(f"  slope {result.slope:+.3f}, p = {result.p_value:.3f} -> "
      f"{'looks rational' if result.p_value < 0.05 else 'no evidence of price response'}")
