"""Price-aware setpoint learning with a conjugate Gaussian linear model.

The learned preference of a household is a straight line from energy price
(p/kWh) to target temperature (degC), held as a bivariate Gaussian over
(bias, slope).  Every manual setpoint change is an observation that sharpens
the posterior; predictions for the current price drive the automatic
setpoint.  The model is deliberately tiny (two parameters) so that every
number shown to the user -- the dial, the charts, the notification text --
can be read straight off the posterior.

The posterior is maintained in covariance form and refreshed with the
closed-form 2x2 adjugate inverse: at fixed dimension two this is exact,
fast, and keeps the update free of iterative linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.stats import chi2, norm

# Hardware setpoint grid (half-degree steps).
SETPOINT_MIN = 7.0
SETPOINT_MAX = 30.0
SETPOINT_STEP = 0.5

# Dynamic-tariff unit price cap, p/kWh.
PRICE_CAP = 35.0

# Reference "low" setpoint used to scale the sensitivity dial.
GAUGE_LOW_SETPOINT = 12.2


class ConfigurationError(ValueError):
    """Invalid model hyperparameters."""


class RejectedInput(ValueError):
    """Observation the model refuses to learn from."""


class DegenerateCovariance(ValueError):
    """Covariance is not symmetric positive definite."""


def is_on_grid(value: float) -> bool:
    """True if ``value`` is a setpoint the valve hardware can hold."""
    if not math.isfinite(value) or not SETPOINT_MIN <= value <= SETPOINT_MAX:
        return False
    return abs(value * 2 - round(value * 2)) < 1e-9


@dataclass(frozen=True)
class Hyperparameters:
    """Prior over (bias, slope) plus the input noise precision.

    ``bias_mean`` is the preferred temperature if energy were free (degC),
    ``slope_mean`` the prior price sensitivity (degC per p/kWh).  The
    correlation couples the two prior marginals; ``noise_precision`` is the
    precision (1/variance) attributed to each observed setpoint.
    """

    bias_mean: float = 22.0
    slope_mean: float = -0.245
    bias_var: float = 1.0
    slope_var: float = 0.01
    correlation: float = -0.3
    noise_precision: float = 0.33

    def __post_init__(self) -> None:
        if not (self.bias_var > 0 and self.slope_var > 0):
            raise ConfigurationError("prior variances must be positive")
        if not self.noise_precision > 0:
            raise ConfigurationError("noise precision must be positive")
        if not -1 < self.correlation < 1:
            raise ConfigurationError("correlation must lie strictly in (-1, 1)")


DEFAULT_HYPERPARAMETERS = Hyperparameters()


class Origin(Enum):
    """Who produced an observation."""

    USER = "user"
    SIMPLE_POISONING = "simple-poisoning"
    COMPLEX_POISONING = "complex-poisoning"


@dataclass(frozen=True)
class Observation:
    """One labelled input: the price seen and the setpoint chosen."""

    price: float
    setpoint: float
    at: datetime | None = None
    origin: Origin = Origin.USER

    def __post_init__(self) -> None:
        if not is_on_grid(self.setpoint):
            raise RejectedInput(f"setpoint {self.setpoint} is not on the hardware grid")


@dataclass(frozen=True, eq=False)
class ModelState:
    """Gaussian posterior over (bias, slope).

    ``mean`` is a 2-vector (bias degC, slope degC per p/kWh); ``covariance``
    a symmetric positive definite 2x2 matrix.  ``input_count`` counts updates
    applied since the last reset.
    """

    mean: np.ndarray
    covariance: np.ndarray
    input_count: int = 0

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float).reshape(2)
        cov = np.asarray(self.covariance, dtype=float).reshape(2, 2)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        a, b, c = cov[0, 0], cov[0, 1], cov[1, 1]
        if not np.isfinite(cov).all() or abs(b - cov[1, 0]) > 1e-12:
            raise DegenerateCovariance("covariance must be finite and symmetric")
        if not (a > 0 and a * c - b * b > 0):
            raise DegenerateCovariance("covariance must be positive definite")
        if self.input_count < 0:
            raise ValueError("input_count must be non-negative")

    def record(self) -> dict:
        """Canonical wire/storage form shared by the API, store, and charts."""
        a, b, c = self.covariance[0, 0], self.covariance[0, 1], self.covariance[1, 1]
        return {
            "mean": [float(self.mean[0]), float(self.mean[1])],
            "covariance": [[float(a), float(b)], [float(b), float(c)]],
            "input_count": int(self.input_count),
        }

    @classmethod
    def from_record(cls, record: dict) -> "ModelState":
        return cls(
            mean=np.array(record["mean"], dtype=float),
            covariance=np.array(record["covariance"], dtype=float),
            input_count=int(record["input_count"]),
        )


@dataclass(frozen=True)
class PredictiveDistribution:
    """Gaussian over the setpoint predicted for one price."""

    mean: float
    variance: float


class GaugeSegment(Enum):
    """Six dial segments plus the hidden-dial state.

    Values are the exact labels embedded in notification text.
    """

    NEGATIVE = "Negative"
    VERY_LOW = "Very low"
    LOW = "Low"
    MODERATE = "Moderate"
    HIGH = "High"
    VERY_HIGH = "Very high"
    UNDEFINED = "Undefined"


@dataclass(frozen=True)
class GaugeReading:
    """Displayed price sensitivity and the segment the dial points at.

    ``upper_bound`` is the top of the typical range; the four middle
    segments split [0, upper_bound] into equal quarters.
    """

    value: float
    segment: GaugeSegment
    upper_bound: float


@dataclass(frozen=True)
class ConfidenceEllipse:
    """Equal-probability contour of the posterior over (bias, slope)."""

    center: tuple[float, float]
    semi_axes: tuple[float, float]  # sorted descending
    orientation: float  # radians, in [-pi/2, pi/2)


def default_model(h: Hyperparameters = DEFAULT_HYPERPARAMETERS) -> ModelState:
    """The fixed prior used at initialisation and after every reset."""
    off = h.correlation * math.sqrt(h.bias_var) * math.sqrt(h.slope_var)
    return ModelState(
        mean=np.array([h.bias_mean, h.slope_mean]),
        covariance=np.array([[h.bias_var, off], [off, h.slope_var]]),
        input_count=0,
    )


def update(m: ModelState, obs: Observation, h: Hyperparameters = DEFAULT_HYPERPARAMETERS) -> ModelState:
    """Fold one observation into the posterior (pure; input unchanged).

    The design vector is [1, price] so the predictive mean reads
    bias + slope * price.
    """
    if not (math.isfinite(obs.price) and math.isfinite(obs.setpoint)):
        raise RejectedInput("price and setpoint must be finite")
    beta = h.noise_precision
    p, y = obs.price, obs.setpoint
    m0, m1 = float(m.mean[0]), float(m.mean[1])
    a, b, c = float(m.covariance[0, 0]), float(m.covariance[0, 1]), float(m.covariance[1, 1])

    # Prior precision via the 2x2 adjugate.
    det = a * c - b * b
    pa, pb, pc = c / det, -b / det, a / det
    # Posterior precision = prior precision + beta * [1,p][1,p]^T.
    qa = pa + beta
    qb = pb + beta * p
    qc = pc + beta * p * p
    qdet = qa * qc - qb * qb
    # Back to covariance form.
    ca, cb, cc = qc / qdet, -qb / qdet, qa / qdet
    # Posterior mean = cov' (prior_precision mu + beta y [1,p]).
    r0 = pa * m0 + pb * m1 + beta * y
    r1 = pb * m0 + pc * m1 + beta * y * p
    mu0 = ca * r0 + cb * r1
    mu1 = cb * r0 + cc * r1
    return ModelState(
        mean=np.array([mu0, mu1]),
        covariance=np.array([[ca, cb], [cb, cc]]),
        input_count=m.input_count + 1,
    )


def predict(m: ModelState, price: float, h: Hyperparameters = DEFAULT_HYPERPARAMETERS) -> PredictiveDistribution:
    """Predictive Gaussian over the setpoint at ``price``."""
    if not math.isfinite(price):
        raise RejectedInput("price must be finite")
    a, b, c = float(m.covariance[0, 0]), float(m.covariance[0, 1]), float(m.covariance[1, 1])
    mean = float(m.mean[0]) + float(m.mean[1]) * price
    variance = 1.0 / h.noise_precision + a + 2.0 * b * price + c * price * price
    return PredictiveDistribution(mean=mean, variance=variance)


def publish_setpoint(prediction: PredictiveDistribution | float) -> float:
    """Clamp a predicted mean to [7, 30] and round to the 0.5 degC grid.

    Exact quarter-degree ties round half away from zero.
    """
    value = prediction.mean if isinstance(prediction, PredictiveDistribution) else float(prediction)
    value = min(max(value, SETPOINT_MIN), SETPOINT_MAX)
    steps = math.floor(abs(value) / SETPOINT_STEP + 0.5)
    return math.copysign(steps * SETPOINT_STEP, value)


def gauge(m: ModelState, low_setpoint: float = GAUGE_LOW_SETPOINT) -> GaugeReading:
    """Bucket the learned price sensitivity onto the six-segment dial.

    The displayed value is the negated slope mean, so that the typical
    (negative-slope) model reads as a positive sensitivity.  The typical
    range tops out where the model would pick ``low_setpoint`` at the
    tariff's price cap; a bias at or below ``low_setpoint`` leaves the
    scale undefined and the dial hidden.
    """
    value = -float(m.mean[1])
    hi = (float(m.mean[0]) - low_setpoint) / PRICE_CAP
    if hi <= 0:
        return GaugeReading(value=value, segment=GaugeSegment.UNDEFINED, upper_bound=hi)
    if value < 0:
        segment = GaugeSegment.NEGATIVE
    elif value < 0.25 * hi:
        segment = GaugeSegment.VERY_LOW
    elif value < 0.5 * hi:
        segment = GaugeSegment.LOW
    elif value < 0.75 * hi:
        segment = GaugeSegment.MODERATE
    elif value <= hi:
        segment = GaugeSegment.HIGH
    else:
        segment = GaugeSegment.VERY_HIGH
    return GaugeReading(value=value, segment=segment, upper_bound=hi)


def _eigh2(a: float, b: float, c: float) -> tuple[float, float, tuple[float, float]]:
    """Eigenvalues (descending) and leading eigenvector of [[a,b],[b,c]]."""
    half_trace = 0.5 * (a + c)
    disc = math.hypot(0.5 * (a - c), b)
    lam1, lam2 = half_trace + disc, half_trace - disc
    if b == 0:
        vec = (1.0, 0.0) if a >= c else (0.0, 1.0)
    else:
        vec = (lam1 - c, b)
    return lam1, lam2, vec


def confidence_ellipse(m: ModelState, level: float = 0.95) -> ConfidenceEllipse:
    """Probability-``level`` contour of the posterior.

    Semi-axes are sqrt(q * eigenvalue) with q the chi-square(2) quantile at
    ``level``; the orientation is the leading eigenvector's angle folded
    into [-pi/2, pi/2).
    """
    if not 0 <= level < 1:
        raise ValueError("level must lie in [0, 1)")
    a, b, c = float(m.covariance[0, 0]), float(m.covariance[0, 1]), float(m.covariance[1, 1])
    lam1, lam2, vec = _eigh2(a, b, c)
    if lam2 <= 0:
        raise DegenerateCovariance("covariance must be positive definite")
    q = 0.0 if level == 0 else float(chi2.ppf(level, df=2))
    angle = math.atan2(vec[1], vec[0])
    while angle >= math.pi / 2:
        angle -= math.pi
    while angle < -math.pi / 2:
        angle += math.pi
    return ConfidenceEllipse(
        center=(float(m.mean[0]), float(m.mean[1])),
        semi_axes=(math.sqrt(q * lam1), math.sqrt(q * lam2)),
        orientation=angle,
    )


def predictive_band(
    m: ModelState,
    prices: Sequence[float] | np.ndarray,
    level: float = 0.95,
    h: Hyperparameters = DEFAULT_HYPERPARAMETERS,
) -> np.ndarray:
    """Central ``level`` band of the predictive distribution per price.

    Returns an (n, 3) array of (mean, lower, upper).
    """
    prices = np.asarray(prices, dtype=float)
    if not np.isfinite(prices).all():
        raise RejectedInput("prices must be finite")
    if not 0 <= level < 1:
        raise ValueError("level must lie in [0, 1)")
    a, b, c = float(m.covariance[0, 0]), float(m.covariance[0, 1]), float(m.covariance[1, 1])
    mean = float(m.mean[0]) + float(m.mean[1]) * prices
    variance = 1.0 / h.noise_precision + a + 2.0 * b * prices + c * prices * prices
    z = 0.0 if level == 0 else float(norm.ppf(0.5 + level / 2.0))
    half = z * np.sqrt(variance)
    return np.column_stack([mean, mean - half, mean + half])
