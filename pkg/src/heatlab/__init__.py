"""heatlab: a desk-scale smart-heating simulator.

Price-aware Bayesian setpoint learning with glass-box chart data, a weekly
profile schedule driven by half-hourly tariffs, a heating controller with
one-hour override/boost timers, an attack-injection harness (overt and
concealed data poisoning, price evasion), and a deterministic virtual-clock
engine with an HTTP API and scenario runner on top.
"""

from .model import (
    ConfidenceEllipse,
    GaugeReading,
    GaugeSegment,
    Hyperparameters,
    ModelState,
    Observation,
    Origin,
    PredictiveDistribution,
    confidence_ellipse,
    default_model,
    gauge,
    predict,
    predictive_band,
    publish_setpoint,
    update,
)
from .schedule import Profile, WeekSchedule, default_week
from .tariff import PriceSeries, Window, load_prices, price_at, summarize, synthetic_prices
from .attacks import AttackKind, AttackSpec, effective_price, plan_injections, validate_schedule
from .plant import AgentPolicy, RoomState, ThermalConstants, VirtualClock, rationality_regression
from .engine import Engine

__version__ = "0.1.0"

__all__ = [
    "AgentPolicy",
    "AttackKind",
    "AttackSpec",
    "ConfidenceEllipse",
    "Engine",
    "GaugeReading",
    "GaugeSegment",
    "Hyperparameters",
    "ModelState",
    "Observation",
    "Origin",
    "PredictiveDistribution",
    "PriceSeries",
    "Profile",
    "RoomState",
    "ThermalConstants",
    "VirtualClock",
    "WeekSchedule",
    "Window",
    "confidence_ellipse",
    "default_model",
    "default_week",
    "effective_price",
    "gauge",
    "load_prices",
    "plan_injections",
    "predict",
    "predictive_band",
    "price_at",
    "publish_setpoint",
    "rationality_regression",
    "summarize",
    "synthetic_prices",
    "update",
    "validate_schedule",
]
