"""Resilience rates of BSDE-based dynamic risk measures."""

import json

from ._reslab import (
    ConfigError,
    DomainError,
    EstimationError,
    TruncationError,
    default_config,
    entropic_jump_rates,
    list_scenarios,
    normalize_config,
    philox,
    put_price,
    put_rate,
    run_and_write,
    run_property_suite,
    run_selftest,
    vasicek_rate,
)
from ._reslab import run_scenario as _run_scenario

__all__ = [
    "ConfigError",
    "DomainError",
    "EstimationError",
    "TruncationError",
    "config",
    "default_config",
    "entropic_jump_rates",
    "list_scenarios",
    "normalize_config",
    "philox",
    "put_price",
    "put_rate",
    "run",
    "run_and_write",
    "run_property_suite",
    "run_selftest",
    "vasicek_rate",
]


def config(scenario_id, **overrides):
    """Default config of a scenario as a dict, with top-level fields replaced."""
    cfg = json.loads(default_config(scenario_id))
    params = overrides.pop("params", None)
    cfg.update(overrides)
    if params:
        cfg["params"].update(params)
    if "n_steps" in overrides or "horizon" in overrides:
        cfg.pop("dt", None)
    return cfg


def run(cfg):
    """Run a scenario from a dict or JSON string; returns the report as a dict."""
    text = cfg if isinstance(cfg, str) else json.dumps(cfg)
    return _run_scenario(text)
