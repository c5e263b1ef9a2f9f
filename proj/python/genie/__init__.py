"""Counterfactual replay of ad auction logs."""

import json

from genie._core import (
    ConfigError,
    GenieError,
    SchemaError,
    SingularityError,
    UndefinedMetricError,
    click_predict,
    eval_cumulative_error,
    eval_logloss,
    fit_regression,
    optimize,
    poly_features,
    replay_accuracy,
    run_auction,
    simulate_report,
    train_click_model,
    validate_and_convert,
)
from genie import _core


def generate(n_requests, seed, generator=None, policy=None):
    """Returns (marketplace dict, log text)."""
    model, logs = _core.generate(
        json.dumps(generator) if generator else "", policy or {}, n_requests, seed
    )
    return json.loads(model), logs


def run_job(config_path):
    return json.loads(_core.run_job(str(config_path)))


__all__ = [
    "ConfigError",
    "GenieError",
    "SchemaError",
    "SingularityError",
    "UndefinedMetricError",
    "click_predict",
    "eval_cumulative_error",
    "eval_logloss",
    "fit_regression",
    "generate",
    "optimize",
    "poly_features",
    "replay_accuracy",
    "run_auction",
    "run_job",
    "simulate_report",
    "train_click_model",
    "validate_and_convert",
]
