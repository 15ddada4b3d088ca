"""Interval reachability and three-valued STL monitoring.

Signals are lists of ``{"t_start", "t_end", "value", "markers"}`` dicts, scenarios are the same
dicts the ``stlreach`` command reads from JSON.
"""

import json
import os

from ._core import (
    BindingError,
    ConfigError,
    Error,
    EvaluationError,
    IntegrationStalled,
    Interval,
    ParseError,
    StepTooLarge,
    UsageError,
    cos,
    exp,
    format_formula,
    hull,
    log,
    minimal_horizon,
    rewrite_formula,
    sin,
)
from . import _core

__all__ = [
    "BindingError",
    "ConfigError",
    "Error",
    "EvaluationError",
    "IntegrationStalled",
    "Interval",
    "ParseError",
    "StepTooLarge",
    "UsageError",
    "cos",
    "eval_signals",
    "exp",
    "format_formula",
    "hull",
    "load_config",
    "log",
    "minimal_horizon",
    "rewrite_formula",
    "simulate",
    "sin",
    "until",
    "verify",
]


def load_config(config):
    """Accepts a dict or a path to a JSON file."""
    if isinstance(config, (str, os.PathLike)):
        with open(config, encoding="utf-8") as f:
            return json.load(f)
    return config


def eval_signals(formula, signals, horizon=None):
    """Root signal of ``formula`` over hand-written predicate signals."""
    return json.loads(_core._eval_signals(formula, json.dumps(signals), horizon))


def until(left, right, a, b):
    return json.loads(_core._until(json.dumps(left), json.dumps(right), float(a), float(b)))


def simulate(config):
    """Initial tube up to the scenario horizon, as in tube.json."""
    return json.loads(_core._simulate(json.dumps(load_config(config))))


def verify(config):
    """Runs the adaptive loop; the verdict.json fields plus both root signals."""
    return json.loads(_core._verify(json.dumps(load_config(config))))
