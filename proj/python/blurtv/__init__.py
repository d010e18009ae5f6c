"""Blurred total variation: estimators, confidence bounds and oracles."""

import json

from ._core import (
    ArgumentError,
    IoError,
    NumericalError,
    ValidationError,
    __version__,
    blurred_tv,
    epsilon_B,
    epsilon_nm,
    experiment_csv,
    experiment_names,
    oracle_gaussian,
    oracle_mixture_1d,
    shift_modulus,
    variance_proxy,
)
from . import _core


def bound(x, y, h, method="naive", alpha=0.05, **kwargs):
    """Confidence bound as a dict, same fields as the CLI's JSON output."""
    return json.loads(_core.bound_json(x, y, h, method=method, alpha=alpha, **kwargs))


def run_experiment(name, config=None, threads=1):
    """Runs an experiment and returns its CSV text. `config` is a dict or None."""
    return experiment_csv(name, json.dumps(config) if config else "", threads)
