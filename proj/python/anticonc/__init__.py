"""Anti-concentration and smallest singular value toolkit."""

import json

from ._core import (
    CapabilityError,
    ConfigError,
    Error,
    PreconditionError,
    lcf_exact,
    lcf_monte_carlo,
    p_xi_exact,
    rk_alpha,
    singular_values,
    smallest_singular_value,
    theorem13_threshold,
    xi_norm_sq,
)
from ._core import run_config_json as _run_config_json
from ._core import verify_suite_json as _verify_suite_json

__all__ = [
    "CapabilityError",
    "ConfigError",
    "Error",
    "PreconditionError",
    "lcf_exact",
    "lcf_monte_carlo",
    "p_xi_exact",
    "rk_alpha",
    "run_config",
    "singular_values",
    "smallest_singular_value",
    "theorem13_threshold",
    "verify_suite",
    "xi_norm_sq",
]


def run_config(text: str) -> dict:
    """Run an experiment config (``key = value`` text) and return the report."""
    return json.loads(_run_config_json(text))


def verify_suite(suite: str, seed: int = 0) -> dict:
    """Run an inequality-verification suite and return the report."""
    return json.loads(_verify_suite_json(suite, seed))
