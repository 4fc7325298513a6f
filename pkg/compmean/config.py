"""Configuration handling for compmean."""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import Any

import tomli

# Configuration keys
_KEY_SEED = "seed"
_KEY_BOOTSTRAP_REPLICATES = "bootstrap_replicates"
_KEY_REPS = "reps"
_KEY_ALPHA = "alpha"
_KEY_COMPOSITION_TOLERANCE = "composition_tolerance"
_KEY_THREADS = "threads"
_KEY_MAX_FAILURE_FRACTION = "max_failure_fraction"
_KEY_LAZY = "lazy"

# Default values
_DEFAULT_SEED = 20130101
_DEFAULT_BOOTSTRAP_REPLICATES = 299
_DEFAULT_REPS = 1000
_DEFAULT_ALPHA = 0.05
_DEFAULT_COMPOSITION_TOLERANCE = 1e-8
_DEFAULT_THREADS = 1
_DEFAULT_MAX_FAILURE_FRACTION = 0.10
_DEFAULT_LAZY = False

SEED_ENV_VAR = "COMPMEAN_SEED"


def _validate_bool_config(section: dict[str, Any], key: str) -> bool | None:
    """Validate and extract a boolean config value.

    Returns None if key not present. Raises TypeError if value is not a boolean.
    """
    if key not in section:
        return None
    value = section[key]
    if not isinstance(value, bool):
        raise TypeError(f"Config '{key}' must be a boolean, got {type(value).__name__}: {value!r}")
    return value


def _validate_int_config(section: dict[str, Any], key: str, min_value: int = 1) -> int | None:
    """Validate and extract an integer config value.

    Returns None if key not present. Raises TypeError/ValueError if invalid.
    """
    if key not in section:
        return None
    value = section[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"Config '{key}' must be an integer, got {type(value).__name__}: {value!r}")
    if value < min_value:
        raise ValueError(f"Config '{key}' must be >= {min_value}, got {value}")
    return value


def _validate_float_config(
    section: dict[str, Any], key: str, low: float, high: float, *, open_low: bool = True, open_high: bool = True
) -> float | None:
    """Validate and extract a real config value lying in the interval between low and high."""
    if key not in section:
        return None
    value = section[key]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise TypeError(f"Config '{key}' must be a number, got {type(value).__name__}: {value!r}")
    too_low = value <= low if open_low else value < low
    too_high = value >= high if open_high else value > high
    if too_low or too_high:
        left = "(" if open_low else "["
        right = ")" if open_high else "]"
        raise ValueError(f"Config '{key}' must lie in {left}{low}, {high}{right}, got {value}")
    return float(value)


def load_config() -> dict[str, Any]:
    """Load compmean configuration from pyproject.toml.

    Returns:
        dict: Configuration dictionary with compmean settings

    """
    config: dict[str, Any] = {
        _KEY_SEED: _DEFAULT_SEED,
        _KEY_BOOTSTRAP_REPLICATES: _DEFAULT_BOOTSTRAP_REPLICATES,
        _KEY_REPS: _DEFAULT_REPS,
        _KEY_ALPHA: _DEFAULT_ALPHA,
        _KEY_COMPOSITION_TOLERANCE: _DEFAULT_COMPOSITION_TOLERANCE,
        _KEY_THREADS: _DEFAULT_THREADS,
        _KEY_MAX_FAILURE_FRACTION: _DEFAULT_MAX_FAILURE_FRACTION,
        _KEY_LAZY: _DEFAULT_LAZY,
    }

    config_path = find_config_file()
    if not config_path:
        return config

    try:
        with Path(config_path).open("rb") as f:
            pyproject = tomli.load(f)
    except (FileNotFoundError, tomli.TOMLDecodeError):
        return config  # Use defaults if config file missing or malformed

    section = pyproject.get("tool", {}).get("compmean", {})

    overrides: dict[str, Any] = {
        _KEY_SEED: _validate_int_config(section, _KEY_SEED, min_value=0),
        _KEY_BOOTSTRAP_REPLICATES: _validate_int_config(section, _KEY_BOOTSTRAP_REPLICATES),
        _KEY_REPS: _validate_int_config(section, _KEY_REPS),
        _KEY_ALPHA: _validate_float_config(section, _KEY_ALPHA, 0.0, 1.0),
        _KEY_COMPOSITION_TOLERANCE: _validate_float_config(section, _KEY_COMPOSITION_TOLERANCE, 0.0, 1.0),
        _KEY_THREADS: _validate_int_config(section, _KEY_THREADS),
        _KEY_MAX_FAILURE_FRACTION: _validate_float_config(
            section, _KEY_MAX_FAILURE_FRACTION, 0.0, 1.0, open_low=False, open_high=False
        ),
        _KEY_LAZY: _validate_bool_config(section, _KEY_LAZY),
    }
    config.update({key: value for key, value in overrides.items() if value is not None})
    return config


def find_config_file() -> str | None:
    """Find pyproject.toml in the current working directory."""
    path = Path.cwd() / "pyproject.toml"
    return str(path) if path.is_file() else None


@lru_cache(maxsize=1)
def get_config() -> MappingProxyType[str, Any]:
    """Get the compmean configuration, cached after first load.

    Returns an immutable view of the configuration to prevent accidental modification.
    """
    return MappingProxyType(load_config())


def clear_config_cache() -> None:
    """Clear the configuration cache. Primarily for testing."""
    get_config.cache_clear()


def get_seed(seed_param: int | None = None) -> int:
    """Get the master seed: explicit parameter, then the COMPMEAN_SEED environment variable, then configuration."""
    if seed_param is not None:
        return seed_param
    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value is not None:
        try:
            seed = int(env_value)
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env_value!r}") from None
        if seed < 0:
            raise ValueError(f"{SEED_ENV_VAR} must be >= 0, got {seed}")
        return seed
    return int(get_config()[_KEY_SEED])


def get_bootstrap_replicates(replicates: int | None = None) -> int:
    """Get the number of bootstrap replicates B."""
    if replicates is not None:
        if replicates < 1:
            raise ValueError(f"bootstrap_replicates must be >= 1, got {replicates}")
        return replicates
    return int(get_config()[_KEY_BOOTSTRAP_REPLICATES])


def get_reps(reps: int | None = None) -> int:
    """Get the number of Monte Carlo repetitions."""
    if reps is not None:
        if reps < 1:
            raise ValueError(f"reps must be >= 1, got {reps}")
        return reps
    return int(get_config()[_KEY_REPS])


def get_alpha(alpha: float | None = None) -> float:
    """Get the nominal significance level.

    Args:
        alpha: Explicitly provided level, or None to use config

    Returns:
        float: The effective significance level

    """
    if alpha is not None:
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        return alpha
    return float(get_config()[_KEY_ALPHA])


def get_composition_tolerance(tolerance: float | None = None) -> float:
    """Get the tolerance for unit-sum and nonnegativity checks on input compositions."""
    if tolerance is not None:
        if tolerance <= 0:
            raise ValueError(f"composition_tolerance must be > 0, got {tolerance}")
        return tolerance
    return float(get_config()[_KEY_COMPOSITION_TOLERANCE])


def get_threads(threads: int | None = None) -> int:
    """Get the worker cap for parallel Monte Carlo and bootstrap loops."""
    if threads is not None:
        if threads < 1:
            raise ValueError(f"threads must be >= 1, got {threads}")
        return threads
    return int(get_config()[_KEY_THREADS])


def get_max_failure_fraction(fraction: float | None = None) -> float:
    """Get the largest tolerated fraction of failed bootstrap replicates."""
    if fraction is not None:
        if not 0.0 <= fraction <= 1.0:
            raise ValueError(f"max_failure_fraction must lie in [0, 1], got {fraction}")
        return fraction
    return float(get_config()[_KEY_MAX_FAILURE_FRACTION])


def get_lazy(lazy_param: bool | None = None) -> bool:
    """Get the lazy mode setting, with explicit parameter taking precedence over configuration.

    When lazy=True, composition validation collects all errors before raising instead of stopping at the first.
    """
    if lazy_param is not None:
        return lazy_param
    return bool(get_config()[_KEY_LAZY])
