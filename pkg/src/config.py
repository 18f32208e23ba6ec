"""
MatchEnt Configuration

Loads config.json (repo root first, then the working directory) over
built-in defaults. MATCHENT_MAX_VERTICES overrides the size guard.
"""

import json
import os
from pathlib import Path
from typing import Optional

from errors import ConfigError


# ==================== DEFAULTS ====================

DEFAULT_CONFIG = {
    "tol": 1e-12,                      # Root refinement width
    "max_vertices": 30,                # Exact matching-polynomial size guard
    "precision_digits": 50,            # mpmath working precision
    "exact_limit": 60,                 # Largest n for exact-rational LMC bounds
    "max_tower_vertices": 16384,       # Cap on 2-lift tower growth (2^14)
    "exhaustive_signing_vertices": 10, # Exhaustive signing fallback threshold
    "max_attempts": 200,               # Random signings tried per tower level
    "entropy_tol": 1e-9,               # Slack for float-valued certificates
    "workers": 1,                      # Report fan-out (processes)
    "debug": False,
}

ENV_MAX_VERTICES = "MATCHENT_MAX_VERTICES"

_active: Optional[dict] = None


def load_config(path: Optional[str] = None) -> dict:
    """Load configuration, merging config.json over DEFAULT_CONFIG."""
    config = dict(DEFAULT_CONFIG)

    if path is not None:
        if not Path(path).exists():
            raise ConfigError(f"config file not found: {path}")
        config_paths = [Path(path)]
    else:
        config_paths = [
            Path(__file__).parent.parent / "config.json",
            Path("config.json"),
        ]

    for config_path in config_paths:
        if config_path.exists():
            try:
                with open(config_path) as f:
                    config.update(json.load(f))
            except json.JSONDecodeError as e:
                raise ConfigError(f"{config_path}: {e}") from e
            break

    override = os.environ.get(ENV_MAX_VERTICES)
    if override:
        try:
            config["max_vertices"] = int(override)
        except ValueError:
            raise ConfigError(f"{ENV_MAX_VERTICES}={override!r} is not an integer")
        if config["max_vertices"] < 1:
            raise ConfigError(f"{ENV_MAX_VERTICES} must be positive")

    return config


def get_config() -> dict:
    """The active configuration, loaded lazily on first use."""
    global _active
    if _active is None:
        _active = load_config()
    return _active


def set_config(config: dict):
    """Install a configuration (CLI startup, tests)."""
    global _active
    _active = dict(DEFAULT_CONFIG)
    _active.update(config)
