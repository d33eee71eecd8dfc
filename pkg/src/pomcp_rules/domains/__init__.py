"""Generative simulators and feature/action maps for the two benchmark domains."""
from __future__ import annotations

import hashlib
import random
from typing import Any, Mapping

from . import battery, rocksample
from .base import discretize_prob
from .battery import Battery, BatteryConfig
from .rocksample import Rocksample, RocksampleConfig

__all__ = [
    "Battery",
    "BatteryConfig",
    "Rocksample",
    "RocksampleConfig",
    "config_digest",
    "discretize_prob",
    "make_instance",
]


def config_digest(config: Any) -> str:
    """Short stable digest identifying an instance configuration."""
    return hashlib.sha1(repr(config).encode()).hexdigest()[:12]


def make_instance(domain: str, seed: int, options: Mapping[str, Any] | None = None):
    """Build a randomized domain instance reproducibly from a seed.

    Recognized options: rocksample ``grid_size``/``num_rocks``; battery
    ``path_length``; plus any config field override for either domain.
    """
    options = dict(options or {})
    rng = random.Random(f"{seed}/instance")
    if domain == "rocksample":
        grid_size = int(options.pop("grid_size", 12))
        num_rocks = int(options.pop("num_rocks", 4))
        return rocksample.random_instance(rng, grid_size, num_rocks, **options)
    if domain == "battery":
        path_length = int(options.pop("path_length", 35))
        return battery.random_instance(rng, path_length, **options)
    raise ValueError(f"unknown domain {domain!r}")
