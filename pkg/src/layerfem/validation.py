"""Small argument-checking helpers shared across the package."""

from __future__ import annotations

import math

import numpy as np


def check_positive_scalar(name: str, value) -> float:
    """Return ``value`` as a float, requiring it to be finite and > 0."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if value <= 0.0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value


def check_int(name: str, value, minimum: int = 1) -> int:
    """Return ``value`` as an int, requiring it to be at least ``minimum``."""
    if isinstance(value, bool) or int(value) != value:
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {value}")
    return value


def check_choice(name: str, value, choices) -> str:
    if value not in choices:
        allowed = ", ".join(repr(c) for c in choices)
        raise ValueError(f"{name} must be one of {allowed}, got {value!r}")
    return value


def as_point_array(x) -> np.ndarray:
    """Coerce scalar / sequence / single-column input to a 1-d float array."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    elif arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected scalar, 1-d, or single-column input, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("evaluation points must be finite")
    return arr
