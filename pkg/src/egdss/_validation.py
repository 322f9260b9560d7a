"""Input checks shared by the public functions and estimators."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_RATE = 1e6


class ValidationError(ValueError):
    """Raised when an argument violates a documented domain."""


def check_rate(value, name: str = "rate") -> float:
    """Return ``value`` as a float after checking ``0 < value <= MAX_RATE``."""
    try:
        lam = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(lam) or lam <= 0.0:
        raise ValidationError(f"{name} must be positive and finite, got {value!r}")
    if lam > MAX_RATE:
        raise ValidationError(f"{name} must not exceed {MAX_RATE:g}, got {value!r}")
    return lam


def check_level(level) -> float:
    level = float(level)
    if not 0.0 < level < 1.0:
        raise ValidationError(f"confidence level must lie in (0, 1), got {level!r}")
    return level


@dataclass(frozen=True)
class Sample:
    """Positive observations with a label used in error messages."""

    values: np.ndarray
    label: str = "sample"

    def __post_init__(self):
        arr = np.array(self.values, dtype=float).ravel()
        if arr.size == 0:
            raise ValidationError(f"{self.label}: no observations")
        bad = np.flatnonzero(~np.isfinite(arr) | (arr <= 0.0))
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"{self.label}: observation {i} is {arr[i]!r}; values must be positive and finite"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def check_sample(data, label: str = "sample", min_size: int = 1) -> np.ndarray:
    """Validate observations and return them as a read-only 1-D float array."""
    sample = data if isinstance(data, Sample) else Sample(data, label)
    if len(sample) < min_size:
        raise ValidationError(
            f"{sample.label}: need at least {min_size} observations, got {len(sample)}"
        )
    return sample.values
