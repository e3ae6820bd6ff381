"""Input validation helpers, sklearn check_array style but vector-sized."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, UndefinedSimilarityError, ValidationError


def as_vector(x, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D float64 array with finite components."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite components")
    return arr


def check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatchError(x.shape[0], y.shape[0])


def check_nonzero(x: np.ndarray, name: str = "vector") -> None:
    if not np.any(x):
        raise UndefinedSimilarityError(f"{name} is the zero vector; similarity undefined")


def check_finite_scalar(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value
