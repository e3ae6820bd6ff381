"""Reusable small statistics: Pearson r, OLS line fits, equal-count bins."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, ValidationError


@dataclass(frozen=True)
class FitLine:
    """Least-squares line with its correlation coefficient and sample size."""

    slope: float
    intercept: float
    pearson_r: float
    n: int


@dataclass(frozen=True)
class EqualCountBins:
    """Partition of items into bins of near-equal size ordered by key.

    assignments[i] is the bin index of input item i; boundaries[b] is the
    (min key, max key) of bin b's members.
    """

    num_bins: int
    assignments: tuple[int, ...]
    boundaries: tuple[tuple[float, float], ...]

    def members(self) -> list[list[int]]:
        """Item indices per bin, in input order within each bin."""
        out: list[list[int]] = [[] for _ in range(self.num_bins)]
        for idx, bin_idx in enumerate(self.assignments):
            out[bin_idx].append(idx)
        return out


def _split_xy(points: Sequence[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    if len(points) < 2:
        raise DegenerateInputError(f"need at least 2 points, got {len(points)}")
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(f"points must be (x, y) pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("points contain non-finite values")
    return arr[:, 0], arr[:, 1]


def pearson(points: Sequence[tuple[float, float]]) -> float:
    """Sample Pearson correlation coefficient.

    Raises DegenerateInputError when either coordinate has zero variance.
    """
    x, y = _split_xy(points)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0:
        raise DegenerateInputError("x has zero variance; correlation undefined")
    if syy == 0.0:
        raise DegenerateInputError("y has zero variance; correlation undefined")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def ols_fit(points: Sequence[tuple[float, float]]) -> FitLine:
    """Ordinary least-squares line of best fit.

    pearson_r is populated from the same sums; when y is constant the slope
    is 0.0 and pearson_r is reported as 0.0 (calling pearson() directly on
    such data raises instead).
    """
    x, y = _split_xy(points)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise DegenerateInputError("x has zero variance; slope undefined")
    sxy = float(np.dot(dx, dy))
    syy = float(np.dot(dy, dy))
    slope = sxy / sxx
    intercept = float(y.mean()) - slope * float(x.mean())
    if syy == 0.0:
        r = 0.0
    else:
        r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    return FitLine(slope=slope, intercept=intercept, pearson_r=r, n=len(points))


def equal_count_bins(keys: Sequence[float], num_bins: int) -> EqualCountBins:
    """Split items into num_bins bins by ascending key, sizes differing by <= 1.

    Ties are broken by original index (stable). The first (n mod num_bins)
    bins in key order take the extra item.
    """
    n = len(keys)
    if num_bins < 1:
        raise ValidationError(f"num_bins must be >= 1, got {num_bins}")
    if n == 0:
        raise DegenerateInputError("keys must be nonempty")
    if num_bins > n:
        raise ValidationError(f"num_bins={num_bins} exceeds number of items ({n})")
    order = sorted(range(n), key=lambda i: (keys[i], i))
    base, extra = divmod(n, num_bins)
    assignments = [0] * n
    boundaries: list[tuple[float, float]] = []
    pos = 0
    for b in range(num_bins):
        size = base + (1 if b < extra else 0)
        chunk = order[pos:pos + size]
        for idx in chunk:
            assignments[idx] = b
        boundaries.append((float(keys[chunk[0]]), float(keys[chunk[-1]])))
        pos += size
    return EqualCountBins(num_bins=num_bins, assignments=tuple(assignments),
                          boundaries=tuple(boundaries))
