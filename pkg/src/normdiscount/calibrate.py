"""Discount-parameter calibration on labelled context pairs.

The objective is plain binary classification accuracy of thresholded
discounted similarity scores, so it is cheap, bounded, and derivative-free.
The maximizer interleaves a seeded low-discrepancy global search (Halton
points under a Cranley-Patterson rotation) with coordinate-wise
golden-section refinement around the incumbent: even-numbered evaluations
sample globally, odd-numbered ones refine, so any budget prefix evaluates
the same points and the incumbent accuracy is non-decreasing in budget.
Everything is deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._validation import as_vector, check_finite_scalar, check_nonzero, check_same_dim
from .errors import ValidationError
from .simcore import ALPHA_FLOOR, DiscountParams, Label, cosine

_HALTON_BASES = (2, 3, 5, 7, 11)
# Canonical coordinate order for parameter vectors.
_PARAM_ORDER = ("theta", "m_s", "b_s", "m_n", "b_n")


@dataclass(frozen=True)
class LabeledPair:
    """A word with two context embeddings and an optional gold label.

    log_freq and stop describe the shared target word (both contexts
    contain the same word, so one frequency applies to both sides).
    """

    word: str
    pos: str
    vector1: np.ndarray
    vector2: np.ndarray
    gold: Label | None
    log_freq: float
    stop: bool

    def __post_init__(self):
        v1 = as_vector(self.vector1, f"vector1 for {self.word!r}")
        v2 = as_vector(self.vector2, f"vector2 for {self.word!r}")
        check_same_dim(v1, v2)
        check_nonzero(v1, f"vector1 for {self.word!r}")
        check_nonzero(v2, f"vector2 for {self.word!r}")
        object.__setattr__(self, "vector1", v1)
        object.__setattr__(self, "vector2", v2)
        check_finite_scalar(self.log_freq, "log_freq")


@dataclass(frozen=True)
class SearchBox:
    """Closed per-parameter search intervals.

    The b intervals default to [0, 10]: initialisation in [0, 1] alone
    cannot contain realistic non-stop intercepts, which sit well above 1
    in natural-log frequency units.
    """

    theta: tuple[float, float] = (0.0, 1.0)
    m_s: tuple[float, float] = (0.0, 1.0)
    b_s: tuple[float, float] = (0.0, 10.0)
    m_n: tuple[float, float] = (0.0, 1.0)
    b_n: tuple[float, float] = (0.0, 10.0)

    def __post_init__(self):
        for name in _PARAM_ORDER:
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValidationError(f"{name} interval must be finite")
            if lo > hi:
                raise ValidationError(f"{name} interval has lower > upper: ({lo}, {hi})")
        if self.theta[0] < 0.0 or self.theta[1] > 1.0:
            raise ValidationError(f"theta interval must lie within [0, 1], got {self.theta}")
        if self.m_s[0] < 0.0 or self.m_n[0] < 0.0:
            raise ValidationError("slope intervals must be nonnegative")

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        lows = np.array([getattr(self, name)[0] for name in _PARAM_ORDER], dtype=np.float64)
        highs = np.array([getattr(self, name)[1] for name in _PARAM_ORDER], dtype=np.float64)
        return lows, highs


def _params_to_vec(params: DiscountParams) -> np.ndarray:
    return np.array([getattr(params, name) for name in _PARAM_ORDER], dtype=np.float64)


def _vec_to_params(vec: np.ndarray) -> DiscountParams:
    return DiscountParams(**{name: float(vec[i]) for i, name in enumerate(_PARAM_ORDER)})


@dataclass(frozen=True)
class _PreparedPairs:
    """Per-pair quantities that do not depend on the parameters."""

    cos: np.ndarray
    log_freq: np.ndarray
    stop: np.ndarray
    gold_same: np.ndarray


def _prepare(pairs: Sequence[LabeledPair]) -> _PreparedPairs:
    if not pairs:
        raise ValidationError("pair list must be nonempty")
    cos = np.empty(len(pairs))
    log_freq = np.empty(len(pairs))
    stop = np.empty(len(pairs), dtype=bool)
    gold_same = np.empty(len(pairs), dtype=bool)
    for i, pair in enumerate(pairs):
        if pair.gold is None:
            raise ValidationError(f"pair {i} ({pair.word!r}) has no gold label")
        cos[i] = cosine(pair.vector1, pair.vector2)
        log_freq[i] = pair.log_freq
        stop[i] = pair.stop
        gold_same[i] = pair.gold is Label.SAME
    return _PreparedPairs(cos=cos, log_freq=log_freq, stop=stop, gold_same=gold_same)


def _accuracy(prep: _PreparedPairs, vec: np.ndarray) -> float:
    theta, m_s, b_s, m_n, b_n = vec
    m = np.where(prep.stop, m_s, m_n)
    b = np.where(prep.stop, b_s, b_n)
    a = np.maximum(1.0 + m * (b - prep.log_freq), ALPHA_FLOOR)
    scores = prep.cos / (a * a)
    return float(np.mean((scores >= theta) == prep.gold_same))


def objective(params: DiscountParams, pairs: Sequence[LabeledPair]) -> float:
    """Binary classification accuracy of the thresholded discounted scores."""
    return _accuracy(_prepare(pairs), _params_to_vec(params))


def _halton(index: int) -> np.ndarray:
    point = np.empty(len(_HALTON_BASES))
    for d, base in enumerate(_HALTON_BASES):
        f, r, i = 1.0, 0.0, index
        while i > 0:
            f /= base
            r += f * (i % base)
            i //= base
        point[d] = r
    return point


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class _CoordinateRefiner:
    """Golden-section line searches cycling through the coordinates.

    Each coordinate gets STEPS evaluations (two bracket points plus
    shrinks) against a snapshot of the incumbent taken when the coordinate
    search starts; zero-width coordinates are skipped.
    """

    STEPS = 10

    def __init__(self, lows: np.ndarray, highs: np.ndarray):
        self.lows = lows
        self.highs = highs
        self.ndim = len(lows)
        self.coord = 0
        self.step = 0
        self.base: np.ndarray | None = None
        self.state: list | None = None
        self.pending: str | None = None

    def _point(self, value: float) -> np.ndarray:
        vec = self.base.copy()
        vec[self.coord] = value
        return vec

    def propose(self, incumbent: np.ndarray) -> np.ndarray:
        if self.step == 0:
            for _ in range(self.ndim):
                if self.highs[self.coord] > self.lows[self.coord]:
                    break
                self.coord = (self.coord + 1) % self.ndim
            else:
                self.pending = "noop"
                return incumbent.copy()
            self.base = incumbent.copy()
            a, b = float(self.lows[self.coord]), float(self.highs[self.coord])
            x1 = b - (b - a) * _INVPHI
            x2 = a + (b - a) * _INVPHI
            self.state = [a, b, x1, x2, None, None]
            self.pending = "x1"
            return self._point(x1)
        a, b, x1, x2, f1, f2 = self.state
        if f2 is None and f1 is not None:
            self.pending = "x2"
            return self._point(x2)
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - (b - a) * _INVPHI
            self.state = [a, b, x1, x2, None, f2]
            self.pending = "x1"
            return self._point(x1)
        a, x1, f1 = x1, x2, f2
        x2 = a + (b - a) * _INVPHI
        self.state = [a, b, x1, x2, f1, None]
        self.pending = "x2"
        return self._point(x2)

    def observe(self, value: float) -> None:
        if self.pending == "noop":
            return
        if self.pending == "x1":
            self.state[4] = value
        else:
            self.state[5] = value
        self.step += 1
        if self.step >= self.STEPS:
            self.coord = (self.coord + 1) % self.ndim
            self.step = 0
            self.state = None


def _fit_prepared(prep: _PreparedPairs, box: SearchBox, seed: int,
                  budget: int) -> tuple[np.ndarray, float]:
    lows, highs = box.as_arrays()
    shift = np.random.default_rng(seed).random(len(_HALTON_BASES))
    refiner = _CoordinateRefiner(lows, highs)
    best_vec: np.ndarray | None = None
    best_val = -math.inf
    halton_index = 1
    for k in range(budget):
        if k % 2 == 0:
            u = (_halton(halton_index) + shift) % 1.0
            halton_index += 1
            x = lows + u * (highs - lows)
            value = _accuracy(prep, x)
        else:
            x = refiner.propose(best_vec)
            value = _accuracy(prep, x)
            refiner.observe(value)
        if value > best_val:
            best_vec, best_val = x.copy(), value
    return best_vec, best_val


def fit(pairs: Sequence[LabeledPair], box: SearchBox | None = None,
        seed: int = 0, budget: int = 500) -> tuple[DiscountParams, float]:
    """Maximize classification accuracy within the search box.

    Spends exactly `budget` objective evaluations and returns the best
    parameters found with their true objective value. Deterministic given
    the seed; the incumbent accuracy never decreases as budget grows.
    """
    if budget < 1:
        raise ValidationError(f"budget must be >= 1, got {budget}")
    box = box or SearchBox()
    prep = _prepare(pairs)
    best_vec, best_val = _fit_prepared(prep, box, seed, budget)
    return _vec_to_params(best_vec), best_val


def fit_runs(pairs: Sequence[LabeledPair], box: SearchBox | None = None,
             base_seed: int = 0, budget: int = 500,
             repeats: int = 5) -> list[tuple[DiscountParams, float]]:
    """Run fit with seeds base_seed .. base_seed+repeats-1."""
    if repeats < 1:
        raise ValidationError(f"repeats must be >= 1, got {repeats}")
    box = box or SearchBox()
    prep = _prepare(pairs)
    runs = []
    for offset in range(repeats):
        best_vec, best_val = _fit_prepared(prep, box, base_seed + offset, budget)
        runs.append((_vec_to_params(best_vec), best_val))
    return runs


def average_params(runs: Sequence[DiscountParams]) -> DiscountParams:
    """Arithmetic mean of each parameter across runs (threshold included)."""
    if not runs:
        raise ValidationError("cannot average an empty run list")
    stacked = np.stack([_params_to_vec(params) for params in runs])
    return _vec_to_params(stacked.mean(axis=0))


def fit_averaged(pairs: Sequence[LabeledPair], box: SearchBox | None = None,
                 base_seed: int = 0, budget: int = 500,
                 repeats: int = 5) -> DiscountParams:
    """Mean of each parameter across repeated fits (threshold included)."""
    runs = fit_runs(pairs, box=box, base_seed=base_seed, budget=budget, repeats=repeats)
    return average_params([params for params, _ in runs])
