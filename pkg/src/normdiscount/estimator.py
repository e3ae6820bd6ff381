"""Scikit-learn style classifier over labelled word-in-context pairs.

`DiscountedCosineClassifier` calibrates the discount parameters in
`fit`, classifies pairs as same/different sense in `predict`, and
exposes threshold margins in `decision_function`. It follows estimator
conventions: constructor stores hyperparameters verbatim, fitted state
lives in trailing-underscore attributes, and `get_params`/`set_params`
support cloning and grid search.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from . import calibrate
from .calibrate import LabeledPair, SearchBox
from .errors import ValidationError
from .evalharness import DISCOUNTED, PLAIN, _MODES
from .simcore import Label, discounted_cosine

_PLAIN_BOX = SearchBox(m_s=(0.0, 0.0), b_s=(0.0, 0.0), m_n=(0.0, 0.0), b_n=(0.0, 0.0))


def _coerce_label(value) -> Label:
    if isinstance(value, Label):
        return value
    if isinstance(value, str):
        if value in ("T", "F"):
            return Label.from_tf(value)
        try:
            return Label(value)
        except ValueError:
            pass
    if isinstance(value, (bool, np.bool_)):
        return Label.SAME if value else Label.DIFFERENT
    raise ValidationError(f"cannot interpret {value!r} as a same/different label")


class DiscountedCosineClassifier(ClassifierMixin, BaseEstimator):
    """Binary same/different-sense classifier with frequency discounting.

    Parameters
    ----------
    mode:
        "discounted" calibrates all five parameters; "plain" pins the
        discount slopes and offsets to zero so only the threshold is
        calibrated and scores reduce to ordinary cosine.
    budget:
        Objective evaluations per calibration run.
    repeats:
        Calibration runs to average; seeds are seed, seed+1, ...
    seed:
        Base seed for the derivative-free search.
    box:
        Search intervals, or None for the defaults.
    """

    def __init__(self, mode: str = DISCOUNTED, budget: int = 500,
                 repeats: int = 1, seed: int = 0, box: SearchBox | None = None):
        self.mode = mode
        self.budget = budget
        self.repeats = repeats
        self.seed = seed
        self.box = box

    def _resolve_pairs(self, X, y) -> list[LabeledPair]:
        pairs = list(X)
        for i, pair in enumerate(pairs):
            if not isinstance(pair, LabeledPair):
                raise ValidationError(f"X[{i}] is not a labelled pair: {type(pair).__name__}")
        if y is not None:
            if len(y) != len(pairs):
                raise ValidationError(f"{len(pairs)} pairs vs {len(y)} labels")
            pairs = [dataclasses.replace(pair, gold=_coerce_label(label))
                     for pair, label in zip(pairs, y)]
        for i, pair in enumerate(pairs):
            if pair.gold is None:
                raise ValidationError(f"X[{i}] ({pair.word!r}) has no gold label and y is None")
        return pairs

    def fit(self, X: Sequence[LabeledPair], y=None) -> "DiscountedCosineClassifier":
        """Calibrate parameters on labelled pairs; returns self.

        Labels come from the pairs' gold field, or from y ("same" /
        "different", "T"/"F", or booleans) which overrides it.
        """
        if self.mode not in _MODES:
            raise ValidationError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if not isinstance(self.budget, int) or self.budget < 1:
            raise ValidationError(f"budget must be a positive int, got {self.budget!r}")
        if not isinstance(self.repeats, int) or self.repeats < 1:
            raise ValidationError(f"repeats must be a positive int, got {self.repeats!r}")
        pairs = self._resolve_pairs(X, y)
        if not pairs:
            raise ValidationError("cannot fit on an empty pair list")

        if self.mode == PLAIN:
            base = self.box if self.box is not None else SearchBox()
            box = dataclasses.replace(_PLAIN_BOX, theta=base.theta)
        else:
            box = self.box if self.box is not None else SearchBox()

        if self.repeats == 1:
            params, accuracy = calibrate.fit(pairs, box=box, seed=self.seed,
                                             budget=self.budget)
        else:
            params = calibrate.fit_averaged(pairs, box=box, base_seed=self.seed,
                                            budget=self.budget, repeats=self.repeats)
            accuracy = calibrate.objective(params, pairs)
        self.params_ = params
        self.train_accuracy_ = accuracy
        self.classes_ = np.array([Label.DIFFERENT.value, Label.SAME.value])
        self.n_features_in_ = pairs[0].vector1.shape[0]
        return self

    def _scores(self, X: Sequence[LabeledPair]) -> np.ndarray:
        check_is_fitted(self)
        scores = np.empty(len(X), dtype=np.float64)
        for i, pair in enumerate(X):
            if not isinstance(pair, LabeledPair):
                raise ValidationError(f"X[{i}] is not a labelled pair: {type(pair).__name__}")
            scores[i] = discounted_cosine(pair.vector1, pair.log_freq, pair.stop,
                                          pair.vector2, pair.log_freq, pair.stop,
                                          self.params_)
        return scores

    def decision_function(self, X: Sequence[LabeledPair]) -> np.ndarray:
        """Signed margin: discounted score minus threshold (>= 0 means SAME)."""
        return self._scores(X) - self.params_.theta

    def predict(self, X: Sequence[LabeledPair]) -> np.ndarray:
        """Predict "same" / "different" per pair; ties go to "same"."""
        margins = self.decision_function(X)
        return np.where(margins >= 0.0, Label.SAME.value, Label.DIFFERENT.value)

    def score(self, X: Sequence[LabeledPair], y=None, sample_weight=None) -> float:
        """Accuracy against y, or against the pairs' gold labels if y is None."""
        if y is None:
            y = []
            for i, pair in enumerate(X):
                if pair.gold is None:
                    raise ValidationError(f"X[{i}] ({pair.word!r}) has no gold label")
                y.append(pair.gold.value)
        y_arr = np.array([_coerce_label(label).value for label in y])
        predictions = self.predict(X)
        if sample_weight is None:
            return float(np.mean(predictions == y_arr))
        weights = np.asarray(sample_weight, dtype=np.float64)
        return float(np.average(predictions == y_arr, weights=weights))
