"""Core similarity math: cosine, frequency discount factor, thresholding.

Plain cosine systematically underestimates the similarity of frequent
words' contextualised embeddings because their l2 norms grow with
log-frequency. The correction divides each norm by a discount factor
alpha that is linear in log-frequency, with separate slope/intercept for
stop words and non-stop words. All functions here are pure and stateless.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from ._ioutil import atomic_write_text
from ._validation import as_vector, check_finite_scalar, check_nonzero, check_same_dim
from .errors import ValidationError

# Floor keeping alpha positive; the linear form goes negative only for
# log-frequencies beyond b + 1/m, far outside realistic corpus scales.
ALPHA_FLOOR = 1e-6


class Label(enum.Enum):
    """Binary meaning judgement for a pair of contexts."""

    SAME = "same"
    DIFFERENT = "different"

    @classmethod
    def from_tf(cls, flag: str) -> "Label":
        if flag == "T":
            return cls.SAME
        if flag == "F":
            return cls.DIFFERENT
        raise ValidationError(f"expected 'T' or 'F', got {flag!r}")


@dataclass(frozen=True)
class DiscountParams:
    """Calibration scalars: threshold plus per-class discount lines.

    theta is the classification threshold in [0, 1]; (m_s, b_s) and
    (m_n, b_n) are the stop-word and non-stop-word slope/intercept of the
    discount factor in log-frequency units.
    """

    theta: float
    m_s: float
    b_s: float
    m_n: float
    b_n: float

    def __post_init__(self):
        for name in ("theta", "m_s", "b_s", "m_n", "b_n"):
            check_finite_scalar(getattr(self, name), name)
        if not 0.0 <= self.theta <= 1.0:
            raise ValidationError(f"theta must be in [0, 1], got {self.theta}")
        if self.m_s < 0.0 or self.m_n < 0.0:
            raise ValidationError("slopes m_s and m_n must be nonnegative")

    @classmethod
    def plain(cls, theta: float = 0.5) -> "DiscountParams":
        """Parameters with zero slopes: discounting disabled, alpha == 1."""
        return cls(theta=theta, m_s=0.0, b_s=0.0, m_n=0.0, b_n=0.0)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "DiscountParams":
        missing = {"theta", "m_s", "b_s", "m_n", "b_n"} - set(data)
        if missing:
            raise ValidationError(f"params object missing keys: {sorted(missing)}")
        return cls(theta=float(data["theta"]), m_s=float(data["m_s"]), b_s=float(data["b_s"]),
                   m_n=float(data["m_n"]), b_n=float(data["b_n"]))

    def save(self, path) -> None:
        atomic_write_text(path, json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "DiscountParams":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValidationError(f"params file must hold a JSON object, got {type(data).__name__}")
        return cls.from_dict(data)


@dataclass(frozen=True)
class SimilarityJudgement:
    """A similarity score together with its thresholded label."""

    score: float
    label: Label

    @classmethod
    def from_score(cls, score: float, theta: float) -> "SimilarityJudgement":
        return cls(score=score, label=judge(score, theta))


def cosine(x, y) -> float:
    """Cosine of the angle between two nonzero vectors, in [-1, 1]."""
    xv = as_vector(x, "x")
    yv = as_vector(y, "y")
    check_same_dim(xv, yv)
    check_nonzero(xv, "x")
    check_nonzero(yv, "y")
    value = float(np.dot(xv, yv)) / (float(np.linalg.norm(xv)) * float(np.linalg.norm(yv)))
    return max(-1.0, min(1.0, value))


def alpha(params: DiscountParams, log_freq: float, stop: bool) -> float:
    """Discount factor 1 + m*(b - log_freq), clamped below at ALPHA_FLOOR.

    The (m, b) pair is chosen by the stop flag. Values below 1 occur for
    words more frequent than the intercept and inflate their similarity.
    """
    log_freq = check_finite_scalar(log_freq, "log_freq")
    if stop:
        value = 1.0 + params.m_s * (params.b_s - log_freq)
    else:
        value = 1.0 + params.m_n * (params.b_n - log_freq)
    return max(value, ALPHA_FLOOR)


def discounted_cosine(x, log_freq_x: float, stop_x: bool,
                      y, log_freq_y: float, stop_y: bool,
                      params: DiscountParams) -> float:
    """Inner product over alpha-discounted norms.

    Equals cosine(x, y) / (alpha_x * alpha_y); may exceed [-1, 1] when a
    discount factor is below 1. Scores are deliberately not re-normalised:
    the threshold classifier consumes the raw quotient.
    """
    xv = as_vector(x, "x")
    yv = as_vector(y, "y")
    check_same_dim(xv, yv)
    check_nonzero(xv, "x")
    check_nonzero(yv, "y")
    ax = alpha(params, log_freq_x, stop_x)
    ay = alpha(params, log_freq_y, stop_y)
    denom = (float(np.linalg.norm(xv)) * ax) * (float(np.linalg.norm(yv)) * ay)
    return float(np.dot(xv, yv)) / denom


def judge(score: float, theta: float) -> Label:
    """SAME iff score >= theta; the tie score == theta counts as SAME."""
    score = check_finite_scalar(score, "score")
    theta = check_finite_scalar(theta, "theta")
    return Label.SAME if score >= theta else Label.DIFFERENT
