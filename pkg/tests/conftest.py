"""Shared fixtures: planted-parameter pair sets and bundled-file paths."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from normdiscount import Label, LabeledPair

FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"

PLANTED_THETA = 0.5
PLANTED_M = 0.05
PLANTED_B = 5.0


def make_planted_pairs(n: int = 400, seed: int = 0,
                       dim: int = 8) -> list[LabeledPair]:
    """Pairs whose discounted scores under the planted parameters separate.

    Target scores are drawn in [0.60, 0.63] for SAME and [0.37, 0.40] for
    DIFFERENT (a 0.2 margin around theta*=0.5); the observed cosine is the
    target score times alpha*(lf)^2, so plain cosine mixes the classes
    once log frequencies spread over [0, 8].
    """
    rng = np.random.default_rng(seed)
    pairs = []
    for i in range(n):
        count = max(1, round(math.exp(rng.uniform(0.0, 8.0))))
        lf = math.log(count)
        stop = bool(rng.integers(0, 2))
        same = i % 2 == 0
        lo, hi = (0.60, 0.63) if same else (0.37, 0.40)
        target = rng.uniform(lo, hi)
        a = 1.0 + PLANTED_M * (PLANTED_B - lf)
        c = target * a * a
        assert -1.0 < c < 1.0
        v1 = np.zeros(dim)
        v1[0] = 1.0
        v2 = np.zeros(dim)
        v2[0] = c
        v2[1] = math.sqrt(1.0 - c * c)
        pairs.append(LabeledPair(word=f"w{i}", pos="N", vector1=v1, vector2=v2,
                                 gold=Label.SAME if same else Label.DIFFERENT,
                                 log_freq=lf, stop=stop))
    return pairs


def pairs_with_cosines(cosines, golds, log_freqs=None, stops=None,
                       dim: int = 4) -> list[LabeledPair]:
    """Pairs whose plain cosine equals the given value exactly."""
    n = len(cosines)
    log_freqs = log_freqs if log_freqs is not None else [0.0] * n
    stops = stops if stops is not None else [False] * n
    pairs = []
    for i, (c, gold) in enumerate(zip(cosines, golds)):
        v1 = np.zeros(dim)
        v1[0] = 1.0
        v2 = np.zeros(dim)
        v2[0] = c
        v2[1] = math.sqrt(max(0.0, 1.0 - c * c))
        pairs.append(LabeledPair(word=f"p{i}", pos="N", vector1=v1, vector2=v2,
                                 gold=gold, log_freq=float(log_freqs[i]),
                                 stop=bool(stops[i])))
    return pairs


@pytest.fixture(scope="session")
def planted400() -> list[LabeledPair]:
    return make_planted_pairs(n=400, seed=0)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def fixture_table_path(tmp_path_factory) -> Path:
    """Frequency table built once from the bundled corpus."""
    from normdiscount import count_corpus, save_table
    path = tmp_path_factory.mktemp("table") / "table.tsv"
    save_table(count_corpus(FIXTURES_DIR / "corpus.txt"), path)
    return path
