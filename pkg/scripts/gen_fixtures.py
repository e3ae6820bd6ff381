"""Regenerate the bundled test fixtures under tests/fixtures/.

The fixtures are deterministic (seed 0) and internally consistent: the
pair file's vectors are built so that discounting with the planted
parameters (theta*=0.5, m*=0.05, b*=5.0) separates the classes with a
0.2 score margin at the log frequencies induced by corpus.txt, while
plain cosine does not separate them. The instance file plants an exact
norm = 2*logfreq + 0.5 relation for the norm analysis.

Run from the repository root: python scripts/gen_fixtures.py
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from normdiscount import count_corpus, default_stop_words, is_stop, log_frequency

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

THETA_STAR = 0.5
M_STAR = 0.05
B_STAR = 5.0
DIM = 8
NUM_PAIRS = 400

STOP_VOCAB = ["the", "of", "and", "to", "in", "a", "is", "that", "it", "as",
              "for", "was"]
NUM_CONTENT = 60
MAX_LOG_COUNT = 7.0


def build_vocab(rng: np.random.Generator) -> dict[str, int]:
    stops = default_stop_words()
    for word in STOP_VOCAB:
        assert is_stop(stops, word), word
    content = [f"word{i:03d}" for i in range(NUM_CONTENT)]
    for word in content:
        assert not is_stop(stops, word), word
    vocab = {}
    words = STOP_VOCAB + content
    targets = np.linspace(0.0, MAX_LOG_COUNT, num=len(words))
    rng.shuffle(targets)
    for word, u in zip(words, targets):
        vocab[word] = max(1, round(math.exp(u)))
    return vocab


def write_corpus(vocab: dict[str, int], rng: np.random.Generator, path: Path) -> None:
    tokens = []
    for word, count in vocab.items():
        tokens.extend([word] * count)
    order = rng.permutation(len(tokens))
    tokens = [tokens[i] for i in order]
    lines = [" ".join(tokens[i:i + 12]) for i in range(0, len(tokens), 12)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_pairs(vocab: dict[str, int], rng: np.random.Generator, corpus: Path,
                path: Path) -> None:
    table = count_corpus(corpus)
    words = sorted(vocab)
    with path.open("w", encoding="utf-8") as fh:
        for i in range(NUM_PAIRS):
            word = words[i % len(words)]
            lf = log_frequency(table, word).value
            same = i % 2 == 0
            lo, hi = (0.60, 0.63) if same else (0.37, 0.40)
            target = rng.uniform(lo, hi)
            a = 1.0 + M_STAR * (B_STAR - lf)
            c = target * a * a
            assert -1.0 < c < 1.0, (word, c)
            v1 = [0.0] * DIM
            v1[0] = 1.0
            v2 = [0.0] * DIM
            v2[0] = c
            v2[1] = math.sqrt(1.0 - c * c)
            fh.write(json.dumps({"word": word, "pos": "N",
                                 "gold": "T" if same else "F",
                                 "vector1": v1, "vector2": v2}) + "\n")


def write_instances(vocab: dict[str, int], corpus: Path, path: Path) -> None:
    table = count_corpus(corpus)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dim": DIM}) + "\n")
        for word in sorted(vocab):
            lf = log_frequency(table, word).value
            norm = 2.0 * lf + 0.5
            for instance, wiggle in (("a", 0.3), ("b", -0.3)):
                vec = [0.0] * DIM
                vec[0] = norm
                vec[1] = wiggle
                fh.write(json.dumps({"word": word, "instance_id": f"{word}-{instance}",
                                     "vector": vec}) + "\n")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(0)
    vocab = build_vocab(rng)
    corpus = FIXTURES / "corpus.txt"
    write_corpus(vocab, rng, corpus)
    write_pairs(vocab, rng, corpus, FIXTURES / "pairs_train.jsonl")
    write_instances(vocab, corpus, FIXTURES / "instances.jsonl")
    total = sum(vocab.values())
    print(f"wrote fixtures for {len(vocab)} words, {total} corpus tokens")


if __name__ == "__main__":
    main()
