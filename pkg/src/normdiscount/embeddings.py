"""Instance-embedding storage: loading, validation, sibling aggregation.

An instance embedding is one contextualised occurrence of a word. All
occurrences of a word form its sibling set; the mean sibling embedding is
their componentwise average and its l2 norm is the quantity that grows
with corpus frequency. A loaded store is immutable and safe for
concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from ._validation import as_vector
from .errors import DimensionMismatchError, ParseError, ValidationError
from .freqstats import FrequencyTable, StopWordList, is_stop, log_frequency


@dataclass(frozen=True)
class InstanceEmbedding:
    """One contextualised occurrence: word, unique instance id, vector."""

    word: str
    instance_id: str
    vector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vector", as_vector(self.vector, f"vector for {self.word!r}"))


@dataclass(frozen=True)
class SiblingSet:
    """All instance embeddings of one word; nonempty, single word."""

    word: str
    members: tuple[InstanceEmbedding, ...]

    def __post_init__(self):
        if not self.members:
            raise ValidationError(f"sibling set for {self.word!r} must be nonempty")
        for member in self.members:
            if member.word != self.word:
                raise ValidationError(
                    f"sibling set for {self.word!r} contains member of word {member.word!r}"
                )

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class MeanSiblingEmbedding:
    """Componentwise mean of a word's sibling embeddings with its support."""

    word: str
    vector: np.ndarray
    support: int

    def __post_init__(self):
        if self.support < 1:
            raise ValidationError("support must be >= 1")


class EmbeddingStore:
    """Sibling sets indexed by word, with one declared dimension."""

    def __init__(self, sets: dict[str, SiblingSet], dim: int):
        self._sets = dict(sets)
        self._dim = int(dim)

    @property
    def dim(self) -> int:
        return self._dim

    def words(self) -> list[str]:
        return sorted(self._sets)

    def __getitem__(self, word: str) -> SiblingSet:
        return self._sets[word]

    def __contains__(self, word: str) -> bool:
        return word in self._sets

    def __iter__(self) -> Iterator[SiblingSet]:
        for word in self.words():
            yield self._sets[word]

    def __len__(self) -> int:
        return len(self._sets)


def load_instances(path) -> EmbeddingStore:
    """Load a JSON-Lines instance file into an EmbeddingStore.

    Each line holds {"word": str, "instance_id": str, "vector": [...]}.
    The first line may instead be a header {"dim": int}; otherwise the
    dimension is taken from the first record. Dimension consistency,
    finiteness, and instance-id uniqueness per word are enforced.
    """
    groups: dict[str, list[InstanceEmbedding]] = {}
    seen_ids: dict[str, set[str]] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", path=str(path), line=lineno) from exc
            if not isinstance(record, dict):
                raise ParseError("record must be a JSON object", path=str(path), line=lineno)
            if lineno == 1 and "word" not in record and "dim" in record:
                if not isinstance(record["dim"], int) or record["dim"] < 1:
                    raise ParseError(f"header dim must be a positive integer, got {record['dim']!r}",
                                     path=str(path), line=lineno)
                dim = record["dim"]
                continue
            missing = {"word", "instance_id", "vector"} - set(record)
            if missing:
                raise ParseError(f"record missing fields: {sorted(missing)}",
                                 path=str(path), line=lineno)
            word, instance_id, raw_vector = record["word"], record["instance_id"], record["vector"]
            if not isinstance(word, str) or not isinstance(instance_id, str):
                raise ParseError("word and instance_id must be strings", path=str(path), line=lineno)
            if not isinstance(raw_vector, list):
                raise ParseError("vector must be a JSON array", path=str(path), line=lineno)
            try:
                vector = as_vector(raw_vector, f"vector for {word!r}")
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
            if dim is None:
                dim = vector.shape[0]
            elif vector.shape[0] != dim:
                raise DimensionMismatchError(dim, vector.shape[0],
                                             context=f"{path}:{lineno} word {word!r}")
            ids = seen_ids.setdefault(word, set())
            if instance_id in ids:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate instance_id {instance_id!r} for word {word!r}"
                )
            ids.add(instance_id)
            groups.setdefault(word, []).append(
                InstanceEmbedding(word=word, instance_id=instance_id, vector=vector)
            )
    if dim is None:
        raise ValidationError(f"{path}: no instance records found")
    sets = {word: SiblingSet(word=word, members=tuple(members))
            for word, members in groups.items()}
    return EmbeddingStore(sets, dim=dim)


def mean_sibling(sibling_set: SiblingSet) -> MeanSiblingEmbedding:
    """Componentwise arithmetic mean of the set's vectors.

    Accumulates in float64 regardless of input precision; large sibling
    sets drift under single-precision accumulation.
    """
    stacked = np.stack([m.vector for m in sibling_set.members]).astype(np.float64, copy=False)
    return MeanSiblingEmbedding(
        word=sibling_set.word,
        vector=stacked.mean(axis=0),
        support=len(sibling_set.members),
    )


def l2_norm(vector) -> float:
    """Euclidean norm; 0 exactly iff the zero vector."""
    return float(np.linalg.norm(as_vector(vector)))


class NormFreqPoint(NamedTuple):
    """One word's (log-frequency, mean-sibling norm) observation."""

    word: str
    log_freq: float
    norm: float
    freq_missing: bool


def norm_freq_points(store: EmbeddingStore, table: FrequencyTable,
                     stops: StopWordList) -> tuple[list[NormFreqPoint], list[NormFreqPoint]]:
    """Per-word (log-frequency, norm) points split into (stop, non-stop).

    One point per word in the store; words absent from the frequency table
    are included at log-frequency 0 with freq_missing=True.
    """
    stop_points: list[NormFreqPoint] = []
    nonstop_points: list[NormFreqPoint] = []
    for word in store.words():
        mean = mean_sibling(store[word])
        lf = log_frequency(table, word)
        point = NormFreqPoint(word=word, log_freq=lf.value,
                              norm=float(np.linalg.norm(mean.vector)),
                              freq_missing=lf.missing)
        if is_stop(stops, word):
            stop_points.append(point)
        else:
            nonstop_points.append(point)
    return stop_points, nonstop_points
