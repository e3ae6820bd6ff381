"""Word-frequency statistics over text corpora.

Counts words with a fixed deterministic tokenization rule (lowercase, split
on Unicode whitespace, strip surrounding punctuation), exposes natural-log
frequencies with an explicit missing-word policy, classifies stop words,
and builds log-frequency histograms. Tables built from disjoint corpus
shards merge deterministically, so counting can be parallelised externally;
a constructed table is immutable and safe for concurrent reads.
"""

from __future__ import annotations

import codecs
import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator, NamedTuple

from ._ioutil import atomic_write_text
from .errors import DegenerateInputError, IngestionError, ParseError, ValidationError

_CHUNK_SIZE = 1 << 16


@dataclass(frozen=True)
class FrequencyTable:
    """Word -> occurrence count map plus the corpus total token count.

    Invariants: every stored count >= 1 (absent words are a lookup policy,
    never stored zeros) and total_tokens equals the sum of counts.
    """

    counts: dict[str, int]
    total_tokens: int

    def __post_init__(self):
        total = 0
        for word, count in self.counts.items():
            if not isinstance(count, int) or count < 1:
                raise ValidationError(f"count for {word!r} must be a positive integer, got {count!r}")
            total += count
        if total != self.total_tokens:
            raise ValidationError(
                f"total_tokens={self.total_tokens} does not equal sum of counts ({total})"
            )

    @classmethod
    def from_counts(cls, counts: dict[str, int]) -> "FrequencyTable":
        return cls(counts=dict(counts), total_tokens=sum(counts.values()))

    def count(self, word: str) -> int:
        """Raw count of a word; 0 for absent words (never stored)."""
        return self.counts.get(word, 0)

    def __contains__(self, word: str) -> bool:
        return word in self.counts

    def __len__(self) -> int:
        return len(self.counts)


class LogFrequency(NamedTuple):
    """Natural-log frequency plus a flag marking words absent from the table."""

    value: float
    missing: bool


@dataclass(frozen=True)
class StopWordList:
    """Set of lowercased stop words; membership lowercases its argument."""

    words: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def from_file(cls, path) -> "StopWordList":
        """Load one lowercase word per line (UTF-8, blank lines ignored)."""
        text = Path(path).read_text(encoding="utf-8")
        return cls(frozenset(line.strip() for line in text.splitlines() if line.strip()))

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)


def default_stop_words() -> StopWordList:
    """Bundled English stop-word list (modeled on NLTK's English list).

    The upstream citation of "1466 stop words" matches no standard NLTK
    list size, so the bundle ships the common 179-word English list and
    any list can be substituted via StopWordList.from_file.
    """
    text = resources.files("normdiscount").joinpath("data/stopwords.txt").read_text("utf-8")
    return StopWordList(frozenset(line.strip() for line in text.splitlines() if line.strip()))


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> Iterator[str]:
    """Apply the counting rule: lowercase, split on whitespace, strip
    surrounding punctuation, discard empty tokens."""
    for raw in text.lower().split():
        token = _strip_punct(raw)
        if token:
            yield token


def _decode_chunks(stream: IO[bytes], first: bytes | None = None) -> Iterator[tuple[str, int]]:
    decoder = codecs.getincrementaldecoder("utf-8")()
    consumed = 0

    def raw_chunks():
        if first is not None:
            yield first
        while True:
            block = stream.read(_CHUNK_SIZE)
            if not block:
                return
            yield block

    for raw in raw_chunks():
        try:
            text = decoder.decode(raw)
        except UnicodeDecodeError as exc:
            raise IngestionError("corpus is not valid UTF-8", consumed + exc.start) from exc
        consumed += len(raw)
        if text:
            yield text, len(raw)
    try:
        tail = decoder.decode(b"", final=True)
    except UnicodeDecodeError as exc:
        raise IngestionError("corpus ends mid UTF-8 sequence", consumed) from exc
    if tail:
        yield tail, 0


def _iter_text(source) -> Iterator[tuple[str, int]]:
    """Yield (text chunk, byte length) from a path or readable stream."""
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            yield from _decode_chunks(fh)
    elif hasattr(source, "read"):
        probe = source.read(_CHUNK_SIZE)
        if isinstance(probe, bytes):
            yield from _decode_chunks(source, first=probe)
        else:
            chunk = probe
            while chunk:
                yield chunk, len(chunk.encode("utf-8"))
                chunk = source.read(_CHUNK_SIZE)
    else:
        raise TypeError(f"unsupported corpus source: {type(source).__name__}")


def count_corpus(source) -> FrequencyTable:
    """Count word frequencies in a UTF-8 text corpus.

    Args:
        source: File path, binary stream, or text stream. The stream is
            consumed once; tokens spanning internal chunk boundaries are
            handled correctly.

    Returns:
        FrequencyTable whose counts follow the tokenization rule.

    Raises:
        IngestionError: On I/O failure or invalid UTF-8, identifying the
            byte offset reached.
    """
    counts: Counter[str] = Counter()
    offset = 0
    pending = ""
    try:
        for text, nbytes in _iter_text(source):
            offset += nbytes
            buffered = pending + text
            parts = buffered.split()
            if buffered and not buffered[-1].isspace() and parts:
                pending = parts.pop()
            else:
                pending = ""
            for raw in parts:
                token = _strip_punct(raw.lower())
                if token:
                    counts[token] += 1
    except OSError as exc:
        raise IngestionError(f"I/O failure reading corpus: {exc}", offset) from exc
    if pending:
        token = _strip_punct(pending.lower())
        if token:
            counts[token] += 1
    return FrequencyTable.from_counts(counts)


def merge_tables(tables: Iterable[FrequencyTable]) -> FrequencyTable:
    """Merge shard tables; equals counting the concatenated corpus."""
    merged: Counter[str] = Counter()
    for table in tables:
        merged.update(table.counts)
    return FrequencyTable.from_counts(merged)


def log_frequency(table: FrequencyTable, word: str) -> LogFrequency:
    """Natural log of the word's count.

    Absent words are treated as count 1 (value 0.0) with missing=True so
    callers can surface data gaps without hitting ln(0).
    """
    count = table.counts.get(word)
    if count is None:
        return LogFrequency(0.0, True)
    return LogFrequency(math.log(count), False)


def is_stop(stops: StopWordList, word: str) -> bool:
    """True iff the lowercased word is in the stop list."""
    return word in stops


@dataclass(frozen=True)
class Histogram:
    """Equal-width buckets over log-frequency; counts are distinct words."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]


def frequency_histogram(table: FrequencyTable, num_buckets: int) -> Histogram:
    """Bucket the vocabulary by log-frequency into equal-width intervals.

    Buckets partition [min log-freq, max log-freq]; per-bucket word counts
    sum to the vocabulary size.
    """
    if num_buckets < 1:
        raise ValidationError(f"num_buckets must be >= 1, got {num_buckets}")
    if not table.counts:
        raise DegenerateInputError("cannot build a histogram from an empty table")
    logs = [math.log(c) for c in table.counts.values()]
    lo, hi = min(logs), max(logs)
    width = hi - lo
    edges = tuple(lo + width * i / num_buckets for i in range(num_buckets + 1))
    bucket_counts = [0] * num_buckets
    for value in logs:
        if width == 0.0:
            idx = 0
        else:
            idx = min(int((value - lo) / width * num_buckets), num_buckets - 1)
        bucket_counts[idx] += 1
    return Histogram(edges=edges, counts=tuple(bucket_counts))


def save_table(table: FrequencyTable, path) -> None:
    """Write the TSV table format: `#total<TAB>n` header, then
    `word<TAB>count` rows sorted by descending count then word."""
    rows = sorted(table.counts.items(), key=lambda item: (-item[1], item[0]))
    lines = [f"#total\t{table.total_tokens}"]
    lines.extend(f"{word}\t{count}" for word, count in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_table(path) -> FrequencyTable:
    """Read a table written by save_table; validates the total header."""
    counts: dict[str, int] = {}
    declared_total = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if lineno == 1:
                if not line.startswith("#total\t"):
                    raise ParseError("missing '#total' header", path=str(path), line=lineno)
                try:
                    declared_total = int(line.split("\t", 1)[1])
                except (IndexError, ValueError) as exc:
                    raise ParseError("malformed '#total' header", path=str(path), line=lineno) from exc
                continue
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(f"expected 2 tab-separated fields, got {len(fields)}",
                                 path=str(path), line=lineno)
            word, raw_count = fields
            try:
                count = int(raw_count)
            except ValueError as exc:
                raise ParseError(f"non-integer count {raw_count!r}", path=str(path), line=lineno) from exc
            if word in counts:
                raise ParseError(f"duplicate word {word!r}", path=str(path), line=lineno)
            counts[word] = count
    if declared_total is None:
        raise ParseError("empty table file (no '#total' header)", path=str(path), line=1)
    table = FrequencyTable(counts=counts, total_tokens=sum(counts.values()))
    if table.total_tokens != declared_total:
        raise ParseError(
            f"declared total {declared_total} does not match sum of counts {table.total_tokens}",
            path=str(path), line=1,
        )
    return table
