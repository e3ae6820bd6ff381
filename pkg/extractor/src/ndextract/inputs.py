"""Input parsing: WiC-style pair files and raw sentence lists.

Both formats are tab-separated with whitespace-split contexts. Target
indices refer to whitespace-token positions. Only line structure is
validated here; index range and target alignment are checked per record
during extraction so that one bad row cannot abort a whole run.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ContractError, InputError

_GOLD_VALUES = ("T", "F")


@dataclass(frozen=True)
class PairLine:
    """One WiC data line: a target word in two contexts."""

    word: str
    pos: str
    index1: int
    index2: int
    tokens1: tuple[str, ...]
    tokens2: tuple[str, ...]
    gold: str | None
    line: int


@dataclass(frozen=True)
class InstanceLine:
    """One occurrence: target word at a token index in one sentence."""

    word: str
    index: int
    tokens: tuple[str, ...]
    line: int


def _data_lines(path) -> list[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        return [(lineno, raw.rstrip("\n")) for lineno, raw in enumerate(fh, start=1)
                if raw.strip()]


def _parse_index(text: str, path, lineno: int, what: str) -> int:
    if not text.isdigit():
        raise InputError(f"{what} must be a non-negative integer, got {text!r}",
                         path=str(path), line=lineno)
    return int(text)


def parse_pair_file(path, gold_path=None) -> list[PairLine]:
    """Parse lines of word, pos, index1-index2, context1, context2.

    Gold labels, when a file is given, come one per line as T or F and
    must align one to one with the data lines.
    """
    rows: list[PairLine] = []
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 5:
            raise InputError(f"expected 5 tab-separated fields, got {len(fields)}",
                             path=str(path), line=lineno)
        word, pos, indices, context1, context2 = fields
        if not word:
            raise InputError("target word must be nonempty", path=str(path), line=lineno)
        left, sep, right = indices.partition("-")
        if not sep:
            raise InputError(f"index pair must look like '1-2', got {indices!r}",
                             path=str(path), line=lineno)
        index1 = _parse_index(left, path, lineno, "first index")
        index2 = _parse_index(right, path, lineno, "second index")
        tokens1 = tuple(context1.split())
        tokens2 = tuple(context2.split())
        if not tokens1 or not tokens2:
            raise InputError("contexts must be nonempty", path=str(path), line=lineno)
        rows.append(PairLine(word=word, pos=pos, index1=index1, index2=index2,
                             tokens1=tokens1, tokens2=tokens2, gold=None,
                             line=lineno))
    if gold_path is None:
        return rows
    golds = _read_gold(gold_path)
    if len(golds) != len(rows):
        raise ContractError(f"{gold_path}: {len(golds)} gold labels for "
                            f"{len(rows)} data lines")
    return [replace(row, gold=gold) for row, gold in zip(rows, golds)]


def _read_gold(gold_path) -> list[str]:
    labels = []
    for lineno, value in _data_lines(gold_path):
        if value not in _GOLD_VALUES:
            raise InputError(f"gold label must be T or F, got {value!r}",
                             path=str(gold_path), line=lineno)
        labels.append(value)
    return labels


def parse_instance_file(path) -> list[InstanceLine]:
    """Parse lines of word, index, sentence."""
    rows: list[InstanceLine] = []
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 3:
            raise InputError(f"expected 3 tab-separated fields, got {len(fields)}",
                             path=str(path), line=lineno)
        word, index_text, sentence = fields
        if not word:
            raise InputError("target word must be nonempty", path=str(path), line=lineno)
        index = _parse_index(index_text, path, lineno, "target index")
        tokens = tuple(sentence.split())
        if not tokens:
            raise InputError("sentence must be nonempty", path=str(path), line=lineno)
        rows.append(InstanceLine(word=word, index=index, tokens=tokens, line=lineno))
    return rows
