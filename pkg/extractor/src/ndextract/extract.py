"""Embedding extraction into the JSON-Lines pair and instance formats.

The output formats are exactly those consumed by the evaluation pipeline:
pair records carry word, pos, gold, vector1, vector2; instance files open
with a {"dim": N} header followed by instance_id, word, vector records.
Failed records are skipped, logged one per line, and reported back so the
caller can exit nonzero; successful records keep input order.
"""

from __future__ import annotations

import json
import os
import string
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import ContractError
from .inputs import InstanceLine, parse_instance_file, parse_pair_file
from .model import EmbeddingModel


@dataclass(frozen=True)
class ExtractionSpec:
    """One extraction run: model, layer, input and output locations."""

    model_id: str
    input_path: Path
    output_path: Path
    layer: str = "last"
    pooling: str = "mean"
    batch_size: int = 8
    gold_path: Path | None = None
    errors_path: Path | None = None

    def resolved_errors_path(self) -> Path:
        out = Path(self.output_path)
        if self.errors_path is not None:
            return Path(self.errors_path)
        return out.with_name(out.stem + "_errors.log")


@dataclass(frozen=True)
class Failure:
    """One skipped record: input line number and the reason."""

    line: int
    message: str


@dataclass(frozen=True)
class ExtractionResult:
    written: int
    failures: tuple[Failure, ...]
    dim: int
    output_path: Path
    errors_path: Path | None


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _finish(spec: ExtractionSpec, lines: list[str],
            failures: list[Failure], dim: int) -> ExtractionResult:
    out = Path(spec.output_path)
    _atomic_write(out, "".join(line + "\n" for line in lines))
    errors_path = None
    if failures:
        errors_path = spec.resolved_errors_path()
        _atomic_write(errors_path,
                      "".join(f"line {f.line}: {f.message}\n" for f in failures))
    return ExtractionResult(written=len(lines), failures=tuple(failures),
                            dim=dim, output_path=out, errors_path=errors_path)


def _alignment_failure(tokens, index: int, vector, label: str) -> str | None:
    if index >= len(tokens):
        return f"{label} index {index} out of range ({len(tokens)} tokens)"
    if vector is None:
        return f"{label} target aligned to no encoder position"
    return None


def extract_pairs(spec: ExtractionSpec) -> ExtractionResult:
    """WiC-style TSV to one pair-embedding record per data line.

    vector1 and vector2 are the target word's vectors in each context.
    Without a gold file every record carries gold null.
    """
    rows = parse_pair_file(spec.input_path, spec.gold_path)
    if not rows:
        raise ContractError(f"{spec.input_path}: no data lines")
    model = EmbeddingModel(spec.model_id, layer=spec.layer,
                           pooling=spec.pooling, batch_size=spec.batch_size)

    items = []
    for row in rows:
        items.append((row.tokens1, row.index1))
        items.append((row.tokens2, row.index2))
    vectors = model.target_vectors(items)

    lines: list[str] = []
    failures: list[Failure] = []
    for k, row in enumerate(rows):
        v1, v2 = vectors[2 * k], vectors[2 * k + 1]
        problems = [msg for msg in (
            _alignment_failure(row.tokens1, row.index1, v1, "context1"),
            _alignment_failure(row.tokens2, row.index2, v2, "context2"),
        ) if msg]
        if problems:
            failures.append(Failure(line=row.line, message="; ".join(problems)))
            continue
        lines.append(json.dumps({
            "word": row.word,
            "pos": row.pos,
            "gold": row.gold,
            "vector1": [float(x) for x in v1],
            "vector2": [float(x) for x in v2],
        }, sort_keys=True))
    return _finish(spec, lines, failures, model.hidden_size)


def _normalize_token(token: str) -> str:
    return token.strip(string.punctuation).lower()


def _instance_failure(row: InstanceLine, vector) -> str | None:
    if row.index >= len(row.tokens):
        return f"target index {row.index} out of range ({len(row.tokens)} tokens)"
    token = row.tokens[row.index]
    if _normalize_token(token) != row.word.lower():
        return (f"token {token!r} at index {row.index} does not match "
                f"target word {row.word!r}")
    if vector is None:
        return "target aligned to no encoder position"
    return None


def extract_instances(spec: ExtractionSpec) -> ExtractionResult:
    """Sentence-list TSV to one instance-embedding record per line.

    The instance id is the target word plus the input line number, so
    repeated occurrences stay distinct. The sentence token at the target
    index must match the target word up to case and surrounding ASCII
    punctuation; mismatches are record-level failures, not parse errors.
    """
    rows = parse_instance_file(spec.input_path)
    if not rows:
        raise ContractError(f"{spec.input_path}: no data lines")
    model = EmbeddingModel(spec.model_id, layer=spec.layer,
                           pooling=spec.pooling, batch_size=spec.batch_size)

    vectors = model.target_vectors([(row.tokens, row.index) for row in rows])

    lines = [json.dumps({"dim": model.hidden_size})]
    failures: list[Failure] = []
    for row, vector in zip(rows, vectors):
        message = _instance_failure(row, vector)
        if message:
            failures.append(Failure(line=row.line, message=message))
            continue
        lines.append(json.dumps({
            "instance_id": f"{row.word}-L{row.line}",
            "word": row.word,
            "vector": [float(x) for x in vector],
        }, sort_keys=True))
    # written counts records, not the dim header line
    result = _finish(spec, lines, failures, model.hidden_size)
    return ExtractionResult(written=result.written - 1, failures=result.failures,
                            dim=result.dim, output_path=result.output_path,
                            errors_path=result.errors_path)
