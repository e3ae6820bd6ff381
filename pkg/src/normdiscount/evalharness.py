"""Evaluation harness: dataset parsing, metrics, and analysis payloads.

Joins word-in-context pairs with frequencies, scores them plain and
discounted, and reports classification metrics (SAME as the positive
class) plus the diagnostic analyses: per-label score-vs-log-frequency
fits, gradient reduction between plain and discounted fits, and
equal-count frequency-bin rates of human vs predicted SAME judgements.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ._ioutil import atomic_write_text
from ._validation import as_vector
from .calibrate import LabeledPair
from .errors import DegenerateInputError, ParseError, ValidationError
from .freqstats import FrequencyTable, StopWordList, is_stop, log_frequency
from .simcore import DiscountParams, Label, cosine, discounted_cosine, judge
from .stats import FitLine, equal_count_bins, ols_fit

PLAIN = "plain"
DISCOUNTED = "discounted"
_MODES = (PLAIN, DISCOUNTED)
_LABEL_KEYS = ("same", "different")


@dataclass(frozen=True)
class WicInstance:
    """One dataset row: a word, its two contexts, and an optional label."""

    word: str
    pos: str
    index1: int
    index2: int
    context1: str
    context2: str
    gold: Label | None


def parse_wic(data_path, gold_path=None) -> list[WicInstance]:
    """Parse the 5-field TSV data file plus an optional aligned gold file.

    Data fields per line: word, POS, `i-j` token index pair, context1,
    context2. Gold lines are `T`/`F`, one per data line. Token indices are
    checked against the whitespace tokenization of their context.
    """
    rows: list[tuple[int, list[str]]] = []
    with open(data_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise ParseError(f"expected 5 tab-separated fields, got {len(fields)}",
                                 path=str(data_path), line=lineno)
            rows.append((lineno, fields))

    golds: list[Label | None]
    if gold_path is None:
        golds = [None] * len(rows)
    else:
        golds = []
        with open(gold_path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                if line not in ("T", "F"):
                    raise ParseError(f"gold label must be 'T' or 'F', got {line!r}",
                                     path=str(gold_path), line=lineno)
                golds.append(Label.from_tf(line))
        if len(golds) != len(rows):
            raise ParseError(
                f"gold/data length mismatch: {len(rows)} instances vs {len(golds)} labels",
                path=str(gold_path),
            )

    instances = []
    for (lineno, fields), gold in zip(rows, golds):
        word, pos, index_pair, context1, context2 = fields
        parts = index_pair.split("-")
        if len(parts) != 2:
            raise ParseError(f"unparseable index pair {index_pair!r}",
                             path=str(data_path), line=lineno)
        try:
            index1, index2 = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"unparseable index pair {index_pair!r}",
                             path=str(data_path), line=lineno) from exc
        if index1 < 0 or index2 < 0:
            raise ParseError(f"negative token index in {index_pair!r}",
                             path=str(data_path), line=lineno)
        for idx, context, which in ((index1, context1, 1), (index2, context2, 2)):
            if idx >= len(context.split()):
                raise ParseError(
                    f"token index {idx} out of range for context{which} "
                    f"({len(context.split())} tokens)",
                    path=str(data_path), line=lineno)
        instances.append(WicInstance(word=word, pos=pos, index1=index1, index2=index2,
                                     context1=context1, context2=context2, gold=gold))
    return instances


@dataclass(frozen=True)
class PairRecord:
    """One pair-embedding file record before joining with frequencies."""

    word: str
    pos: str
    gold: Label | None
    vector1: list[float]
    vector2: list[float]


def load_pair_records(path) -> list[PairRecord]:
    """Load the JSON-Lines pair-embedding format.

    Records: {"word": str, "pos": str, "gold": "T"|"F"|null,
    "vector1": [...], "vector2": [...]}.
    """
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", path=str(path), line=lineno) from exc
            if not isinstance(obj, dict):
                raise ParseError("record must be a JSON object", path=str(path), line=lineno)
            missing = {"word", "pos", "vector1", "vector2"} - set(obj)
            if missing:
                raise ParseError(f"record missing fields: {sorted(missing)}",
                                 path=str(path), line=lineno)
            gold_raw = obj.get("gold")
            if gold_raw is None:
                gold = None
            elif gold_raw in ("T", "F"):
                gold = Label.from_tf(gold_raw)
            else:
                raise ParseError(f"gold must be 'T', 'F', or null, got {gold_raw!r}",
                                 path=str(path), line=lineno)
            for key in ("vector1", "vector2"):
                if not isinstance(obj[key], list):
                    raise ParseError(f"{key} must be a JSON array", path=str(path), line=lineno)
            records.append(PairRecord(word=obj["word"], pos=obj["pos"], gold=gold,
                                      vector1=obj["vector1"], vector2=obj["vector2"]))
    return records


def join_pairs(records: Sequence[PairRecord], table: FrequencyTable,
               stops: StopWordList) -> list[LabeledPair]:
    """Attach log-frequency and stop-word class to each pair record."""
    pairs = []
    for record in records:
        lf = log_frequency(table, record.word)
        pairs.append(LabeledPair(
            word=record.word, pos=record.pos,
            vector1=as_vector(record.vector1, f"vector1 for {record.word!r}"),
            vector2=as_vector(record.vector2, f"vector2 for {record.word!r}"),
            gold=record.gold, log_freq=lf.value, stop=is_stop(stops, record.word),
        ))
    return pairs


@dataclass(frozen=True)
class BinRow:
    """Rates for one equal-count frequency bin."""

    bin_index: int
    human_same_rate: float
    predicted_same_rate: float
    mean_log_freq: float
    count: int


@dataclass(frozen=True)
class ScatterPoint:
    """One pair's scores for the score-vs-log-frequency scatter."""

    word: str
    log_freq: float
    gold: Label
    score_plain: float
    score_discounted: float


def fitline_dict(line: FitLine | None) -> dict | None:
    if line is None:
        return None
    return {"slope": line.slope, "intercept": line.intercept,
            "pearson_r": line.pearson_r, "n": line.n}


@dataclass(frozen=True)
class EvalReport:
    """Classification metrics plus analysis payloads for one evaluation."""

    mode: str
    n: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    precision_degenerate: bool
    recall_degenerate: bool
    confusion: dict[str, int]
    per_bin: tuple[BinRow, ...]
    scatter_fits: dict[str, dict[str, FitLine | None]]
    gradient_reduction_pct: dict[str, float | None]
    scatter_points: tuple[ScatterPoint, ...]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "precision_degenerate": self.precision_degenerate,
            "recall_degenerate": self.recall_degenerate,
            "confusion": dict(self.confusion),
            "per_bin": [
                {"bin": row.bin_index, "human_rate": row.human_same_rate,
                 "pred_rate": row.predicted_same_rate, "mean_logfreq": row.mean_log_freq,
                 "count": row.count}
                for row in self.per_bin
            ],
            "scatter_fits": {
                variant: {label: fitline_dict(line) for label, line in fits.items()}
                for variant, fits in self.scatter_fits.items()
            },
            "gradient_reduction_pct": dict(self.gradient_reduction_pct),
        }


def gradient_reduction(plain: FitLine, discounted: FitLine) -> float:
    """Percentage by which the discounted fit's slope shrank: 100*(1 - d/p)."""
    if plain.slope == 0.0:
        raise DegenerateInputError("plain slope is zero; gradient reduction undefined")
    return 100.0 * (1.0 - discounted.slope / plain.slope)


def bin_analysis(pairs: Sequence[LabeledPair], predictions: Sequence[Label],
                 num_bins: int = 10) -> list[BinRow]:
    """Human and predicted SAME rates per equal-count log-frequency bin."""
    if len(pairs) != len(predictions):
        raise ValidationError(
            f"{len(pairs)} pairs vs {len(predictions)} predictions")
    if num_bins > len(pairs):
        raise ValidationError(
            f"num_bins={num_bins} exceeds number of pairs ({len(pairs)})")
    for i, pair in enumerate(pairs):
        if pair.gold is None:
            raise ValidationError(f"pair {i} ({pair.word!r}) has no gold label")
    bins = equal_count_bins([pair.log_freq for pair in pairs], num_bins)
    rows = []
    for bin_index, members in enumerate(bins.members()):
        human = sum(1 for i in members if pairs[i].gold is Label.SAME)
        predicted = sum(1 for i in members if predictions[i] is Label.SAME)
        mean_lf = sum(pairs[i].log_freq for i in members) / len(members)
        rows.append(BinRow(bin_index=bin_index, human_same_rate=human / len(members),
                           predicted_same_rate=predicted / len(members),
                           mean_log_freq=mean_lf, count=len(members)))
    return rows


def _label_fit(points: list[tuple[float, float]]) -> FitLine | None:
    if len(points) < 2:
        return None
    try:
        return ols_fit(points)
    except DegenerateInputError:
        return None


def score_points(pairs: Sequence[LabeledPair],
                 params: DiscountParams) -> list[ScatterPoint]:
    """Plain and discounted scores per pair; gold labels are required."""
    points = []
    for i, pair in enumerate(pairs):
        if pair.gold is None:
            raise ValidationError(f"pair {i} ({pair.word!r}) has no gold label")
        points.append(ScatterPoint(
            word=pair.word, log_freq=pair.log_freq, gold=pair.gold,
            score_plain=cosine(pair.vector1, pair.vector2),
            score_discounted=discounted_cosine(pair.vector1, pair.log_freq, pair.stop,
                                               pair.vector2, pair.log_freq, pair.stop,
                                               params)))
    return points


def scatter_fit_summary(points: Sequence[ScatterPoint]) -> tuple[
        dict[str, dict[str, FitLine | None]], dict[str, float | None]]:
    """Per-label score-vs-log-frequency fits and gradient reductions.

    A fit is None when its label group has fewer than two points or no
    log-frequency variance; a reduction is None when either fit is
    missing or the plain slope is zero.
    """
    fits: dict[str, dict[str, FitLine | None]] = {"plain": {}, "discounted": {}}
    reductions: dict[str, float | None] = {}
    for key, label in zip(_LABEL_KEYS, (Label.SAME, Label.DIFFERENT)):
        group = [p for p in points if p.gold is label]
        plain_line = _label_fit([(p.log_freq, p.score_plain) for p in group])
        disc_line = _label_fit([(p.log_freq, p.score_discounted) for p in group])
        fits["plain"][key] = plain_line
        fits["discounted"][key] = disc_line
        if plain_line is not None and disc_line is not None and plain_line.slope != 0.0:
            reductions[key] = gradient_reduction(plain_line, disc_line)
        else:
            reductions[key] = None
    return fits, reductions


def evaluate(pairs: Sequence[LabeledPair], params: DiscountParams,
             mode: str = DISCOUNTED, num_bins: int = 10) -> EvalReport:
    """Score, classify, and analyse a labelled pair set.

    PLAIN mode forces alpha == 1 (zero slopes) while keeping the same
    threshold, so it equals DISCOUNTED mode with m_s = m_n = 0 field for
    field. The per-bin analysis clamps the bin count to the dataset size
    so small fixtures still produce a total report.
    """
    if mode not in _MODES:
        raise ValidationError(f"mode must be one of {_MODES}, got {mode!r}")
    if not pairs:
        raise ValidationError("pair list must be nonempty")
    effective = params if mode == DISCOUNTED else DiscountParams.plain(params.theta)

    points = score_points(pairs, effective)
    predictions = [judge(p.score_discounted, effective.theta) for p in points]

    tp = sum(1 for pair, pred in zip(pairs, predictions)
             if pred is Label.SAME and pair.gold is Label.SAME)
    fp = sum(1 for pair, pred in zip(pairs, predictions)
             if pred is Label.SAME and pair.gold is Label.DIFFERENT)
    fn = sum(1 for pair, pred in zip(pairs, predictions)
             if pred is Label.DIFFERENT and pair.gold is Label.SAME)
    tn = len(pairs) - tp - fp - fn

    accuracy = (tp + tn) / len(pairs)
    precision_degenerate = (tp + fp) == 0
    recall_degenerate = (tp + fn) == 0
    precision = 0.0 if precision_degenerate else tp / (tp + fp)
    recall = 0.0 if recall_degenerate else tp / (tp + fn)
    f1 = 0.0 if precision + recall == 0.0 else 2 * precision * recall / (precision + recall)

    scatter_fits, reductions = scatter_fit_summary(points)
    rows = bin_analysis(pairs, predictions, num_bins=min(num_bins, len(pairs)))

    return EvalReport(
        mode=mode, n=len(pairs), accuracy=accuracy, precision=precision, recall=recall,
        f1=f1, precision_degenerate=precision_degenerate, recall_degenerate=recall_degenerate,
        confusion={"tp": tp, "fp": fp, "fn": fn, "tn": tn},
        per_bin=tuple(rows), scatter_fits=scatter_fits,
        gradient_reduction_pct=reductions, scatter_points=tuple(points),
    )


def bins_csv_text(rows: Sequence[BinRow]) -> str:
    """Render bin rows as CSV (bin,human_rate,pred_rate,mean_logfreq)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bin", "human_rate", "pred_rate", "mean_logfreq"])
    for row in rows:
        writer.writerow([row.bin_index, repr(row.human_same_rate),
                         repr(row.predicted_same_rate), repr(row.mean_log_freq)])
    return buf.getvalue()


def scatter_csv_text(points: Sequence[ScatterPoint]) -> str:
    """Render scatter points as CSV (word,logfreq,label,score_plain,score_discounted)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "logfreq", "label", "score_plain", "score_discounted"])
    for point in points:
        writer.writerow([point.word, repr(point.log_freq), point.gold.value,
                         repr(point.score_plain), repr(point.score_discounted)])
    return buf.getvalue()


def write_report_files(report: EvalReport, out_dir) -> dict[str, Path]:
    """Write report.json, bins.csv, and scatter.csv into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "report": out_dir / "report.json",
        "bins": out_dir / "bins.csv",
        "scatter": out_dir / "scatter.csv",
    }
    atomic_write_text(paths["report"],
                      json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    atomic_write_text(paths["bins"], bins_csv_text(report.per_bin))
    atomic_write_text(paths["scatter"], scatter_csv_text(report.scatter_points))
    return paths
