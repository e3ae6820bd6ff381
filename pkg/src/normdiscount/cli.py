"""Command-line pipeline: frequency counting, fitting, evaluation, analyses.

Exit codes: 0 success, 2 I/O failure (missing or unreadable files),
3 contract violation (malformed content, invalid flag combinations,
degenerate inputs). All randomness flows from --seed; rerunning any
subcommand with identical inputs and seed rewrites outputs byte for
byte. Output files are written atomically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from ._ioutil import atomic_write_text
from .calibrate import average_params, fit_runs, objective
from .embeddings import load_instances, norm_freq_points
from .errors import (DegenerateInputError, IngestionError, NormDiscountError,
                     ValidationError)
from .evalharness import (DISCOUNTED, PLAIN, evaluate, fitline_dict, join_pairs,
                          load_pair_records, scatter_csv_text, scatter_fit_summary,
                          score_points, write_report_files)
from .freqstats import (StopWordList, count_corpus, default_stop_words, load_table,
                        merge_tables, save_table)
from .simcore import DiscountParams
from .stats import ols_fit

EXIT_OK = 0
EXIT_IO = 2
EXIT_CONTRACT = 3


def _positive(value: int, name: str) -> int:
    if value < 1:
        raise ValidationError(f"{name} must be a positive integer, got {value}")
    return value


def _load_stops(path: str | None) -> StopWordList:
    return StopWordList.from_file(path) if path else default_stop_words()


def _derived_path(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def _dump_json(payload: dict, path: Path) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _cmd_freq(args) -> int:
    table = merge_tables(count_corpus(path) for path in args.corpus)
    save_table(table, args.out)
    print(f"wrote {args.out} ({len(table)} types, {table.total_tokens} tokens)")
    return EXIT_OK


def _cmd_fit(args) -> int:
    _positive(args.budget, "--budget")
    _positive(args.repeats, "--repeats")
    table = load_table(args.freq_table)
    stops = _load_stops(args.stopwords)
    pairs = join_pairs(load_pair_records(args.pairs), table, stops)

    runs = fit_runs(pairs, base_seed=args.seed, budget=args.budget,
                    repeats=args.repeats)
    params = average_params([p for p, _ in runs])
    train_accuracy = objective(params, pairs)

    out = Path(args.out)
    params.save(out)
    report_path = Path(args.report) if args.report else _derived_path(out, "_report.json")
    _dump_json({
        "params": params.to_dict(),
        "train_accuracy": train_accuracy,
        "seed": args.seed,
        "budget": args.budget,
        "repeats": args.repeats,
        "per_run": [{"seed": args.seed + i, "params": p.to_dict(), "accuracy": a}
                    for i, (p, a) in enumerate(runs)],
    }, report_path)
    print(f"wrote {out} and {report_path} (train_accuracy={train_accuracy:.4f})")
    return EXIT_OK


def _resolve_params(params_path: str | None, mode: str) -> DiscountParams:
    if params_path:
        return DiscountParams.load(params_path)
    if mode == DISCOUNTED:
        raise ValidationError("--params is required in discounted mode")
    return DiscountParams.plain()


def _cmd_eval(args) -> int:
    _positive(args.bins, "--bins")
    params = _resolve_params(args.params, args.mode)
    table = load_table(args.freq_table)
    stops = _load_stops(args.stopwords)
    pairs = join_pairs(load_pair_records(args.pairs), table, stops)

    report = evaluate(pairs, params, mode=args.mode, num_bins=args.bins)
    paths = write_report_files(report, args.out)
    if args.plot:
        _plot_bins(report, Path(args.out) / "bins.png")
    print(f"wrote {paths['report']} (mode={report.mode} accuracy={report.accuracy:.4f} "
          f"f1={report.f1:.4f})")
    return EXIT_OK


def _class_fit(points):
    usable = [(p.log_freq, p.norm) for p in points]
    if len(usable) < 2:
        return None
    try:
        return ols_fit(usable)
    except DegenerateInputError:
        return None


def _cmd_analyze_norms(args) -> int:
    store = load_instances(args.instances)
    table = load_table(args.freq_table)
    stops = _load_stops(args.stopwords)
    stop_points, nonstop_points = norm_freq_points(store, table, stops)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "logfreq", "norm", "class", "freq_missing"])
    for cls, points in (("stop", stop_points), ("nonstop", nonstop_points)):
        for p in points:
            writer.writerow([p.word, repr(p.log_freq), repr(p.norm), cls,
                             "true" if p.freq_missing else "false"])
    out = Path(args.out)
    atomic_write_text(out, buf.getvalue())

    fits = {"stop": _class_fit(stop_points), "nonstop": _class_fit(nonstop_points)}
    summary_path = _derived_path(out, "_summary.json")
    _dump_json({
        "stop": fitline_dict(fits["stop"]),
        "nonstop": fitline_dict(fits["nonstop"]),
        "n_stop": len(stop_points),
        "n_nonstop": len(nonstop_points),
    }, summary_path)
    if args.plot:
        _plot_norms(stop_points, nonstop_points, fits, _derived_path(out, ".png"))
    print(f"wrote {out} and {summary_path} "
          f"({len(stop_points)} stop, {len(nonstop_points)} non-stop words)")
    return EXIT_OK


def _cmd_analyze_scatter(args) -> int:
    if not args.params:
        raise ValidationError("--params is required for the scatter analysis")
    params = DiscountParams.load(args.params)
    table = load_table(args.freq_table)
    stops = _load_stops(args.stopwords)
    pairs = join_pairs(load_pair_records(args.pairs), table, stops)

    points = score_points(pairs, params)
    fits, reductions = scatter_fit_summary(points)
    out = Path(args.out)
    atomic_write_text(out, scatter_csv_text(points))
    summary_path = _derived_path(out, "_summary.json")
    _dump_json({
        "fits": {variant: {label: fitline_dict(line) for label, line in group.items()}
                 for variant, group in fits.items()},
        "gradient_reduction_pct": reductions,
        "n": len(points),
    }, summary_path)
    if args.plot:
        _plot_scatter(points, _derived_path(out, ".png"))
    print(f"wrote {out} and {summary_path} ({len(points)} pairs)")
    return EXIT_OK


def _require_pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise ValidationError("--plot requires matplotlib; install the "
                              "'plots' extra") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _plot_bins(report, path: Path) -> None:
    plt = _require_pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [row.bin_index + 1 for row in report.per_bin]
    ax.plot(xs, [row.human_same_rate for row in report.per_bin], marker="o",
            label="human")
    ax.plot(xs, [row.predicted_same_rate for row in report.per_bin], marker="s",
            label="predicted")
    ax.set_xlabel("frequency bin (low to high)")
    ax.set_ylabel("SAME rate")
    ax.set_ylim(-0.05, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def _plot_norms(stop_points, nonstop_points, fits, path: Path) -> None:
    plt = _require_pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, points, color in (("stop", stop_points, "tab:orange"),
                                 ("non-stop", nonstop_points, "tab:blue")):
        if not points:
            continue
        xs = [p.log_freq for p in points]
        ys = [p.norm for p in points]
        ax.scatter(xs, ys, s=8, alpha=0.5, color=color, label=label)
        line = fits["stop" if label == "stop" else "nonstop"]
        if line is not None:
            lo, hi = min(xs), max(xs)
            ax.plot([lo, hi], [line.intercept + line.slope * lo,
                               line.intercept + line.slope * hi], color=color)
    ax.set_xlabel("log frequency")
    ax.set_ylabel("l2 norm of mean embedding")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def _plot_scatter(points, path: Path) -> None:
    plt = _require_pyplot()
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, attr, title in ((axes[0], "score_plain", "plain"),
                            (axes[1], "score_discounted", "discounted")):
        for label, color in (("same", "tab:green"), ("different", "tab:red")):
            group = [p for p in points if p.gold.value == label]
            ax.scatter([p.log_freq for p in group],
                       [getattr(p, attr) for p in group],
                       s=8, alpha=0.5, color=color, label=label)
        ax.set_title(title)
        ax.set_xlabel("log frequency")
    axes[0].set_ylabel("similarity score")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def _add_common(sub, freq_table: bool = True) -> None:
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for any randomized step (default 0)")
    if freq_table:
        sub.add_argument("--freq-table", required=True,
                         help="frequency table TSV produced by the freq subcommand")
        sub.add_argument("--stopwords", default=None,
                         help="one stop word per line; defaults to the bundled list")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normdiscount",
        description="Frequency-discounted cosine similarity for contextualised "
                    "word embeddings: count frequencies, calibrate discount "
                    "parameters, evaluate same/different-sense classification, "
                    "and run norm and score analyses.")
    sub = parser.add_subparsers(dest="command", required=True)

    freq = sub.add_parser("freq", help="count token frequencies into a TSV table")
    freq.add_argument("corpus", nargs="+", help="UTF-8 text file(s)")
    freq.add_argument("--out", required=True, help="output table path")
    freq.add_argument("--seed", type=int, default=0,
                      help="accepted for uniformity; counting is deterministic")
    freq.set_defaults(handler=_cmd_freq)

    fit = sub.add_parser("fit", help="calibrate discount parameters on labelled pairs")
    fit.add_argument("--pairs", required=True, help="pair-embedding JSON-Lines file")
    _add_common(fit)
    fit.add_argument("--budget", type=int, default=500,
                     help="objective evaluations per run (default 500)")
    fit.add_argument("--repeats", type=int, default=5,
                     help="runs to average, seeds seed..seed+repeats-1 (default 5)")
    fit.add_argument("--out", required=True, help="output params JSON path")
    fit.add_argument("--report", default=None,
                     help="fit report path (default: <out stem>_report.json)")
    fit.set_defaults(handler=_cmd_fit)

    ev = sub.add_parser("eval", help="evaluate classification and write reports")
    ev.add_argument("--pairs", required=True, help="pair-embedding JSON-Lines file")
    _add_common(ev)
    ev.add_argument("--params", default=None,
                    help="params JSON; required in discounted mode, optional in "
                         "plain mode (plain defaults to theta=0.5)")
    ev.add_argument("--mode", choices=[PLAIN, DISCOUNTED], default=DISCOUNTED)
    ev.add_argument("--bins", type=int, default=10,
                    help="equal-count frequency bins (default 10)")
    ev.add_argument("--out", required=True, help="output directory")
    ev.add_argument("--plot", action="store_true", help="also render bins.png")
    ev.set_defaults(handler=_cmd_eval)

    norms = sub.add_parser("analyze-norms",
                           help="per-word embedding norm vs log frequency")
    norms.add_argument("--instances", required=True,
                       help="instance-embedding JSON-Lines file")
    _add_common(norms)
    norms.add_argument("--out", required=True, help="output CSV path")
    norms.add_argument("--plot", action="store_true", help="also render a PNG")
    norms.set_defaults(handler=_cmd_analyze_norms)

    scatter = sub.add_parser("analyze-scatter",
                             help="pair score vs log frequency, plain and discounted")
    scatter.add_argument("--pairs", required=True, help="pair-embedding JSON-Lines file")
    _add_common(scatter)
    scatter.add_argument("--params", default=None, help="params JSON (required)")
    scatter.add_argument("--out", required=True, help="output CSV path")
    scatter.add_argument("--plot", action="store_true", help="also render a PNG")
    scatter.set_defaults(handler=_cmd_analyze_scatter)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except IngestionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NormDiscountError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
