"""Command line: extract pairs | instances.

Exit codes: 0 success, 1 some records failed (error log written),
2 I/O or model-load failure, 3 contract violation (malformed input,
invalid flags, empty input).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ExtractError, ModelLoadError
from .extract import ExtractionSpec, extract_instances, extract_pairs

EXIT_OK = 0
EXIT_RECORD_FAILURES = 1
EXIT_IO = 2
EXIT_CONTRACT = 3


def _spec_from_args(args) -> ExtractionSpec:
    return ExtractionSpec(
        model_id=args.model,
        input_path=Path(args.infile),
        output_path=Path(args.out),
        layer=args.layer,
        pooling=args.pooling,
        batch_size=args.batch_size,
        gold_path=Path(args.gold) if getattr(args, "gold", None) else None,
        errors_path=Path(args.errors) if args.errors else None,
    )


def _add_common(sub) -> None:
    sub.add_argument("--model", required=True,
                     help="model identifier or local model directory")
    sub.add_argument("--layer", default="last",
                     help="'last' or a hidden-state index; 0 is the embedding "
                          "output (default last)")
    sub.add_argument("--in", dest="infile", required=True, help="input TSV file")
    sub.add_argument("--out", required=True, help="output JSON-Lines path")
    sub.add_argument("--pooling", choices=["mean", "first"], default="mean",
                     help="multi-subword pooling policy (default mean)")
    sub.add_argument("--batch-size", type=int, default=8,
                     help="sentences per forward pass (default 8)")
    sub.add_argument("--errors", default=None,
                     help="record-level error log (default <out stem>_errors.log)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extract",
        description="Extract contextualised target-word embeddings from a "
                    "masked language model into the JSON-Lines pair and "
                    "instance formats.")
    sub = parser.add_subparsers(dest="command", required=True)

    pairs = sub.add_parser("pairs",
                           help="WiC-style TSV to pair-embedding JSON-Lines")
    _add_common(pairs)
    pairs.add_argument("--gold", default=None,
                       help="gold label file, one T or F per data line")
    pairs.set_defaults(runner=extract_pairs)

    instances = sub.add_parser(
        "instances",
        help="sentence-list TSV (word, index, sentence) to instance-embedding "
             "JSON-Lines")
    _add_common(instances)
    instances.set_defaults(runner=extract_instances)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.runner(_spec_from_args(args))
    except ModelLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ExtractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"wrote {result.written} records to {result.output_path} "
          f"(dim={result.dim})")
    if result.failures:
        print(f"{len(result.failures)} of {result.written + len(result.failures)} "
              f"records failed; see {result.errors_path}", file=sys.stderr)
        return EXIT_RECORD_FAILURES
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
