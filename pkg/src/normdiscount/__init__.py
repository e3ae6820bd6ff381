"""Frequency-aware discounted cosine similarity for contextualised embeddings.

High-frequency words' contextualised embeddings grow longer l2 norms,
which drags their cosine similarities down and biases same/different-
sense judgements against frequent words. This package counters that by
discounting each vector's norm with a factor that is linear in the log
corpus frequency of the word, with separate slopes and offsets for stop
words and content words, and calibrates the threshold and discount
parameters on labelled word-in-context pairs.

Layout: `freqstats` counts corpora and serves log frequencies,
`embeddings` stores per-instance vectors and their per-word means,
`simcore` holds the similarity and discount arithmetic, `calibrate`
fits parameters with a seeded derivative-free search, `stats` provides
correlation/regression/binning, `evalharness` runs evaluations and
analyses, `estimator` wraps it all in a scikit-learn interface, and
`cli` exposes the pipeline as subcommands.
"""

from .calibrate import (LabeledPair, SearchBox, average_params, fit, fit_averaged,
                        fit_runs, objective)
from .embeddings import (EmbeddingStore, InstanceEmbedding, MeanSiblingEmbedding,
                         NormFreqPoint, SiblingSet, l2_norm, load_instances,
                         mean_sibling, norm_freq_points)
from .errors import (DegenerateInputError, DimensionMismatchError, IngestionError,
                     NormDiscountError, ParseError, UndefinedSimilarityError,
                     ValidationError)
from .estimator import DiscountedCosineClassifier
from .evalharness import (BinRow, EvalReport, PairRecord, ScatterPoint, WicInstance,
                          bin_analysis, evaluate, gradient_reduction, join_pairs,
                          load_pair_records, parse_wic, scatter_fit_summary,
                          score_points, write_report_files)
from .freqstats import (FrequencyTable, Histogram, LogFrequency, StopWordList,
                        count_corpus, default_stop_words, frequency_histogram,
                        is_stop, load_table, log_frequency, merge_tables,
                        save_table, tokenize)
from .simcore import (ALPHA_FLOOR, DiscountParams, Label, SimilarityJudgement,
                      alpha, cosine, discounted_cosine, judge)
from .stats import EqualCountBins, FitLine, equal_count_bins, ols_fit, pearson

__version__ = "0.1.0"

__all__ = [
    "ALPHA_FLOOR",
    "BinRow",
    "DegenerateInputError",
    "DimensionMismatchError",
    "DiscountParams",
    "DiscountedCosineClassifier",
    "EmbeddingStore",
    "EqualCountBins",
    "EvalReport",
    "FitLine",
    "FrequencyTable",
    "Histogram",
    "IngestionError",
    "InstanceEmbedding",
    "Label",
    "LabeledPair",
    "LogFrequency",
    "MeanSiblingEmbedding",
    "NormDiscountError",
    "NormFreqPoint",
    "PairRecord",
    "ParseError",
    "ScatterPoint",
    "SearchBox",
    "SiblingSet",
    "SimilarityJudgement",
    "StopWordList",
    "UndefinedSimilarityError",
    "ValidationError",
    "WicInstance",
    "alpha",
    "average_params",
    "bin_analysis",
    "cosine",
    "count_corpus",
    "default_stop_words",
    "discounted_cosine",
    "equal_count_bins",
    "evaluate",
    "fit",
    "fit_averaged",
    "fit_runs",
    "frequency_histogram",
    "gradient_reduction",
    "is_stop",
    "join_pairs",
    "judge",
    "l2_norm",
    "load_instances",
    "load_pair_records",
    "load_table",
    "log_frequency",
    "mean_sibling",
    "merge_tables",
    "norm_freq_points",
    "objective",
    "ols_fit",
    "parse_wic",
    "pearson",
    "save_table",
    "scatter_fit_summary",
    "score_points",
    "tokenize",
    "write_report_files",
]
