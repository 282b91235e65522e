"""Spectral method-of-moments multi-label text model.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from ._smom import (  # noqa: F401
    DataError,
    GroundTruth,
    LabelSet,
    MetricReport,
    MomentScales,
    NumericError,
    ParseError,
    RecoveryError,
    SparseCorpus,
    SpectralModel,
    TrainResult,
    align_and_error,
    corpus_stats,
    doc_auc,
    generate_corpus,
    load_corpus,
    macro_auc,
    parse_corpus,
    posterior_topics,
    predict_labels,
    sample_params,
    serialize_corpus,
    theorem_bounds,
    train,
)

__all__ = [
    "DataError",
    "GroundTruth",
    "LabelSet",
    "MetricReport",
    "MomentScales",
    "NumericError",
    "ParseError",
    "RecoveryError",
    "SparseCorpus",
    "SpectralModel",
    "TrainResult",
    "align_and_error",
    "corpus_stats",
    "doc_auc",
    "generate_corpus",
    "load_corpus",
    "macro_auc",
    "parse_corpus",
    "posterior_topics",
    "predict_labels",
    "sample_params",
    "serialize_corpus",
    "theorem_bounds",
    "train",
]
