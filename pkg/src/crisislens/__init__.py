"""crisislens: batch analytics over archived crisis-event tweet corpora.

Subpackages and modules map one-to-one onto the pipeline stages: corpus
ingestion, text preprocessing, the shared learning/statistics core, the
humanitarian-category classifier, sentiment scoring, per-day topic models,
entity extraction, the image pipeline, and report emission, all orchestrated
by the ``crisislens`` CLI.
"""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    CorpusStats,
    EventWindow,
    TweetRecord,
    bucket_by_day,
    corpus_stats,
    load_corpus,
    normalize_for_dedup,
)
from .series import DailySeries
from .textprep import (
    BowVector,
    PrepConfig,
    Vocabulary,
    build_vocabulary,
    preprocess,
    vectorize,
)

__all__ = [
    "__version__",
    "Corpus",
    "CorpusStats",
    "EventWindow",
    "TweetRecord",
    "bucket_by_day",
    "corpus_stats",
    "load_corpus",
    "normalize_for_dedup",
    "DailySeries",
    "BowVector",
    "PrepConfig",
    "Vocabulary",
    "build_vocabulary",
    "preprocess",
    "vectorize",
]
