"""Lexicon- and style-based radicalisation-risk metrics for tweet corpora."""

from .corpus import Dataset, DatasetSummary, Tweet, UserRecord, load_csv, load_jsonl, summarize
from .errors import RadriskError
from .indicators import UserMetrics, compute_dataset_metrics, compute_user_metrics
from .lexicon import Indicator, KeywordSet, build_keyword_sets, default_keyword_sets
from .stats import (
    DensitySeries,
    QuantileSummary,
    RankSumResult,
    ecdf,
    kde_density,
    quantile_summary,
    rank_with_ties,
    wilcoxon_rank_sum,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DatasetSummary",
    "DensitySeries",
    "Indicator",
    "KeywordSet",
    "QuantileSummary",
    "RadriskError",
    "RankSumResult",
    "Tweet",
    "UserMetrics",
    "UserRecord",
    "build_keyword_sets",
    "compute_dataset_metrics",
    "compute_user_metrics",
    "default_keyword_sets",
    "ecdf",
    "kde_density",
    "load_csv",
    "load_jsonl",
    "quantile_summary",
    "rank_with_ties",
    "summarize",
    "wilcoxon_rank_sum",
    "__version__",
]
