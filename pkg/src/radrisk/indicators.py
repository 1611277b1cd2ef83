"""Per-user metric vector for the five risk indicators.

Keyword ratios are computed in "containment" mode by default: a tweet
counts at most once, so every ratio stays in [0, 1].  "occurrence" mode
divides the total number of keyword matches by the tweet count instead
and is unbounded above.  All measurements run on cleaned text.
"""

from __future__ import annotations

import csv
import logging
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TextIO

from . import textprep
from .corpus import Dataset, UserRecord
from .errors import RadriskError
from .lexicon import Indicator, KeywordSet

logger = logging.getLogger(__name__)

MODES = ("containment", "occurrence")

# CSV column order for the metrics table.
METRIC_COLUMNS = (
    "swearing",
    "negative",
    "caps",
    "ellipsis",
    "median_len",
    "discrimination",
    "anti_western",
    "pro_jihad",
)

COLUMN_TO_FIELD = {
    "swearing": "swearing_ratio",
    "negative": "negative_ratio",
    "caps": "caps_ratio",
    "ellipsis": "ellipsis_ratio",
    "median_len": "median_tweet_length",
    "discrimination": "discrimination_ratio",
    "anti_western": "anti_western_ratio",
    "pro_jihad": "pro_jihadism_ratio",
}

_KEYWORD_FIELDS = {
    Indicator.I1_SWEAR: "swearing_ratio",
    Indicator.I1_NEGATIVE: "negative_ratio",
    Indicator.I3_DISCRIMINATION: "discrimination_ratio",
    Indicator.I4_ANTI_WESTERN: "anti_western_ratio",
    Indicator.I5_PRO_JIHAD: "pro_jihadism_ratio",
}


class UndefinedMetricError(RadriskError):
    pass


@dataclass(frozen=True)
class UserMetrics:
    user_id: str
    n_tweets: int
    swearing_ratio: float
    negative_ratio: float
    caps_ratio: float
    ellipsis_ratio: float
    median_tweet_length: float
    discrimination_ratio: float
    anti_western_ratio: float
    pro_jihadism_ratio: float
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class _PreparedTweet:
    cleaned: str
    sentences: tuple[textprep.Sentence, ...]
    token_stems: tuple[str, ...]


def _prepare(user: UserRecord) -> list[_PreparedTweet]:
    if not user.tweets:
        raise UndefinedMetricError(
            f"user {user.user_id!r} has no tweets; ratios are undefined"
        )
    prepared = []
    for tweet in user.tweets:
        cleaned = textprep.clean_message(tweet.text)
        sentences = tuple(textprep.split_sentences(cleaned))
        stems = tuple(
            textprep.stem_token(tok) for tok in textprep.tokenize_words(cleaned)
        )
        prepared.append(_PreparedTweet(cleaned, sentences, stems))
    return prepared


def _keyword_ratio(prepared: Sequence[_PreparedTweet], ks: KeywordSet, mode: str) -> float:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    stems = ks.expanded_stems
    if mode == "containment":
        hits = sum(1 for p in prepared if any(s in stems for s in p.token_stems))
    else:
        hits = sum(sum(1 for s in p.token_stems if s in stems) for p in prepared)
    return hits / len(prepared)


def keyword_tweet_ratio(user: UserRecord, ks: KeywordSet, mode: str = "containment") -> float:
    """Share of the user's tweets containing a keyword stem (containment),
    or total matches per tweet (occurrence)."""
    return _keyword_ratio(_prepare(user), ks, mode)


def ellipsis_ratio(user: UserRecord) -> float:
    """Share of tweets in which some sentence contains an ellipsis."""
    prepared = _prepare(user)
    hits = sum(
        1 for p in prepared if any(textprep.detect_ellipsis(s) for s in p.sentences)
    )
    return hits / len(prepared)


def median_length(user: UserRecord) -> float:
    """Median character count of the cleaned tweets."""
    prepared = _prepare(user)
    return float(statistics.median(len(p.cleaned) for p in prepared))


def caps_ratio(user: UserRecord) -> float:
    """Share of fully-capitalized sentences across all the user's tweets."""
    prepared = _prepare(user)
    sentences = [s for p in prepared for s in p.sentences]
    if not sentences:
        logger.warning(
            "user %s has no sentences after cleaning; caps ratio set to 0",
            user.user_id,
        )
        return 0.0
    caps = sum(1 for s in sentences if textprep.is_fully_capitalized(s))
    return caps / len(sentences)


def compute_user_metrics(
    user: UserRecord,
    sets: Mapping[Indicator, KeywordSet],
    mode: str = "containment",
) -> UserMetrics:
    """All eight metrics for one user, computed over the cleaned pipeline."""
    missing = [ind for ind in Indicator if ind not in sets]
    if missing:
        raise ValueError(f"missing keyword sets for {missing}")
    prepared = _prepare(user)

    flags: list[str] = []
    sentences = [s for p in prepared for s in p.sentences]
    if sentences:
        caps = sum(1 for s in sentences if textprep.is_fully_capitalized(s)) / len(sentences)
    else:
        caps = 0.0
        flags.append("no_sentences")

    keyword_ratios = {
        ind: _keyword_ratio(prepared, sets[ind], mode) for ind in Indicator
    }
    ellipsis = (
        sum(1 for p in prepared if any(textprep.detect_ellipsis(s) for s in p.sentences))
        / len(prepared)
    )
    median_len = float(statistics.median(len(p.cleaned) for p in prepared))

    return UserMetrics(
        user_id=user.user_id,
        n_tweets=len(prepared),
        swearing_ratio=keyword_ratios[Indicator.I1_SWEAR],
        negative_ratio=keyword_ratios[Indicator.I1_NEGATIVE],
        caps_ratio=caps,
        ellipsis_ratio=ellipsis,
        median_tweet_length=median_len,
        discrimination_ratio=keyword_ratios[Indicator.I3_DISCRIMINATION],
        anti_western_ratio=keyword_ratios[Indicator.I4_ANTI_WESTERN],
        pro_jihadism_ratio=keyword_ratios[Indicator.I5_PRO_JIHAD],
        flags=tuple(flags),
    )


def compute_dataset_metrics(
    ds: Dataset,
    sets: Mapping[Indicator, KeywordSet],
    mode: str = "containment",
) -> list[UserMetrics]:
    """Metrics for every user with at least one tweet, ordered by user_id.

    Zero-tweet users are excluded (their ratios are undefined) and logged.
    """
    rows = []
    for user in sorted(ds.users, key=lambda u: u.user_id):
        if not user.tweets:
            logger.info("excluding zero-tweet user %s from metrics", user.user_id)
            continue
        rows.append(compute_user_metrics(user, sets, mode))
    return rows


def write_metrics_csv(rows: Iterable[UserMetrics], fh: TextIO) -> None:
    """Fixed-layout metrics table: 6-decimal ratios, 1-decimal median."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("user_id", "n_tweets") + METRIC_COLUMNS)
    for m in rows:
        writer.writerow(
            [m.user_id, m.n_tweets]
            + [
                f"{getattr(m, COLUMN_TO_FIELD[col]):.1f}"
                if col == "median_len"
                else f"{getattr(m, COLUMN_TO_FIELD[col]):.6f}"
                for col in METRIC_COLUMNS
            ]
        )


def read_metrics_csv(path: str | Path) -> dict[str, list]:
    """Read a metrics table back into per-column lists."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = ("user_id", "n_tweets") + METRIC_COLUMNS
        if reader.fieldnames is None or tuple(reader.fieldnames) != expected:
            raise RadriskError(f"{path}: not a metrics table (header mismatch)")
        columns: dict[str, list] = {c: [] for c in expected}
        for row in reader:
            columns["user_id"].append(row["user_id"])
            columns["n_tweets"].append(int(row["n_tweets"]))
            for col in METRIC_COLUMNS:
                columns[col].append(float(row[col]))
    return columns
