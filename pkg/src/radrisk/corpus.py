"""In-memory tweet corpus model, CSV/JSONL ingestion, summary statistics.

Datasets are immutable after ingestion (tuples all the way down) and safe
to share across parallel readers.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import RadriskError

logger = logging.getLogger(__name__)

DEFAULT_CSV_SCHEMA = {"user_id": "username", "text": "tweets"}

ON_ERROR_MODES = ("abort", "skip")


class CorpusFormatError(RadriskError):
    pass


@dataclass(frozen=True)
class Tweet:
    tweet_id: str
    user_id: str
    text: str
    timestamp: str | None = None

    def __post_init__(self):
        if not self.tweet_id:
            raise ValueError("tweet_id must be non-empty")
        if not self.user_id:
            raise ValueError("user_id must be non-empty")


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    handle: str | None = None
    tweets: tuple[Tweet, ...] = ()
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        for t in self.tweets:
            if t.user_id != self.user_id:
                raise ValueError(
                    f"tweet {t.tweet_id} carries user_id {t.user_id!r}, "
                    f"expected {self.user_id!r}"
                )


@dataclass(frozen=True)
class Dataset:
    label: str
    users: tuple[UserRecord, ...] = ()

    def __post_init__(self):
        ids = [u.user_id for u in self.users]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate user_ids in dataset {self.label!r}")

    @property
    def n_tweets(self) -> int:
        return sum(len(u.tweets) for u in self.users)


@dataclass(frozen=True)
class DatasetSummary:
    n_users: int
    n_tweets: int
    avg_tweets_per_user: float
    stdev_tweets_per_user: float
    empty: bool = False
    stdev_convention: str = "sample"


class _Grouper:
    """Accumulates tweets per user in first-seen order."""

    def __init__(self, dedupe: bool):
        self._dedupe = dedupe
        self._by_user: dict[str, list[Tweet]] = {}
        self._seen_ids: dict[str, set[str]] = {}
        self.n_duplicates = 0

    def add(self, tweet: Tweet) -> None:
        bucket = self._by_user.setdefault(tweet.user_id, [])
        if self._dedupe:
            seen = self._seen_ids.setdefault(tweet.user_id, set())
            if tweet.tweet_id in seen:
                self.n_duplicates += 1
                return
            seen.add(tweet.tweet_id)
        bucket.append(tweet)

    def build(self, label: str) -> Dataset:
        users = tuple(
            UserRecord(user_id=uid, handle=uid, tweets=tuple(tweets))
            for uid, tweets in self._by_user.items()
        )
        if self.n_duplicates:
            logger.info("dropped %d duplicate tweet ids", self.n_duplicates)
        return Dataset(label=label, users=users)


def _record_error(message: str, on_error: str) -> None:
    if on_error not in ON_ERROR_MODES:
        raise ValueError(f"on_error must be one of {ON_ERROR_MODES}")
    if on_error == "abort":
        raise CorpusFormatError(message)
    logger.warning("skipping record: %s", message)


def load_csv(
    path: str | Path,
    schema: dict[str, str] | None = None,
    on_error: str = "abort",
    label: str | None = None,
    dedupe: bool = False,
) -> Dataset:
    """Load a tweet dump from an RFC-4180 CSV file, grouping by user.

    ``schema`` maps the logical fields ``user_id`` and ``text`` (and
    optionally ``tweet_id`` / ``timestamp``) to column names; the default
    matches dumps with ``username`` / ``tweets`` columns.  Malformed rows
    raise (``on_error="abort"``) or are skipped with a warning.
    """
    path = Path(path)
    schema = dict(DEFAULT_CSV_SCHEMA if schema is None else schema)
    for required in ("user_id", "text"):
        if not schema.get(required):
            raise CorpusFormatError(f"schema must map the {required!r} column")
    grouper = _Grouper(dedupe)
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return grouper.build(label or path.stem)
        mapped = [schema[k] for k in ("user_id", "text", "tweet_id", "timestamp") if schema.get(k)]
        missing = [c for c in mapped if c not in reader.fieldnames]
        if missing:
            raise CorpusFormatError(f"{path}: missing mapped column(s) {missing}")
        for row in reader:
            user = row.get(schema["user_id"])
            text = row.get(schema["text"])
            if not user or text is None:
                _record_error(f"{path}: malformed row at line {reader.line_num}", on_error)
                continue
            tweet_id = row.get(schema["tweet_id"]) if schema.get("tweet_id") else None
            timestamp = row.get(schema["timestamp"]) if schema.get("timestamp") else None
            grouper.add(
                Tweet(
                    tweet_id=tweet_id or f"r{reader.line_num}",
                    user_id=user,
                    text=text,
                    timestamp=timestamp or None,
                )
            )
    return grouper.build(label or path.stem)


def load_jsonl(
    path: str | Path,
    on_error: str = "abort",
    label: str | None = None,
    dedupe: bool = False,
) -> Dataset:
    """Load a corpus from JSONL: one object per line with user_id and text."""
    path = Path(path)
    grouper = _Grouper(dedupe)
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                _record_error(f"{path}: unparsable line {lineno}: {exc}", on_error)
                continue
            if not isinstance(obj, dict):
                _record_error(f"{path}: line {lineno} is not an object", on_error)
                continue
            user = obj.get("user_id")
            text = obj.get("text")
            if user is None or not isinstance(text, str):
                _record_error(
                    f"{path}: line {lineno} missing user_id/text", on_error
                )
                continue
            tweet_id = obj.get("tweet_id")
            timestamp = obj.get("timestamp")
            grouper.add(
                Tweet(
                    tweet_id=str(tweet_id) if tweet_id is not None else f"L{lineno}",
                    user_id=str(user),
                    text=text,
                    timestamp=str(timestamp) if timestamp is not None else None,
                )
            )
    return grouper.build(label or path.stem)


def load_path(
    path: str | Path,
    fmt: str | None = None,
    **kwargs,
) -> Dataset:
    """Dispatch to the CSV or JSONL loader based on the file suffix."""
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "jsonl")
    if fmt == "csv":
        return load_csv(path, **kwargs)
    if fmt == "jsonl":
        kwargs.pop("schema", None)
        return load_jsonl(path, **kwargs)
    raise CorpusFormatError(f"unknown corpus format {fmt!r}")


def summarize(ds: Dataset, stdev_mode: str = "sample") -> DatasetSummary:
    """Per-dataset counts plus mean/stdev of the per-user tweet counts."""
    if stdev_mode not in ("sample", "population"):
        raise ValueError("stdev_mode must be 'sample' or 'population'")
    counts = [len(u.tweets) for u in ds.users]
    n_users = len(counts)
    n_tweets = sum(counts)
    if n_users == 0:
        return DatasetSummary(0, 0, 0.0, 0.0, empty=True, stdev_convention=stdev_mode)
    avg = n_tweets / n_users
    ddof = 1 if stdev_mode == "sample" else 0
    if n_users - ddof <= 0:
        stdev = 0.0
    else:
        stdev = math.sqrt(sum((c - avg) ** 2 for c in counts) / (n_users - ddof))
    return DatasetSummary(
        n_users=n_users,
        n_tweets=n_tweets,
        avg_tweets_per_user=avg,
        stdev_tweets_per_user=stdev,
        stdev_convention=stdev_mode,
    )
