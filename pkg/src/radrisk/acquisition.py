"""Account-dump parsing and rate-limited timeline fetching.

The timeline source is a contract (paged request -> tweets + next-page
token) with two implementations: a replay source that serves a recorded
transcript for tests and offline use, and a live HTTP source.  Credentials
for the live source come from the environment, never from config files.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

from .corpus import Tweet, UserRecord
from .errors import RadriskError

logger = logging.getLogger(__name__)

PLATFORM_TIMELINE_CAP = 3200  # hard upper bound on retrievable tweets per user

_HANDLE_RE = re.compile(r"@?([A-Za-z0-9_]{1,15})$")

BEARER_TOKEN_ENV = "RADRISK_BEARER_TOKEN"


class EmptyDumpError(RadriskError):
    pass


class UserUnavailableError(RadriskError):
    pass


class RateLimitedError(RadriskError):
    pass


class ReplayMismatchError(RadriskError):
    pass


@dataclass(frozen=True)
class AccountDump:
    handles: tuple[str, ...]


@dataclass(frozen=True)
class FetchPolicy:
    max_tweets_per_user: int = PLATFORM_TIMELINE_CAP
    requests_per_window: int = 900
    window_seconds: float = 900.0
    retry_backoff_seconds: float = 60.0
    max_retries: int = 3

    def __post_init__(self):
        if not 0 < self.max_tweets_per_user <= PLATFORM_TIMELINE_CAP:
            raise ValueError(
                f"max_tweets_per_user must be in 1..{PLATFORM_TIMELINE_CAP}"
            )
        if self.requests_per_window <= 0 or self.window_seconds <= 0:
            raise ValueError("rate limit parameters must be positive")
        if self.retry_backoff_seconds < 0 or self.max_retries < 0:
            raise ValueError("retry parameters must be non-negative")


@dataclass(frozen=True)
class TimelinePage:
    tweets: tuple[Tweet, ...]
    next_token: str | None = None


class TimelineSource(Protocol):
    def fetch_page(
        self, handle: str, max_count: int, page_token: str | None
    ) -> TimelinePage: ...


def parse_account_dump(text: str) -> AccountDump:
    """Extract screen names from a dump file.

    Blank lines and ``#`` comments are ignored; tokens may be bare names,
    ``@``-prefixed, or profile URLs.  Duplicates are dropped keeping the
    first occurrence (handles compare case-insensitively).
    """
    handles: list[str] = []
    seen: set[str] = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        for token in re.split(r"[\s,;]+", line):
            token = token.strip().rstrip(".,;:!?)")
            if not token:
                continue
            if "/" in token:
                token = token.rstrip("/").rsplit("/", 1)[-1]
            m = _HANDLE_RE.match(token)
            if m is None:
                continue
            handle = m.group(1)
            key = handle.lower()
            if key not in seen:
                seen.add(key)
                handles.append(handle)
    if not handles:
        raise EmptyDumpError("no handles could be extracted from the dump")
    return AccountDump(handles=tuple(handles))


class RateLimiter:
    """Central sliding-window limiter shared by all fetch workers.

    Guarantees at most ``requests_per_window`` acquisitions within any
    half-open window of ``window_seconds``.  Clock and sleep are injectable
    so tests can run on a fake timeline.
    """

    def __init__(
        self,
        requests_per_window: int,
        window_seconds: float,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if requests_per_window <= 0 or window_seconds <= 0:
            raise ValueError("rate limit parameters must be positive")
        self._limit = requests_per_window
        self._window = window_seconds
        self._clock = clock
        self._sleep = sleep
        self._times: deque[float] = deque()
        self._lock = threading.Lock()

    @classmethod
    def for_policy(cls, policy: FetchPolicy, **kwargs) -> "RateLimiter":
        return cls(policy.requests_per_window, policy.window_seconds, **kwargs)

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                while self._times and now - self._times[0] >= self._window:
                    self._times.popleft()
                if len(self._times) < self._limit:
                    self._times.append(now)
                    return
                wait = self._times[0] + self._window - now
            self._sleep(max(wait, 1e-9))


class ReplaySource:
    """Serves a recorded transcript of {request, response} pairs (JSONL).

    Requests must arrive in the recorded order with matching handle and
    page token; a recorded response may carry an ``error`` of
    ``rate_limited`` or ``not_found``/``suspended`` instead of tweets.
    """

    def __init__(self, entries):
        self._entries = deque(entries)

    @classmethod
    def from_path(cls, path: str | Path) -> "ReplaySource":
        entries = []
        with Path(path).open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    entries.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise ReplayMismatchError(
                        f"{path}: unparsable transcript line {lineno}: {exc}"
                    ) from exc
        return cls(entries)

    def fetch_page(
        self, handle: str, max_count: int, page_token: str | None
    ) -> TimelinePage:
        if not self._entries:
            raise ReplayMismatchError(
                f"transcript exhausted; unexpected request for {handle!r}"
            )
        entry = self._entries.popleft()
        request = entry.get("request", {})
        expected = (request.get("handle"), request.get("page_token"))
        if expected != (handle, page_token):
            raise ReplayMismatchError(
                f"request mismatch: transcript expected {expected}, "
                f"got ({handle!r}, {page_token!r})"
            )
        response = entry.get("response", {})
        error = response.get("error")
        if error == "rate_limited":
            raise RateLimitedError(f"rate limited while fetching {handle!r}")
        if error in ("not_found", "suspended", "unavailable"):
            raise UserUnavailableError(f"user {handle!r} unavailable: {error}")
        if error:
            raise RadriskError(f"transcript error for {handle!r}: {error}")
        tweets = tuple(
            Tweet(
                tweet_id=str(t.get("tweet_id", f"{handle}-{i}")),
                user_id=str(t.get("user_id", handle)),
                text=t["text"],
                timestamp=t.get("timestamp"),
            )
            for i, t in enumerate(response.get("tweets", ()))
        )
        return TimelinePage(tweets=tweets, next_token=response.get("next_token"))


class HttpTimelineSource:
    """Live paginated user-timeline endpoint with bearer-token auth."""

    def __init__(
        self,
        base_url: str,
        bearer_token: str | None = None,
        timeout: float = 30.0,
    ):
        self._base = base_url.rstrip("/")
        self._token = bearer_token or os.environ.get(BEARER_TOKEN_ENV)
        self._timeout = timeout

    def fetch_page(
        self, handle: str, max_count: int, page_token: str | None
    ) -> TimelinePage:
        params = {"max_results": str(max_count)}
        if page_token:
            params["pagination_token"] = page_token
        url = (
            f"{self._base}/users/{urllib.parse.quote(handle)}/tweets?"
            + urllib.parse.urlencode(params)
        )
        headers = {}
        if self._token:
            headers["Authorization"] = f"Bearer {self._token}"
        request = urllib.request.Request(url, headers=headers)
        try:
            with urllib.request.urlopen(request, timeout=self._timeout) as resp:
                payload = json.load(resp)
        except urllib.error.HTTPError as exc:
            if exc.code == 429:
                raise RateLimitedError(f"rate limited while fetching {handle!r}") from exc
            if exc.code in (403, 404):
                raise UserUnavailableError(f"user {handle!r} unavailable ({exc.code})") from exc
            raise RadriskError(f"timeline request failed ({exc.code}): {url}") from exc
        data = payload.get("data") or []
        meta = payload.get("meta") or {}
        tweets = tuple(
            Tweet(
                tweet_id=str(t.get("id", f"{handle}-{i}")),
                user_id=handle,
                text=t.get("text", ""),
                timestamp=t.get("created_at"),
            )
            for i, t in enumerate(data)
        )
        return TimelinePage(tweets=tweets, next_token=meta.get("next_token"))


def fetch_user_timeline(
    source: TimelineSource,
    handle: str,
    policy: FetchPolicy,
    limiter: RateLimiter | None = None,
    page_size: int = 200,
    sleep: Callable[[float], None] = time.sleep,
) -> UserRecord:
    """Fetch up to the policy cap of a user's most recent tweets.

    Pagination is handled internally; rate-limit responses wait and retry
    up to ``policy.max_retries`` times, after which the partial result is
    returned flagged ``partial``.  Unavailable accounts come back empty,
    flagged ``unavailable``.
    """
    if not handle:
        raise ValueError("handle must be non-empty")
    cap = policy.max_tweets_per_user
    collected: list[Tweet] = []
    page_token: str | None = None
    retries = 0
    while len(collected) < cap:
        if limiter is not None:
            limiter.acquire()
        want = min(page_size, cap - len(collected))
        try:
            page = source.fetch_page(handle, want, page_token)
        except RateLimitedError:
            if retries >= policy.max_retries:
                logger.warning(
                    "giving up on %s after %d rate-limit retries (partial result)",
                    handle,
                    retries,
                )
                return UserRecord(
                    user_id=handle,
                    handle=handle,
                    tweets=tuple(collected),
                    flags=("partial",),
                )
            retries += 1
            sleep(policy.retry_backoff_seconds)
            continue
        except UserUnavailableError:
            logger.warning("user %s unavailable", handle)
            return UserRecord(
                user_id=handle, handle=handle, tweets=(), flags=("unavailable",)
            )
        for tweet in page.tweets:
            if len(collected) >= cap:
                break
            collected.append(
                tweet if tweet.user_id == handle else Tweet(
                    tweet_id=tweet.tweet_id,
                    user_id=handle,
                    text=tweet.text,
                    timestamp=tweet.timestamp,
                )
            )
        if not page.next_token or not page.tweets:
            break
        page_token = page.next_token
    return UserRecord(user_id=handle, handle=handle, tweets=tuple(collected))


def fetch_many(
    source: TimelineSource,
    dump: AccountDump,
    policy: FetchPolicy,
    limiter: RateLimiter | None = None,
    page_size: int = 200,
    sleep: Callable[[float], None] = time.sleep,
) -> tuple[list[UserRecord], dict]:
    """Fetch every handle in a dump; returns records plus an audit trail.

    Unavailable and partially-fetched accounts are recorded in the audit,
    never silently dropped.
    """
    if limiter is None:
        limiter = RateLimiter.for_policy(policy, sleep=sleep)
    records: list[UserRecord] = []
    audit = {"fetched": [], "unavailable": [], "partial": []}
    for handle in dump.handles:
        record = fetch_user_timeline(
            source, handle, policy, limiter=limiter, page_size=page_size, sleep=sleep
        )
        records.append(record)
        if "unavailable" in record.flags:
            audit["unavailable"].append(handle)
        elif "partial" in record.flags:
            audit["partial"].append(handle)
        else:
            audit["fetched"].append(handle)
    return records, audit
