import json

import pytest
from hypothesis import given, strategies as st

from radrisk.acquisition import (
    AccountDump,
    EmptyDumpError,
    FetchPolicy,
    RateLimiter,
    ReplayMismatchError,
    ReplaySource,
    TimelinePage,
    fetch_many,
    fetch_user_timeline,
    parse_account_dump,
)
from radrisk.corpus import Tweet


class FakeClock:
    def __init__(self):
        self.t = 0.0
        self.sleeps = []

    def now(self):
        return self.t

    def sleep(self, seconds):
        self.sleeps.append(seconds)
        self.t += seconds


def transcript_entry(handle, page_token, tweets=None, next_token=None, error=None):
    response = {}
    if error:
        response["error"] = error
    else:
        response["tweets"] = tweets or []
        if next_token:
            response["next_token"] = next_token
    return {
        "request": {"handle": handle, "page_token": page_token},
        "response": response,
    }


def tweet_dicts(n, start=0):
    return [{"tweet_id": f"t{start + i}", "text": f"tweet {start + i}"} for i in range(n)]


class TestParseAccountDump:
    def test_strip_and_dedupe(self):
        assert parse_account_dump("@alice\nbob\n\n@alice").handles == ("alice", "bob")

    def test_comment_lines_skipped(self):
        assert parse_account_dump("# header\ncarol").handles == ("carol",)

    def test_mixed_format_fixture(self):
        lines = []
        for i in range(24):
            lines.append(f"@user{i:02d}")
        for i in range(24, 40):
            lines.append(f"user{i:02d}")
        for i in range(40, 48):
            lines.append(f"https://twitter.com/user{i:02d}")
        lines.append("@user03")          # duplicate, @-form
        lines.append("USER27")           # duplicate, case-insensitive
        text = "\n".join(lines)
        assert len(text.splitlines()) == 50
        dump = parse_account_dump(text)
        assert len(dump.handles) == 48
        assert dump.handles[3] == "user03"

    def test_empty_dump_rejected(self):
        with pytest.raises(EmptyDumpError):
            parse_account_dump("# nothing here\n\n")

    def test_idempotent_on_own_output(self):
        dump = parse_account_dump("@a\nb, c; @d\nhttps://twitter.com/e")
        again = parse_account_dump("\n".join(dump.handles))
        assert again.handles == dump.handles

    @given(st.lists(st.from_regex(r"[A-Za-z0-9_]{1,15}", fullmatch=True), min_size=1, max_size=30))
    def test_idempotence_property(self, handles):
        dump = parse_account_dump("\n".join(handles))
        assert parse_account_dump("\n".join(dump.handles)).handles == dump.handles


class TestFetchPolicy:
    def test_cap_enforced(self):
        with pytest.raises(ValueError):
            FetchPolicy(max_tweets_per_user=5000)

    def test_positive_counts(self):
        with pytest.raises(ValueError):
            FetchPolicy(requests_per_window=0)


class TestReplaySource:
    def test_serves_in_order(self):
        source = ReplaySource([
            transcript_entry("alice", None, tweet_dicts(2), next_token="p2"),
            transcript_entry("alice", "p2", tweet_dicts(1, start=2)),
        ])
        page = source.fetch_page("alice", 200, None)
        assert [t.text for t in page.tweets] == ["tweet 0", "tweet 1"]
        page = source.fetch_page("alice", 200, "p2")
        assert page.next_token is None

    def test_mismatch_raises(self):
        source = ReplaySource([transcript_entry("alice", None, tweet_dicts(1))])
        with pytest.raises(ReplayMismatchError):
            source.fetch_page("bob", 200, None)

    def test_exhausted_raises(self):
        source = ReplaySource([])
        with pytest.raises(ReplayMismatchError):
            source.fetch_page("alice", 200, None)

    def test_from_path_round_trip(self, tmp_path):
        path = tmp_path / "transcript.jsonl"
        entries = [transcript_entry("a", None, tweet_dicts(3))]
        path.write_text("\n".join(json.dumps(e) for e in entries))
        source = ReplaySource.from_path(path)
        assert len(source.fetch_page("a", 200, None).tweets) == 3


class PagedFake:
    """In-memory timeline with page-size honoring and scripted failures."""

    def __init__(self, n_tweets, fail_first_with=None):
        self._tweets = [
            Tweet(tweet_id=f"t{i}", user_id="h", text=f"tweet {i}")
            for i in range(n_tweets)
        ]
        self._fail = fail_first_with
        self.requests = 0

    def fetch_page(self, handle, max_count, page_token):
        self.requests += 1
        if self._fail is not None:
            exc = self._fail
            self._fail = None
            raise exc
        start = int(page_token) if page_token else 0
        chunk = self._tweets[start : start + max_count]
        next_token = str(start + len(chunk)) if start + len(chunk) < len(self._tweets) else None
        return TimelinePage(
            tweets=tuple(
                Tweet(tweet_id=t.tweet_id, user_id=handle, text=t.text) for t in chunk
            ),
            next_token=next_token,
        )


class TestFetchUserTimeline:
    def test_under_cap(self):
        policy = FetchPolicy(max_tweets_per_user=3200)
        record = fetch_user_timeline(PagedFake(10), "h", policy)
        assert len(record.tweets) == 10
        assert record.flags == ()

    def test_cap_truncates_to_newest(self):
        policy = FetchPolicy(max_tweets_per_user=3200)
        record = fetch_user_timeline(PagedFake(4000), "h", policy)
        assert len(record.tweets) == 3200
        # most recent first: the first 3200 of the timeline
        assert record.tweets[0].tweet_id == "t0"
        assert record.tweets[-1].tweet_id == "t3199"

    def test_rate_limit_then_success(self):
        from radrisk.acquisition import RateLimitedError

        clock = FakeClock()
        policy = FetchPolicy(retry_backoff_seconds=30.0, max_retries=3)
        fake = PagedFake(5, fail_first_with=RateLimitedError("429"))
        record = fetch_user_timeline(fake, "h", policy, sleep=clock.sleep)
        assert len(record.tweets) == 5
        assert record.flags == ()
        assert clock.sleeps == [30.0]

    def test_rate_limit_exhaustion_partial(self):
        from radrisk.acquisition import RateLimitedError

        class AlwaysLimited:
            def fetch_page(self, handle, max_count, page_token):
                raise RateLimitedError("429")

        clock = FakeClock()
        policy = FetchPolicy(retry_backoff_seconds=1.0, max_retries=2)
        record = fetch_user_timeline(AlwaysLimited(), "h", policy, sleep=clock.sleep)
        assert record.flags == ("partial",)
        assert record.tweets == ()
        assert len(clock.sleeps) == 2

    def test_unavailable_account_flagged(self):
        source = ReplaySource([transcript_entry("gone", None, error="suspended")])
        record = fetch_user_timeline(source, "gone", FetchPolicy())
        assert record.flags == ("unavailable",)
        assert record.tweets == ()

    def test_pagination_respects_page_size(self):
        fake = PagedFake(450)
        record = fetch_user_timeline(fake, "h", FetchPolicy(), page_size=200)
        assert len(record.tweets) == 450
        assert fake.requests == 3

    def test_cap_holds_even_against_overfull_pages(self):
        class Greedy:
            def fetch_page(self, handle, max_count, page_token):
                return TimelinePage(
                    tweets=tuple(
                        Tweet(tweet_id=f"g{i}", user_id=handle, text="x")
                        for i in range(max_count + 50)
                    ),
                    next_token=None,
                )

        policy = FetchPolicy(max_tweets_per_user=100)
        record = fetch_user_timeline(Greedy(), "h", policy, page_size=200)
        assert len(record.tweets) == 100

    def test_paginated_fetch_obeys_rate_budget(self):
        clock = FakeClock()
        policy = FetchPolicy(requests_per_window=1, window_seconds=60.0)
        limiter = RateLimiter.for_policy(policy, clock=clock.now, sleep=clock.sleep)
        fake = PagedFake(450)
        record = fetch_user_timeline(fake, "h", policy, limiter=limiter, page_size=200)
        assert len(record.tweets) == 450
        # three page requests, one per 60s window
        assert clock.sleeps == [60.0, 60.0]


class TestRateLimiter:
    def test_never_exceeds_budget_in_any_window(self):
        clock = FakeClock()
        limiter = RateLimiter(3, 10.0, clock=clock.now, sleep=clock.sleep)
        times = []
        for _ in range(10):
            limiter.acquire()
            times.append(clock.now())
        for i in range(len(times)):
            in_window = [t for t in times if times[i] <= t < times[i] + 10.0]
            assert len(in_window) <= 3

    def test_burst_then_wait(self):
        clock = FakeClock()
        limiter = RateLimiter(2, 60.0, clock=clock.now, sleep=clock.sleep)
        limiter.acquire()
        limiter.acquire()
        assert clock.now() == 0.0
        limiter.acquire()
        assert clock.now() == pytest.approx(60.0)

    @given(st.integers(min_value=1, max_value=5), st.integers(min_value=1, max_value=40))
    def test_window_property(self, limit, n_requests):
        clock = FakeClock()
        limiter = RateLimiter(limit, 7.0, clock=clock.now, sleep=clock.sleep)
        times = []
        for _ in range(n_requests):
            limiter.acquire()
            times.append(clock.now())
        for start in times:
            assert sum(1 for t in times if start <= t < start + 7.0) <= limit


class TestFetchMany:
    def test_audit_records_every_outcome(self):
        entries = [
            transcript_entry("a", None, tweet_dicts(2)),
            transcript_entry("gone", None, error="not_found"),
            transcript_entry("b", None, tweet_dicts(1)),
        ]
        source = ReplaySource(entries)
        dump = AccountDump(handles=("a", "gone", "b"))
        clock = FakeClock()
        limiter = RateLimiter(100, 1.0, clock=clock.now, sleep=clock.sleep)
        records, audit = fetch_many(source, dump, FetchPolicy(), limiter=limiter)
        assert [r.user_id for r in records] == ["a", "gone", "b"]
        assert audit["fetched"] == ["a", "b"]
        assert audit["unavailable"] == ["gone"]
        assert audit["partial"] == []
