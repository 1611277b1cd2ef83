import math
import random

import pytest
from hypothesis import given, strategies as st

from radrisk import corpus
from radrisk.corpus import (
    CorpusFormatError,
    Dataset,
    DatasetSummary,
    Tweet,
    UserRecord,
    load_csv,
    load_jsonl,
    summarize,
)

from tests.conftest import make_dataset


class TestModel:
    def test_tweet_requires_ids(self):
        with pytest.raises(ValueError):
            Tweet(tweet_id="", user_id="u", text="x")
        with pytest.raises(ValueError):
            Tweet(tweet_id="t", user_id="", text="x")

    def test_user_record_checks_ownership(self):
        t = Tweet(tweet_id="t", user_id="other", text="x")
        with pytest.raises(ValueError):
            UserRecord(user_id="u", tweets=(t,))

    def test_dataset_rejects_duplicate_users(self):
        u = UserRecord(user_id="u")
        with pytest.raises(ValueError):
            Dataset(label="d", users=(u, u))

    def test_empty_text_allowed(self):
        Tweet(tweet_id="t", user_id="u", text="")


class TestLoadCsv:
    def test_groups_by_user(self, write_csv):
        path = write_csv("username,tweets\nalice,hi\nbob,yo\nalice,again\n")
        ds = load_csv(path)
        assert len(ds.users) == 2
        assert ds.n_tweets == 3
        alice = ds.users[0]
        assert alice.user_id == "alice"
        assert [t.text for t in alice.tweets] == ["hi", "again"]

    def test_header_only(self, write_csv):
        ds = load_csv(write_csv("username,tweets\n"))
        assert len(ds.users) == 0 and ds.n_tweets == 0

    def test_missing_mapped_column_aborts(self, write_csv):
        path = write_csv("name,stuff\na,b\n")
        with pytest.raises(CorpusFormatError, match="missing mapped column"):
            load_csv(path)

    def test_malformed_row_abort_vs_skip(self, write_csv):
        path = write_csv("username,tweets\nalice,hi\n,orphan\n")
        with pytest.raises(CorpusFormatError, match="line 3"):
            load_csv(path, on_error="abort")
        ds = load_csv(path, on_error="skip")
        assert len(ds.users) == 1 and ds.n_tweets == 1

    def test_custom_schema_and_quoted_newlines(self, write_csv):
        path = write_csv('uid,body,tid\nu1,"line1\nline2",t1\nu1,plain,t2\n')
        ds = load_csv(path, schema={"user_id": "uid", "text": "body", "tweet_id": "tid"})
        assert ds.n_tweets == 2
        assert ds.users[0].tweets[0].text == "line1\nline2"
        assert ds.users[0].tweets[0].tweet_id == "t1"

    def test_duplicate_tweet_ids_kept_by_default(self, write_csv):
        path = write_csv("username,tweets,id\nu,a,1\nu,b,1\n")
        schema = {"user_id": "username", "text": "tweets", "tweet_id": "id"}
        assert load_csv(path, schema=schema).n_tweets == 2
        assert load_csv(path, schema=schema, dedupe=True).n_tweets == 1

    def test_label_defaults_to_stem(self, write_csv):
        path = write_csv("username,tweets\nu,a\n", name="mycorpus.csv")
        assert load_csv(path).label == "mycorpus"

    def test_order_stable_across_loads(self, write_csv):
        rng = random.Random(7)
        rows = "".join(
            f"u{rng.randrange(20)},tweet number {i}\n" for i in range(200)
        )
        path = write_csv("username,tweets\n" + rows)
        assert load_csv(path) == load_csv(path)


class TestLoadJsonl:
    def test_same_user_grouping(self, write_jsonl):
        path = write_jsonl([
            {"user_id": "u", "text": "one"},
            {"user_id": "u", "text": "two"},
        ])
        ds = load_jsonl(path)
        assert len(ds.users) == 1
        assert [t.text for t in ds.users[0].tweets] == ["one", "two"]

    def test_missing_text_is_record_error(self, write_jsonl):
        path = write_jsonl([{"user_id": "u"}])
        with pytest.raises(CorpusFormatError, match="line 1"):
            load_jsonl(path)
        assert load_jsonl(path, on_error="skip").n_tweets == 0

    def test_unparsable_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"user_id": "u", "text": "ok"}\n{extremely broken\n')
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_jsonl(path)

    def test_first_seen_user_order(self, write_jsonl):
        path = write_jsonl([
            {"user_id": "carol", "text": "1"},
            {"user_id": "alice", "text": "2"},
            {"user_id": "carol", "text": "3"},
            {"user_id": "bob", "text": "4"},
            {"user_id": "alice", "text": "5"},
        ])
        ds = load_jsonl(path)
        assert [u.user_id for u in ds.users] == ["carol", "alice", "bob"]
        assert [len(u.tweets) for u in ds.users] == [2, 2, 1]

    def test_ids_and_timestamps_preserved(self, write_jsonl):
        path = write_jsonl([
            {"user_id": "u", "text": "x", "tweet_id": 99, "timestamp": "2017-04-01T00:00:00Z"}
        ])
        t = load_jsonl(path).users[0].tweets[0]
        assert t.tweet_id == "99"
        assert t.timestamp == "2017-04-01T00:00:00Z"


class TestSummarize:
    def test_two_point_formula(self):
        ds = make_dataset("d", {"a": ["t"] * 2, "b": ["t"] * 4})
        s = summarize(ds)
        assert s.n_tweets == 6
        assert s.avg_tweets_per_user == 3.0
        assert s.stdev_tweets_per_user == pytest.approx(math.sqrt(2))

    def test_single_user_stdev_zero(self):
        s = summarize(make_dataset("d", {"a": ["t"] * 5}))
        assert s.avg_tweets_per_user == 5 and s.stdev_tweets_per_user == 0.0

    def test_empty_dataset_flagged(self):
        s = summarize(Dataset(label="d"))
        assert s == DatasetSummary(0, 0, 0.0, 0.0, empty=True, stdev_convention="sample")

    def test_population_mode(self):
        ds = make_dataset("d", {"a": ["t"] * 2, "b": ["t"] * 4})
        s = summarize(ds, stdev_mode="population")
        assert s.stdev_tweets_per_user == pytest.approx(1.0)
        assert s.stdev_convention == "population"

    @given(st.lists(st.integers(min_value=0, max_value=30), min_size=0, max_size=25))
    def test_n_tweets_is_sum_of_user_counts(self, counts):
        ds = make_dataset("d", {f"u{i}": ["t"] * c for i, c in enumerate(counts)})
        assert summarize(ds).n_tweets == sum(counts)


class TestLoadVsOracle:
    def test_random_fixture_matches_independent_moments(self, write_csv):
        rng = random.Random(42)
        counts = {f"user{i:02d}": rng.randint(1, 40) for i in range(30)}
        lines = ["username,tweets"]
        for uid, c in counts.items():
            lines.extend(f"{uid},msg {i}" for i in range(c))
        body = lines[1:]
        random.Random(43).shuffle(body)  # rows arrive interleaved across users
        path = write_csv("\n".join([lines[0]] + body) + "\n")

        summary = summarize(load_csv(path))

        # straight-line oracle on the raw counts
        values = list(counts.values())
        n = len(values)
        mean = sum(values) / n
        var = sum((v - mean) ** 2 for v in values) / (n - 1)
        assert summary.n_users == n
        assert summary.n_tweets == sum(values)
        assert summary.avg_tweets_per_user == pytest.approx(mean)
        assert summary.stdev_tweets_per_user == pytest.approx(math.sqrt(var))


def test_load_path_dispatch(write_csv, write_jsonl):
    csv_path = write_csv("username,tweets\nu,a\n")
    jsonl_path = write_jsonl([{"user_id": "u", "text": "a"}])
    assert corpus.load_path(csv_path).n_tweets == 1
    assert corpus.load_path(jsonl_path).n_tweets == 1
    with pytest.raises(CorpusFormatError):
        corpus.load_path(csv_path, fmt="parquet")
