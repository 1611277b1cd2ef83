import json
from pathlib import Path

import pytest

from radrisk import lexicon
from radrisk.corpus import Dataset, Tweet, UserRecord

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def keyword_sets():
    """The five finalized built-in keyword sets."""
    return lexicon.build_keyword_sets()


@pytest.fixture
def write_jsonl(tmp_path):
    def _write(rows, name="corpus.jsonl"):
        path = tmp_path / name
        path.write_text(
            "\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8"
        )
        return path

    return _write


@pytest.fixture
def write_csv(tmp_path):
    def _write(text, name="corpus.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def make_user(user_id, texts):
    return UserRecord(
        user_id=user_id,
        handle=user_id,
        tweets=tuple(
            Tweet(tweet_id=f"{user_id}-{i}", user_id=user_id, text=t)
            for i, t in enumerate(texts)
        ),
    )


def make_dataset(label, users_texts):
    return Dataset(
        label=label,
        users=tuple(make_user(uid, texts) for uid, texts in users_texts.items()),
    )
