"""Synthetic corpus generation for experiments and verification.

Builds populations with a planted per-tweet keyword-containment
probability, so detection power and null behaviour of the comparison
machinery can be studied without real data.
"""

from __future__ import annotations

import random
from typing import Sequence

from .corpus import Dataset, Tweet, UserRecord

# Filler vocabulary chosen to stay clear of the built-in keyword sets and
# their synonym expansions (no shared stems).
NEUTRAL_WORDS = (
    "morning", "coffee", "window", "garden", "river", "bicycle", "breakfast",
    "painting", "library", "museum", "concert", "holiday", "photograph",
    "kitchen", "umbrella", "jacket", "piano", "violin", "mountain", "valley",
    "cheese", "bread", "butter", "travel", "ticket", "station", "airport",
    "novel", "poem", "puzzle", "lamp", "candle", "mirror", "carpet",
)


def neutral_tweet(rng: random.Random, min_words: int = 5, max_words: int = 9) -> str:
    n = rng.randint(min_words, max_words)
    return " ".join(rng.choice(NEUTRAL_WORDS) for _ in range(n))


def keyword_tweet(rng: random.Random, keywords: Sequence[str]) -> str:
    """A neutral tweet with one planted keyword at a random position."""
    words = neutral_tweet(rng).split()
    words.insert(rng.randrange(len(words) + 1), rng.choice(list(keywords)))
    return " ".join(words)


def planted_user(
    rng: random.Random,
    user_id: str,
    n_tweets: int,
    p_keyword: float,
    keywords: Sequence[str],
) -> UserRecord:
    tweets = []
    for i in range(n_tweets):
        if rng.random() < p_keyword:
            text = keyword_tweet(rng, keywords)
        else:
            text = neutral_tweet(rng)
        tweets.append(Tweet(tweet_id=f"{user_id}-{i}", user_id=user_id, text=text))
    return UserRecord(user_id=user_id, handle=user_id, tweets=tuple(tweets))


def planted_dataset(
    label: str,
    n_users: int,
    tweets_per_user: int,
    p_keyword: float,
    keywords: Sequence[str],
    seed: int,
) -> Dataset:
    """A population whose tweets contain a keyword with fixed probability."""
    rng = random.Random(seed)
    users = tuple(
        planted_user(rng, f"{label}_u{i:04d}", tweets_per_user, p_keyword, keywords)
        for i in range(n_users)
    )
    return Dataset(label=label, users=users)
