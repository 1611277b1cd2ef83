"""Randomized but deterministic corpus fixtures exercising every pipeline
feature: keywords from all five sets, ellipses in both forms, fully
capitalized sentences, URLs, mentions and multi-sentence tweets.
"""

import random

from radrisk.corpus import Dataset, Tweet, UserRecord
from radrisk.synth import NEUTRAL_WORDS

ALL_SEEDS = [
    "shit", "crap", "damn", "fuck",
    "hate", "guilt", "shame", "terrible", "horrible", "bad", "fault",
    "muslim", "sick", "discrimination", "people", "racism", "religion",
    "western", "suck", "west", "europe", "usa", "us", "bloody", "impure",
    "kuffar", "kafir",
    "islamic", "state", "caliphate", "rise", "mujahideen", "mujahid",
    "help", "fight", "weapon", "gun", "weapons",
    # inflected forms so stemming does real work
    "weapons", "guns", "fighting", "hating", "caliphates", "rising",
]


def _neutral(rng, lo=3, hi=8):
    return [rng.choice(NEUTRAL_WORDS) for _ in range(rng.randint(lo, hi))]


def mixed_tweet(rng):
    parts = _neutral(rng)
    if rng.random() < 0.40:
        for _ in range(rng.randint(1, 2)):
            parts.insert(rng.randrange(len(parts) + 1), rng.choice(ALL_SEEDS))
    if rng.random() < 0.20:
        idx = rng.randrange(len(parts))
        parts[idx] = parts[idx] + rng.choice(["...", "..", "…"])
    if rng.random() < 0.20:
        parts.insert(rng.randrange(len(parts) + 1), f"@user{rng.randrange(999)}")
    if rng.random() < 0.20:
        parts.append(f"https://t.co/{rng.randrange(16**6):06x}")
    text = " ".join(parts)
    if rng.random() < 0.15:
        shout = " ".join(w.upper() for w in _neutral(rng, 2, 4))
        text = f"{shout}. {text}"
    if rng.random() < 0.10:
        text = f"{text}. {' '.join(_neutral(rng, 2, 4))}!"
    return text


def pipeline_fixture(n_users=100, seed=1729, min_tweets=5, max_tweets=25):
    rng = random.Random(seed)
    users = []
    for i in range(n_users):
        uid = f"user{i:03d}"
        tweets = tuple(
            Tweet(tweet_id=f"{uid}-{t}", user_id=uid, text=mixed_tweet(rng))
            for t in range(rng.randint(min_tweets, max_tweets))
        )
        users.append(UserRecord(user_id=uid, handle=uid, tweets=tweets))
    return Dataset(label="fixture", users=tuple(users))
