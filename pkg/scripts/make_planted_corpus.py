"""Generate a synthetic tweet corpus with a planted keyword rate.

Writes JSONL ready for the `radrisk` commands, e.g.:

    python scripts/make_planted_corpus.py --out radical.jsonl --prob 0.3 --seed 1
    python scripts/make_planted_corpus.py --out control.jsonl --prob 0.05 --seed 2
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from radrisk.synth import planted_dataset  # noqa: E402

DEFAULT_KEYWORDS = "caliphate,mujahideen,weapon,fight"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output corpus (.jsonl)")
    parser.add_argument("--label", default="synthetic")
    parser.add_argument("--users", type=int, default=50)
    parser.add_argument("--tweets-per-user", type=int, default=100)
    parser.add_argument("--prob", type=float, default=0.05,
                        help="per-tweet keyword-containment probability")
    parser.add_argument("--keywords", default=DEFAULT_KEYWORDS,
                        help="comma-separated planted keywords")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    keywords = [w.strip() for w in args.keywords.split(",") if w.strip()]
    ds = planted_dataset(
        args.label, args.users, args.tweets_per_user, args.prob, keywords, args.seed
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        for user in ds.users:
            for tweet in user.tweets:
                fh.write(json.dumps({
                    "user_id": tweet.user_id,
                    "tweet_id": tweet.tweet_id,
                    "text": tweet.text,
                }) + "\n")
    print(f"wrote {ds.n_tweets} tweets for {len(ds.users)} users to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
