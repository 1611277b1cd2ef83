"""End-to-end offline demo of the whole pipeline on synthetic data.

Creates two planted populations, then runs every CLI stage against them:
summaries, per-user metrics, a rank-sum comparison, plot-data exports,
script profiling, and an acquisition round-trip through a replay
transcript.  Everything lands in --outdir.
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from radrisk import cli  # noqa: E402
from radrisk.synth import planted_dataset  # noqa: E402


def write_corpus(ds, path):
    with path.open("w", encoding="utf-8") as fh:
        for user in ds.users:
            for tweet in user.tweets:
                fh.write(json.dumps({"user_id": tweet.user_id, "text": tweet.text}) + "\n")


def write_replay_fixture(ds, dump_path, transcript_path):
    """A dump file plus a transcript that replays the first users' timelines."""
    users = ds.users[:5]
    dump_path.write_text("\n".join(f"@{u.user_id}" for u in users) + "\n")
    with transcript_path.open("w", encoding="utf-8") as fh:
        for u in users:
            entry = {
                "request": {"handle": u.user_id, "page_token": None},
                "response": {"tweets": [
                    {"tweet_id": t.tweet_id, "text": t.text} for t in u.tweets[:20]
                ]},
            }
            fh.write(json.dumps(entry) + "\n")


def run(argv):
    print(f"$ radrisk {' '.join(argv)}")
    code = cli.main(argv)
    if code != 0:
        raise SystemExit(f"command failed with exit code {code}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="demo_out")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    keywords = ["caliphate", "mujahideen", "weapon", "fight"]

    radical = planted_dataset("radical", 50, 100, 0.30, keywords, args.seed)
    control = planted_dataset("control", 50, 100, 0.05, keywords, args.seed + 1)
    radical_path = outdir / "radical.jsonl"
    control_path = outdir / "control.jsonl"
    write_corpus(radical, radical_path)
    write_corpus(control, control_path)

    run(["summarize", str(radical_path), str(control_path), "--pretty"])

    metrics_r = outdir / "radical_metrics.csv"
    metrics_c = outdir / "control_metrics.csv"
    run(["metrics", str(radical_path), "--out", str(metrics_r)])
    run(["metrics", str(control_path), "--out", str(metrics_c)])

    run(["compare", str(metrics_r), str(metrics_c),
         "--metric", "pro_jihad", "--tail", "greater"])

    run(["distributions", str(metrics_r), "--metric", "pro_jihad",
         "--outdir", str(outdir / "dist")])
    run(["langs", str(radical_path)])

    dump_path = outdir / "handles.txt"
    transcript_path = outdir / "transcript.jsonl"
    write_replay_fixture(radical, dump_path, transcript_path)
    run(["fetch", "--dump", str(dump_path), "--out", str(outdir / "fetched.jsonl"),
         "--replay", str(transcript_path)])

    run(["reproduce", "--d1", str(radical_path), "--d3", str(control_path),
         "--out", str(outdir / "report.json")])

    print(f"\nall outputs in {outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
