"""Command-line surface tying the pipeline together.

Reports are machine-first (CSV/JSON) with a ``--pretty`` human table mode;
figures are left to external plotting tools working off the emitted files.
Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import statistics
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import acquisition, corpus, indicators, langprofile, lexicon, stats
from .errors import RadriskError
from .stats import DegenerateDistributionError

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.05
DEFAULT_BASE_URL = "https://api.twitter.com/2"

PAIR_ORDER = (("D1", "D2"), ("D1", "D3"), ("D2", "D3"))


@dataclass(frozen=True)
class ComparisonReport:
    metric: str
    dataset_a: str
    dataset_b: str
    n1: int
    n2: int
    median_a: float
    median_b: float
    result: stats.RankSumResult
    alpha: float

    @property
    def significant(self) -> bool:
        return self.result.p_value < self.alpha

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "dataset_a": self.dataset_a,
            "dataset_b": self.dataset_b,
            "n1": self.n1,
            "n2": self.n2,
            "median_a": self.median_a,
            "median_b": self.median_b,
            "w_statistic": self.result.w_statistic,
            "p_value": self.result.p_value,
            "tail": self.result.tail,
            "method": self.result.method,
            "degenerate": self.result.degenerate,
            "alpha": self.alpha,
            "significant": self.significant,
        }


# --------------------------------------------------------------------- config

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def load_config(path: str | Path) -> dict[str, str]:
    """Parse a flat ``key = value`` config file (# comments allowed)."""
    config: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise RadriskError(f"{path}: line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        config[key.strip().replace("-", "_")] = value.strip().strip("\"'")
    return config


class _Options:
    """Resolves option values: command line wins, then config, then default."""

    def __init__(self, args: argparse.Namespace, config: dict[str, str]):
        self._args = args
        self._config = config

    def get(self, name: str, default=None, convert=None):
        value = getattr(self._args, name, None)
        if value is None and name in self._config:
            value = self._config[name]
            if convert is bool:
                low = str(value).lower()
                if low in _TRUE:
                    value = True
                elif low in _FALSE:
                    value = False
                else:
                    raise RadriskError(f"config value for {name} is not a boolean: {value}")
            elif convert is not None:
                value = convert(value)
        if value is None:
            return default
        return value


# --------------------------------------------------------------------- helpers

def _atomic_write(path: str | Path, content: str) -> None:
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def _emit(content: str, out: str | None) -> None:
    if out:
        _atomic_write(out, content)
    else:
        sys.stdout.write(content)


def _pretty_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(header))).rstrip(),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _csv_schema(opts: _Options) -> dict[str, str]:
    schema = dict(corpus.DEFAULT_CSV_SCHEMA)
    schema["user_id"] = opts.get("user_col", schema["user_id"])
    schema["text"] = opts.get("text_col", schema["text"])
    tweet_id_col = opts.get("tweet_id_col")
    if tweet_id_col:
        schema["tweet_id"] = tweet_id_col
    timestamp_col = opts.get("timestamp_col")
    if timestamp_col:
        schema["timestamp"] = timestamp_col
    return schema


def _load_dataset(path: str, opts: _Options, label: str | None = None) -> corpus.Dataset:
    return corpus.load_path(
        path,
        schema=_csv_schema(opts),
        on_error=opts.get("on_error", "abort"),
        label=label,
        dedupe=opts.get("dedupe", False, convert=bool),
    )


def _build_sets(opts: _Options) -> dict[lexicon.Indicator, lexicon.KeywordSet]:
    return lexicon.build_keyword_sets(
        lexicon_dir=opts.get("lexicon_dir"),
        synsets_path=opts.get("synsets"),
    )


def _add_corpus_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--user-col", help="CSV column holding the user id (default: username)")
    parser.add_argument("--text-col", help="CSV column holding the tweet text (default: tweets)")
    parser.add_argument("--tweet-id-col", help="optional CSV column holding the tweet id")
    parser.add_argument("--timestamp-col", help="optional CSV column holding the timestamp")
    parser.add_argument(
        "--on-error", choices=corpus.ON_ERROR_MODES, default=None,
        help="malformed record handling (default: abort)",
    )
    parser.add_argument(
        "--dedupe", action="store_const", const=True, default=None,
        help="drop exact duplicate tweet ids per user (default: keep)",
    )


def _add_lexicon_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lexicon-dir", help="directory of per-indicator keyword override files")
    parser.add_argument("--synsets", help="synonym synset file (default: packaged snapshot)")
    parser.add_argument(
        "--mode", choices=indicators.MODES, default=None,
        help="keyword ratio mode (default: containment)",
    )


# -------------------------------------------------------------------- summarize

def cmd_summarize(args: argparse.Namespace, opts: _Options) -> int:
    stdev_mode = opts.get("stdev", "sample")
    rows = []
    n_failed = 0
    for path in args.datasets:
        label = Path(path).stem
        try:
            summary = corpus.summarize(_load_dataset(path, opts, label=label), stdev_mode)
            rows.append((label, summary, None))
        except (RadriskError, OSError, ValueError) as exc:
            logger.error("summarize failed for %s: %s", path, exc)
            rows.append((label, None, str(exc)))
            n_failed += 1

    fmt = opts.get("format", "csv")
    if fmt == "json":
        payload = {
            "stdev_convention": stdev_mode,
            "datasets": {
                label: ({"error": error} if error else asdict(summary))
                for label, summary, error in rows
            },
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        header = ["label", "n_users", "n_tweets", "avg_tweets_per_user",
                  "stdev_tweets_per_user", "error"]
        table = []
        for label, summary, error in rows:
            if error:
                table.append([label, "", "", "", "", error])
            else:
                table.append([
                    label,
                    str(summary.n_users),
                    str(summary.n_tweets),
                    f"{summary.avg_tweets_per_user:.2f}",
                    f"{summary.stdev_tweets_per_user:.2f}",
                    "empty" if summary.empty else "",
                ])
        if opts.get("pretty", False, convert=bool):
            _emit(_pretty_table(header, table), args.out)
        else:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(table)
            _emit(buf.getvalue(), args.out)
    return 1 if rows and n_failed == len(rows) else 0


# --------------------------------------------------------------------- metrics

def cmd_metrics(args: argparse.Namespace, opts: _Options) -> int:
    ds = _load_dataset(args.dataset, opts)
    sets = _build_sets(opts)
    rows = indicators.compute_dataset_metrics(ds, sets, opts.get("mode", "containment"))
    if not rows:
        raise RadriskError(f"{args.dataset}: no users with at least one tweet")
    fmt = opts.get("format", "csv")
    if fmt == "json":
        payload = [
            {k: v for k, v in asdict(m).items() if k != "flags"} for m in rows
        ]
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        buf = io.StringIO()
        indicators.write_metrics_csv(rows, buf)
        _emit(buf.getvalue(), args.out)
    return 0


# --------------------------------------------------------------------- compare

def compare_metrics(
    path_a: str | Path,
    path_b: str | Path,
    metric: str,
    tail: str = "two_sided",
    method: str = "auto",
    alpha: float = DEFAULT_ALPHA,
) -> ComparisonReport:
    if metric not in indicators.METRIC_COLUMNS:
        raise RadriskError(
            f"unknown metric {metric!r}; valid names: {', '.join(indicators.METRIC_COLUMNS)}"
        )
    col_a = indicators.read_metrics_csv(path_a)[metric]
    col_b = indicators.read_metrics_csv(path_b)[metric]
    if not col_a or not col_b:
        raise RadriskError("both metrics tables must contain at least one row")
    result = stats.wilcoxon_rank_sum(col_a, col_b, tail=tail, method=method)
    return ComparisonReport(
        metric=metric,
        dataset_a=Path(path_a).stem,
        dataset_b=Path(path_b).stem,
        n1=len(col_a),
        n2=len(col_b),
        median_a=float(statistics.median(col_a)),
        median_b=float(statistics.median(col_b)),
        result=result,
        alpha=alpha,
    )


def cmd_compare(args: argparse.Namespace, opts: _Options) -> int:
    report = compare_metrics(
        args.metrics_a,
        args.metrics_b,
        args.metric,
        tail=opts.get("tail", "two_sided"),
        method=opts.get("method", "auto"),
        alpha=opts.get("alpha", DEFAULT_ALPHA, convert=float),
    )
    fmt = opts.get("format", "json")
    if fmt == "csv":
        payload = report.to_dict()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(payload.keys())
        writer.writerow(payload.values())
        _emit(buf.getvalue(), args.out)
    else:
        _emit(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
    return 0


# --------------------------------------------------------------- distributions

def cmd_distributions(args: argparse.Namespace, opts: _Options) -> int:
    values = indicators.read_metrics_csv(args.metrics)[args.metric]
    if not values:
        raise RadriskError(f"{args.metrics}: metric column {args.metric} is empty")
    outdir = Path(opts.get("outdir", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    bandwidth = opts.get("bandwidth", None, convert=float)

    try:
        series = stats.kde_density(values, bandwidth=bandwidth)
    except (DegenerateDistributionError, ValueError) as exc:
        fn = outdir / f"{args.metric}_ecdf.csv"
        steps = stats.ecdf(values).steps()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "cumulative"])
        writer.writerows([f"{x!r}", f"{y!r}"] for x, y in steps)
        _atomic_write(fn, buf.getvalue())
        print(
            f"warning: degenerate distribution ({exc}); wrote ECDF to {fn}",
            file=sys.stderr,
        )
    else:
        fn = outdir / f"{args.metric}_density.csv"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y"])
        writer.writerows([f"{x!r}", f"{y!r}"] for x, y in series.points)
        _atomic_write(fn, buf.getvalue())

    summary = stats.quantile_summary(values)
    fn = outdir / f"{args.metric}_box.csv"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["min", "q1", "median", "q3", "max",
                     "whisker_low", "whisker_high", "outliers"])
    writer.writerow([
        f"{summary.minimum!r}", f"{summary.q1!r}", f"{summary.median!r}",
        f"{summary.q3!r}", f"{summary.maximum!r}",
        f"{summary.whisker_low!r}", f"{summary.whisker_high!r}",
        ";".join(repr(v) for v in summary.outliers),
    ])
    _atomic_write(fn, buf.getvalue())
    return 0


# ----------------------------------------------------------------------- langs

def cmd_langs(args: argparse.Namespace, opts: _Options) -> int:
    ds = _load_dataset(args.dataset, opts)
    dist = langprofile.script_distribution(ds)
    if dist.is_empty:
        print("warning: no classifiable tweets in dataset", file=sys.stderr)
    fmt = opts.get("format", "csv")
    if fmt == "json":
        payload = {
            "entries": {k: round(v, 2) for k, v in dist.entries.items()},
            "n_classified": dist.n_classified,
            "n_unclassified": dist.n_unclassified,
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        header = ["script", "percentage"]
        table = [[script, f"{pct:.2f}"] for script, pct in dist.entries.items()]
        if opts.get("pretty", False, convert=bool):
            _emit(_pretty_table(header, table), args.out)
        else:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(table)
            _emit(buf.getvalue(), args.out)
    return 0


# ----------------------------------------------------------------------- fetch

def cmd_fetch(args: argparse.Namespace, opts: _Options) -> int:
    dump = acquisition.parse_account_dump(Path(args.dump).read_text("utf-8"))
    policy = acquisition.FetchPolicy(
        max_tweets_per_user=opts.get("max_tweets", acquisition.PLATFORM_TIMELINE_CAP, convert=int),
        requests_per_window=opts.get("requests_per_window", 900, convert=int),
        window_seconds=opts.get("window_seconds", 900.0, convert=float),
        retry_backoff_seconds=opts.get("backoff", 60.0, convert=float),
        max_retries=opts.get("max_retries", 3, convert=int),
    )
    if args.replay:
        source = acquisition.ReplaySource.from_path(args.replay)
    else:
        source = acquisition.HttpTimelineSource(opts.get("base_url", DEFAULT_BASE_URL))
    records, audit = acquisition.fetch_many(
        source, dump, policy, page_size=opts.get("page_size", 200, convert=int)
    )

    lines = []
    for record in records:
        for tweet in record.tweets:
            lines.append(json.dumps({
                "user_id": tweet.user_id,
                "tweet_id": tweet.tweet_id,
                "text": tweet.text,
                "timestamp": tweet.timestamp,
            }, sort_keys=True))
    _atomic_write(args.out, "\n".join(lines) + ("\n" if lines else ""))

    audit_path = Path(args.out).with_suffix(Path(args.out).suffix + ".audit.json")
    audit_payload = dict(audit)
    audit_payload["policy"] = asdict(policy)
    _atomic_write(audit_path, json.dumps(audit_payload, indent=2, sort_keys=True) + "\n")
    print(
        f"fetched {len(audit['fetched'])} users "
        f"({len(audit['unavailable'])} unavailable, {len(audit['partial'])} partial); "
        f"audit: {audit_path}",
        file=sys.stderr,
    )
    return 0


# ------------------------------------------------------------------- reproduce

def cmd_reproduce(args: argparse.Namespace, opts: _Options) -> int:
    paths = {"D1": args.d1, "D2": args.d2, "D3": args.d3}
    supplied = {label: p for label, p in paths.items() if p}
    if len(supplied) < 2:
        raise RadriskError("reproduce needs at least two of --d1/--d2/--d3")

    mode = opts.get("mode", "containment")
    stdev_mode = opts.get("stdev", "sample")
    alpha = opts.get("alpha", DEFAULT_ALPHA, convert=float)
    sets = _build_sets(opts)

    datasets = {}
    metric_values: dict[str, dict[str, list[float]]] = {}
    medians: dict[str, dict[str, float]] = {}
    for label, path in supplied.items():
        ds = _load_dataset(path, opts, label=label)
        summary = corpus.summarize(ds, stdev_mode)
        rows = indicators.compute_dataset_metrics(ds, sets, mode)
        if not rows:
            raise RadriskError(f"{path}: no users with at least one tweet")
        datasets[label] = {"path": str(path), **asdict(summary)}
        columns = {
            col: [getattr(m, indicators.COLUMN_TO_FIELD[col]) for m in rows]
            for col in indicators.METRIC_COLUMNS
        }
        metric_values[label] = columns
        medians[label] = {
            col: float(statistics.median(vals)) for col, vals in columns.items()
        }

    comparisons = []
    for a, b in PAIR_ORDER:
        if a not in supplied or b not in supplied:
            continue
        for metric in indicators.METRIC_COLUMNS:
            x = metric_values[a][metric]
            y = metric_values[b][metric]
            per_tail = {
                tail: stats.wilcoxon_rank_sum(x, y, tail=tail) for tail in stats.TAILS
            }
            any_result = per_tail["greater"]
            comparisons.append({
                "metric": metric,
                "pair": [a, b],
                "n1": len(x),
                "n2": len(y),
                "median_a": medians[a][metric],
                "median_b": medians[b][metric],
                "w_statistic": any_result.w_statistic,
                "method": any_result.method,
                "degenerate": any_result.degenerate,
                "p_greater": per_tail["greater"].p_value,
                "p_less": per_tail["less"].p_value,
                "p_two_sided": per_tail["two_sided"].p_value,
                "significant": {
                    tail: per_tail[tail].p_value < alpha for tail in stats.TAILS
                },
            })

    payload = {
        "mode": mode,
        "alpha": alpha,
        "stdev_convention": stdev_mode,
        "metrics": list(indicators.METRIC_COLUMNS),
        "datasets": datasets,
        "medians": medians,
        "comparisons": comparisons,
    }
    content = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        _atomic_write(args.out, content)
        summary_rows = [
            [
                c["metric"],
                f"{c['pair'][0]} vs {c['pair'][1]}",
                f"{c['w_statistic']:g}",
                f"{c['p_greater']:.4g}",
                f"{c['p_two_sided']:.4g}",
            ]
            for c in comparisons
        ]
        sys.stdout.write(
            _pretty_table(["metric", "pair", "W", "p_greater", "p_two_sided"], summary_rows)
        )
        print(f"full report: {args.out}")
    else:
        sys.stdout.write(content)
    return 0


# ------------------------------------------------------------------ CLI wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radrisk",
        description="Lexicon- and style-based risk metrics over tweet corpora",
    )
    parser.add_argument("--config", help="key=value config file (flags win)")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for commands that sample (none of the core commands do)")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="per-dataset counts and tweet-count moments")
    p.add_argument("datasets", nargs="+", help="corpus files (.csv or .jsonl)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--pretty", action="store_const", const=True, default=None)
    p.add_argument("--stdev", choices=("sample", "population"), default=None)
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_corpus_args(p)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("metrics", help="per-user metric table for one dataset")
    p.add_argument("dataset", help="corpus file (.csv or .jsonl)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_corpus_args(p)
    _add_lexicon_args(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("compare", help="rank-sum comparison of one metric across two tables")
    p.add_argument("metrics_a", help="metrics CSV for the first dataset")
    p.add_argument("metrics_b", help="metrics CSV for the second dataset")
    p.add_argument("--metric", required=True, choices=indicators.METRIC_COLUMNS)
    p.add_argument("--tail", choices=stats.TAILS, default=None)
    p.add_argument("--method", choices=("auto", "exact", "normal_approx"), default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out", help="write output to a file instead of stdout")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("distributions", help="density + box-plot data for one metric")
    p.add_argument("metrics", help="metrics CSV")
    p.add_argument("--metric", required=True, choices=indicators.METRIC_COLUMNS)
    p.add_argument("--outdir", default=None, help="output directory (default: .)")
    p.add_argument("--bandwidth", type=float, default=None, help="override KDE bandwidth")
    p.set_defaults(func=cmd_distributions)

    p = sub.add_parser("langs", help="writing-script distribution of a dataset")
    p.add_argument("dataset", help="corpus file (.csv or .jsonl)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--pretty", action="store_const", const=True, default=None)
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_corpus_args(p)
    p.set_defaults(func=cmd_langs)

    p = sub.add_parser("fetch", help="fetch timelines for an account dump")
    p.add_argument("--dump", required=True, help="account dump file")
    p.add_argument("--out", required=True, help="output corpus (.jsonl)")
    p.add_argument("--replay", help="replay transcript instead of live HTTP")
    p.add_argument("--base-url", default=None, help=f"endpoint base (default {DEFAULT_BASE_URL})")
    p.add_argument("--max-tweets", type=int, default=None,
                   help="per-user cap (default and hard max 3200)")
    p.add_argument("--requests-per-window", type=int, default=None)
    p.add_argument("--window-seconds", type=float, default=None)
    p.add_argument("--backoff", type=float, default=None, help="rate-limit retry backoff seconds")
    p.add_argument("--max-retries", type=int, default=None)
    p.add_argument("--page-size", type=int, default=None)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("reproduce", help="full metric/comparison battery across datasets")
    p.add_argument("--d1", help="dataset D1 corpus file")
    p.add_argument("--d2", help="dataset D2 corpus file")
    p.add_argument("--d3", help="dataset D3 corpus file")
    p.add_argument("--out", help="write the JSON report here (prints a summary table)")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--stdev", choices=("sample", "population"), default=None)
    _add_corpus_args(p)
    _add_lexicon_args(p)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config) if args.config else {}
        opts = _Options(args, config)
        return args.func(args, opts)
    except (RadriskError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
