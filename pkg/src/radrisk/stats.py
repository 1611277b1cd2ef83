"""Nonparametric comparison machinery and distribution exports.

The rank-sum test reports W in the Mann-Whitney-U convention
(W = R1 - n1(n1+1)/2, so 0 <= W <= n1*n2) and computes p-values either by
full enumeration of the null distribution (small, tie-free samples) or by
the tie-corrected normal approximation with continuity correction.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RadriskError

TAILS = ("greater", "less", "two_sided")
EXACT_LIMIT = 20  # enumerate the null distribution up to this pooled size

_SQRT2 = math.sqrt(2.0)
_TINY = math.ulp(0.0)  # keep p-values inside (0, 1]


class DegenerateDistributionError(RadriskError):
    pass


@dataclass(frozen=True)
class RankSumResult:
    w_statistic: float
    p_value: float
    tail: str
    method: str  # "exact" | "normal_approx"
    n1: int
    n2: int
    degenerate: bool = False


@dataclass(frozen=True)
class DensitySeries:
    points: tuple[tuple[float, float], ...]
    bandwidth: float

    def integral(self) -> float:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return float(np.trapezoid(ys, xs))

    def evaluate(self, x: float) -> float:
        """Linear interpolation on the evaluation grid."""
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return float(np.interp(x, xs, ys))


@dataclass(frozen=True)
class QuantileSummary:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...] = ()


def rank_with_ties(values: Sequence[float]) -> list[float]:
    """1-based ranks with midrank (average) assignment for ties."""
    n = len(values)
    if n == 0:
        raise ValueError("cannot rank an empty sequence")
    order = sorted(range(n), key=values.__getitem__)
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        midrank = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = midrank
        i = j + 1
    return ranks


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / _SQRT2)


def _norm_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / _SQRT2)


def _rank_sum_counts(n1: int, n2: int) -> list[int]:
    """Null-distribution counts of the U statistic, index u = 0..n1*n2.

    Chooses n1 of the ranks 1..n1+n2; picking rank k as the j-th smallest
    chosen contributes k - j to U.  Classic 0/1 knapsack over ranks.
    """
    total_u = n1 * n2
    ways = [[0] * (total_u + 1) for _ in range(n1 + 1)]
    ways[0][0] = 1
    for k in range(1, n1 + n2 + 1):
        for j in range(min(k, n1), 0, -1):
            contribution = k - j
            if contribution > total_u:
                continue
            row = ways[j]
            prev = ways[j - 1]
            for u in range(contribution, total_u + 1):
                if prev[u - contribution]:
                    row[u] += prev[u - contribution]
    return ways[n1]


def _exact_p(w: int, n1: int, n2: int, tail: str) -> float:
    counts = _rank_sum_counts(n1, n2)
    total = sum(counts)
    total_u = n1 * n2
    if tail == "greater":
        num = sum(counts[w:])
    elif tail == "less":
        num = sum(counts[: w + 1])
    else:
        lo, hi = min(w, total_u - w), max(w, total_u - w)
        num = sum(counts[hi:]) + sum(counts[: lo + 1])
        num = min(num, total)
    return num / total


def wilcoxon_rank_sum(
    x: Sequence[float],
    y: Sequence[float],
    tail: str = "two_sided",
    method: str = "auto",
    continuity: bool = True,
) -> RankSumResult:
    """Rank-sum test of whether x is stochastically larger/smaller than y.

    ``tail="greater"`` tests x stochastically larger.  ``method="auto"``
    enumerates the exact null distribution for tie-free pooled samples of
    size <= EXACT_LIMIT and falls back to the normal approximation with
    tie-corrected variance otherwise.
    """
    if tail not in TAILS:
        raise ValueError(f"tail must be one of {TAILS}")
    if method not in ("auto", "exact", "normal_approx"):
        raise ValueError("method must be 'auto', 'exact' or 'normal_approx'")
    n1, n2 = len(x), len(y)
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be non-empty")

    pooled = list(x) + list(y)
    ranks = rank_with_ties(pooled)
    r1 = sum(ranks[:n1])
    w = r1 - n1 * (n1 + 1) / 2.0

    distinct = set(pooled)
    if len(distinct) == 1:
        return RankSumResult(w, 1.0, tail, "normal_approx", n1, n2, degenerate=True)
    has_ties = len(distinct) < n1 + n2

    if method == "exact" or (method == "auto" and not has_ties and n1 + n2 <= EXACT_LIMIT):
        if has_ties:
            raise ValueError("exact method requires tie-free samples")
        p = _exact_p(int(round(w)), n1, n2, tail)
        return RankSumResult(w, max(p, _TINY), tail, "exact", n1, n2)

    n = n1 + n2
    tie_term = sum(t**3 - t for t in Counter(pooled).values())
    sigma_sq = (n1 * n2 / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
    sigma = math.sqrt(sigma_sq)
    mu = n1 * n2 / 2.0
    cc = 0.5 if continuity else 0.0
    if tail == "greater":
        p = _norm_sf((w - mu - cc) / sigma)
    elif tail == "less":
        p = _norm_cdf((w - mu + cc) / sigma)
    else:
        shift = 0.0 if w == mu else math.copysign(cc, w - mu)
        z = (w - mu - shift) / sigma
        p = min(1.0, 2.0 * min(_norm_cdf(z), _norm_sf(z)))
    return RankSumResult(w, max(p, _TINY), tail, "normal_approx", n1, n2)


class Ecdf:
    """Right-continuous empirical CDF: F(x) = #{values <= x} / n."""

    def __init__(self, values: Sequence[float]):
        if len(values) == 0:
            raise ValueError("ecdf requires at least one value")
        self._sorted = sorted(float(v) for v in values)
        self._n = len(self._sorted)

    def __call__(self, x: float) -> float:
        return bisect_right(self._sorted, x) / self._n

    @property
    def support(self) -> tuple[float, float]:
        return self._sorted[0], self._sorted[-1]

    def steps(self) -> list[tuple[float, float]]:
        """Distinct (x, F(x)) step points, ready for CSV export."""
        out = []
        for i, v in enumerate(self._sorted):
            if i + 1 == self._n or self._sorted[i + 1] != v:
                out.append((v, (i + 1) / self._n))
        return out


def ecdf(values: Sequence[float]) -> Ecdf:
    return Ecdf(values)


def silverman_bandwidth(values: Sequence[float]) -> float:
    """0.9 * min(sd, IQR/1.34) * n^(-1/5), guarding against a zero IQR."""
    arr = np.asarray(values, dtype=float)
    n = arr.size
    sd = float(arr.std(ddof=1))
    q75, q25 = np.percentile(arr, [75, 25])
    iqr = float(q75 - q25)
    scale = min(sd, iqr / 1.34) if iqr > 0 else sd
    if scale <= 0:
        raise DegenerateDistributionError(
            "all values identical; export an ECDF instead of a density"
        )
    return 0.9 * scale * n ** (-0.2)


def kde_density(
    values: Sequence[float],
    bandwidth: float | None = None,
    n_points: int = 512,
) -> DensitySeries:
    """Gaussian-kernel density estimate on a regular grid.

    The grid spans [min - 3h, max + 3h] with ``n_points`` points; the
    default bandwidth follows Silverman's rule.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise ValueError("kde requires at least two values")
    if np.unique(arr).size == 1:
        raise DegenerateDistributionError(
            "all values identical; export an ECDF instead of a density"
        )
    h = float(bandwidth) if bandwidth is not None else silverman_bandwidth(arr)
    if h <= 0:
        raise ValueError("bandwidth must be positive")
    grid = np.linspace(arr.min() - 3 * h, arr.max() + 3 * h, n_points)
    norm = 1.0 / (arr.size * h * math.sqrt(2 * math.pi))
    density = np.zeros_like(grid)
    # accumulate in chunks so huge samples stay memory-bounded
    for start in range(0, arr.size, 16384):
        chunk = arr[start : start + 16384]
        z = (grid[:, None] - chunk[None, :]) / h
        density += np.exp(-0.5 * z * z).sum(axis=1)
    density *= norm
    points = tuple(zip(grid.tolist(), density.tolist()))
    return DensitySeries(points=points, bandwidth=h)


def quantile_summary(values: Sequence[float]) -> QuantileSummary:
    """Five-number summary with Tukey 1.5*IQR whiskers and outlier list.

    Quartiles use linear interpolation (type-7); outliers fall outside
    [q1 - 1.5*IQR, q3 + 1.5*IQR] and are listed separately.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("quantile summary requires at least one value")
    q1, med, q3 = (float(q) for q in np.percentile(arr, [25, 50, 75]))
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    inside = arr[(arr >= lo_fence) & (arr <= hi_fence)]
    outliers = tuple(sorted(float(v) for v in arr[(arr < lo_fence) | (arr > hi_fence)]))
    return QuantileSummary(
        minimum=float(arr.min()),
        q1=q1,
        median=med,
        q3=q3,
        maximum=float(arr.max()),
        whisker_low=float(inside.min()),
        whisker_high=float(inside.max()),
        outliers=outliers,
    )
