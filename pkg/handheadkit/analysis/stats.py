"""Paired Wilcoxon signed-rank test."""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm, rankdata

from handheadkit.core.errors import LengthMismatch, TooFewPairs

EXACT_MAX_PAIRS = 20


@dataclass(frozen=True)
class WilcoxonResult:
    """
    Outcome of a two-sided signed-rank test.

    Attributes:
        statistic: Sum of the ranks of the positive differences (W+)
        p_value: Two-sided p-value
        n: Number of non-zero differences
        method: "exact" or "normal"
    """

    statistic: float
    p_value: float
    n: int
    method: str

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value, "n": self.n, "method": self.method}


def _exact_p_value(doubled_ranks: np.ndarray, doubled_w: int) -> float:
    # counts[s] = number of sign assignments whose doubled W+ equals s
    total = int(doubled_ranks.sum())
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in (int(v) for v in doubled_ranks):
        for s in range(total, r - 1, -1):
            counts[s] += counts[s - r]
    n_assignments = 2 ** len(doubled_ranks)
    lower = sum(counts[: doubled_w + 1])
    upper = sum(counts[doubled_w:])
    return min(1.0, 2.0 * min(lower, upper) / n_assignments)


def _normal_p_value(ranks: np.ndarray, w_plus: float) -> float:
    n = len(ranks)
    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    if variance <= 0:
        return 1.0
    z = max(abs(w_plus - mean) - 0.5, 0.0) / math.sqrt(variance)
    return float(min(1.0, 2.0 * norm.sf(z)))


def wilcoxon_paired(a: Sequence[float], b: Sequence[float], min_pairs: int = 5) -> WilcoxonResult:
    """
    Two-sided paired Wilcoxon signed-rank test.

    Zero differences are discarded and tied absolute differences get averaged ranks. Up to 20
    pairs the p-value comes from the exact null distribution of W+, above that from the normal
    approximation with tie and continuity corrections.

    Args:
        a: First sample
        b: Second sample, paired with ``a``
        min_pairs: Minimum number of non-zero differences

    Raises:
        LengthMismatch: If the samples differ in length
        TooFewPairs: If fewer than ``min_pairs`` (or no) non-zero differences remain
    """
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise LengthMismatch(f"Paired samples differ in length: {x.size} vs {y.size}")

    diffs = x - y
    diffs = diffs[diffs != 0]
    n = int(diffs.size)
    if n == 0 or n < min_pairs:
        raise TooFewPairs(f"{n} non-zero paired difference(s), need at least {max(min_pairs, 1)}")

    ranks = rankdata(np.abs(diffs), method="average")
    w_plus = float(ranks[diffs > 0].sum())
    if n <= EXACT_MAX_PAIRS:
        doubled = np.rint(2 * ranks).astype(np.int64)
        p_value = _exact_p_value(doubled, int(round(2 * w_plus)))
        method = "exact"
    else:
        p_value = _normal_p_value(ranks, w_plus)
        method = "normal"
    return WilcoxonResult(statistic=w_plus, p_value=p_value, n=n, method=method)
