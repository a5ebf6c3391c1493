"""Balanced accuracy and the Wilcoxon signed-rank test."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.stats import norm, rankdata

EXACT_MAX_N = 20


def balanced_accuracy(y_true, y_pred) -> float:
    """Mean per-class recall over the classes present in ``y_true``."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.size == 0:
        raise ValueError("balanced accuracy of an empty label vector is undefined")
    if y_true.shape != y_pred.shape:
        raise ValueError(f"shape mismatch: {y_true.shape} vs {y_pred.shape}")
    classes = np.unique(y_true)
    recalls = [np.mean(y_pred[y_true == c] == c) for c in classes]
    return float(np.mean(recalls))


class WilcoxonResult(NamedTuple):
    statistic: float
    pvalue: float
    n: int
    method: str


def _exact_lower_tail(doubled_ranks: np.ndarray, threshold: int) -> float:
    """P(positive-rank sum <= threshold) under random signs.

    Ranks are doubled so tied (half-integer) ranks stay integral; the count
    over all ``2**n`` sign assignments is accumulated as a polynomial product.
    """
    total = int(doubled_ranks.sum())
    counts = [0] * (total + 1)
    counts[0] = 1
    top = 0
    for r in doubled_ranks.tolist():
        r = int(r)
        for s in range(top, -1, -1):
            if counts[s]:
                counts[s + r] += counts[s]
        top += r
    hits = sum(counts[: threshold + 1])
    return hits / 2 ** len(doubled_ranks)


def wilcoxon_signed_rank(a, b, method: str = "auto") -> WilcoxonResult:
    """Paired two-sided Wilcoxon signed-rank test.

    Zero differences are dropped and tied magnitudes get average ranks. The
    statistic is the smaller of the positive and negative rank sums. With
    ``method="auto"`` the p-value is exact for up to 20 non-zero differences
    and uses the continuity-corrected normal approximation beyond that.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ValueError("a and b must be non-empty vectors of equal length")
    if method not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown method {method!r}")
    d = a - b
    d = d[d != 0]
    n = d.size
    if n == 0:
        return WilcoxonResult(0.0, 1.0, 0, "exact")
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    T = min(w_plus, w_minus)
    if method == "exact" or (method == "auto" and n <= EXACT_MAX_N):
        doubled = np.rint(2 * ranks).astype(np.int64)
        p = 2.0 * _exact_lower_tail(doubled, int(round(2 * T)))
        return WilcoxonResult(T, min(1.0, p), n, "exact")
    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_counts ** 3 - tie_counts) / 48.0
    z = (T - mean + 0.5) / math.sqrt(var)
    p = 2.0 * norm.cdf(min(z, 0.0))
    return WilcoxonResult(T, min(1.0, float(p)), n, "approx")
