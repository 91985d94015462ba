"""
Statistical overlap factor (SOF): per-index separation between a healthy
and a damaged population, used to pre-select the most separating inputs.
"""
import math
from typing import NamedTuple

import numpy as np

DEFAULT_K = 50


class DistributionStats(NamedTuple):
    mean: float
    std: float
    count: int

    @classmethod
    def from_samples(cls, x):
        x = np.asarray(x, dtype=float)
        std = float(np.std(x, ddof=1)) if x.size >= 2 else 0.0
        return cls(float(np.mean(x)), std, int(x.size))


class SofRanking(NamedTuple):
    scores: np.ndarray
    selected: np.ndarray


def sof_score(a, b):
    """
    Separation |mean_a - mean_b| / ((std_a + std_b) / 2).

    Two zero-variance distributions score ``inf`` when their means differ
    and 0 when they coincide.
    """
    values = (a.mean, a.std, b.mean, b.std)
    if any(math.isnan(v) for v in values):
        raise ValueError("invalid stats")
    diff = abs(a.mean - b.mean)
    spread = 0.5 * (a.std + b.std)
    if spread == 0.0:
        return math.inf if diff > 0 else 0.0
    return diff / spread


def sof_scores(healthy, damaged):
    """Vectorised SOF for every column of two sample matrices."""
    h = np.asarray(healthy, dtype=float)
    d = np.asarray(damaged, dtype=float)
    if h.ndim != 2 or d.ndim != 2 or h.shape[1] != d.shape[1]:
        raise ValueError("dimension mismatch")
    if h.shape[0] < 2 or d.shape[0] < 2:
        raise ValueError("insufficient samples")
    if not (np.all(np.isfinite(h)) and np.all(np.isfinite(d))):
        raise ValueError("invalid stats")
    diff = np.abs(h.mean(axis=0) - d.mean(axis=0))
    spread = 0.5 * (h.std(axis=0, ddof=1) + d.std(axis=0, ddof=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = np.where(spread > 0, diff / np.where(spread > 0, spread, 1.0),
                          np.where(diff > 0, np.inf, 0.0))
    return scores


def top_k(scores, k):
    """Indices of the k largest scores, ties to the lower index."""
    scores = np.asarray(scores, dtype=float)
    if k > scores.size:
        raise ValueError("k exceeds dimension")
    if k < 1:
        raise ValueError("invalid k")
    # stable sort on the negated key keeps lower indices first among ties;
    # -inf sorts first so infinite scores lead
    order = np.argsort(-scores, kind="stable")
    return order[:k]


def rank_by_sof(healthy, damaged, k=DEFAULT_K):
    """Score every column of the two populations and keep the top `k`."""
    scores = sof_scores(healthy, damaged)
    return SofRanking(scores, top_k(scores, k))


def split_populations(inputs, labels):
    """Rows with an all-zero fault label versus every other row."""
    labels = np.asarray(labels, dtype=float).reshape(len(inputs), -1)
    healthy = np.all(labels == 0, axis=1)
    return np.asarray(inputs)[healthy], np.asarray(inputs)[~healthy]
