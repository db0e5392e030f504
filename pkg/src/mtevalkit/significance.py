"""Paired bootstrap resampling and correlation confidence intervals.

Resampling draws item indices with replacement. Every resample derives its
own PCG64 substream from (seed, resample index), so results are bit-identical
regardless of worker count or execution order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateInputError, ValidationError
from .metrics import BleuStats, bleu_score

# Default seed for every randomized subcommand; reports echo it.
DEFAULT_SEED = 12345

GENERATOR_NAME = "numpy-pcg64"

__all__ = [
    "DEFAULT_SEED",
    "GENERATOR_NAME",
    "BootstrapResult",
    "paired_bootstrap",
    "bleu_scorer",
    "mean_scorer",
    "pearson_fisher_ci",
    "fisher_interval",
]


@dataclass(frozen=True)
class BootstrapResult:
    delta_mean: float
    p_value: float
    ci_low: float
    ci_high: float
    n_resamples: int
    seed: int
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "delta_mean": self.delta_mean,
            "p_value": self.p_value,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "n_resamples": self.n_resamples,
            "seed": self.seed,
            "metadata": dict(self.metadata),
        }


def _resample_rng(seed: int, index: int) -> np.random.Generator:
    # Substream derivation is part of the determinism contract: the i-th
    # resample always sees PCG64(SeedSequence(seed, spawn_key=(i,))).
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def paired_bootstrap(
    per_item_a: Sequence,
    per_item_b: Sequence,
    scorer: Callable[[list], float],
    n_resamples: int = 1000,
    seed: int = DEFAULT_SEED,
    n_threads: int = 1,
) -> BootstrapResult:
    """Paired bootstrap over items; one-sided p-value for "A better".

    delta_i = scorer(resampled A) - scorer(resampled B) on shared indices;
    p = fraction of resamples with delta_i <= 0. The 95% interval is the
    linear-interpolation percentile interval of the resampled deltas.
    """
    if len(per_item_a) != len(per_item_b):
        raise ValidationError(
            "paired bootstrap needs equal lengths, got %d vs %d"
            % (len(per_item_a), len(per_item_b))
        )
    n_items = len(per_item_a)
    if n_items < 2:
        raise ValidationError("paired bootstrap needs at least 2 items")
    if n_resamples < 1:
        raise ValidationError("n_resamples must be >= 1")

    deltas = np.empty(n_resamples, dtype=np.float64)

    def run(index: int) -> None:
        rng = _resample_rng(seed, index)
        idx = rng.integers(0, n_items, size=n_items)
        sample_a = [per_item_a[j] for j in idx]
        sample_b = [per_item_b[j] for j in idx]
        deltas[index] = scorer(sample_a) - scorer(sample_b)

    if n_threads <= 1:
        for i in range(n_resamples):
            run(i)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(run, range(n_resamples)))

    ci_low, ci_high = np.percentile(deltas, [2.5, 97.5], method="linear")
    return BootstrapResult(
        delta_mean=float(deltas.mean()),
        p_value=float(np.count_nonzero(deltas <= 0.0)) / n_resamples,
        ci_low=float(ci_low),
        ci_high=float(ci_high),
        n_resamples=n_resamples,
        seed=seed,
        metadata={
            "generator": GENERATOR_NAME,
            "substream": "SeedSequence(seed, spawn_key=(resample_index,))",
            "resampling_unit": "item",
            "n_items": n_items,
        },
    )


def bleu_scorer(items: Sequence[BleuStats]) -> float:
    """Corpus BLEU of a multiset of per-item sufficient statistics."""
    match = [0, 0, 0, 0]
    total = [0, 0, 0, 0]
    hyp_len = 0
    ref_len = 0
    for s in items:
        for i in range(4):
            match[i] += s.match[i]
            total[i] += s.total[i]
        hyp_len += s.hyp_len
        ref_len += s.ref_len
    return bleu_score(BleuStats(tuple(match), tuple(total), hyp_len, ref_len)).score


def mean_scorer(items: Sequence[float]) -> float:
    """Mean of per-item scalar scores (human per-sentence z-means)."""
    return math.fsum(items) / len(items)


def fisher_interval(r: float, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Fisher-transform confidence interval for a Pearson correlation."""
    if n <= 3:
        raise DegenerateInputError("Fisher interval needs n > 3, got %d" % n)
    if not -1.0 < r < 1.0:
        raise DegenerateInputError("Fisher interval undefined for |r| >= 1 (r = %r)" % r)
    if not 0.0 < confidence < 1.0:
        raise ValidationError("confidence must be in (0, 1), got %r" % confidence)
    z = NormalDist().inv_cdf((1.0 + confidence) / 2.0)
    margin = z / math.sqrt(n - 3)
    center = math.atanh(r)
    return math.tanh(center - margin), math.tanh(center + margin)


def pearson_fisher_ci(
    paired_scores: Sequence[tuple[float, float]], confidence: float = 0.95
) -> tuple[float, float, float]:
    """Pearson r with a Fisher-transform confidence interval.

    Requires n >= 4, non-degenerate variance on both sides, and |r| < 1.
    """
    n = len(paired_scores)
    if n < 4:
        raise DegenerateInputError("correlation CI needs at least 4 pairs, got %d" % n)
    xs = np.asarray([p[0] for p in paired_scores], dtype=np.float64)
    ys = np.asarray([p[1] for p in paired_scores], dtype=np.float64)
    xd = xs - xs.mean()
    yd = ys - ys.mean()
    sx = float(np.sqrt(np.dot(xd, xd)))
    sy = float(np.sqrt(np.dot(yd, yd)))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInputError("correlation undefined: zero variance input")
    r = float(np.dot(xd, yd) / (sx * sy))
    if not -1.0 < r < 1.0:
        raise DegenerateInputError("correlation CI undefined for |r| >= 1 (r = %r)" % r)
    low, high = fisher_interval(r, n, confidence)
    return r, low, high
