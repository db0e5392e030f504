"""Independent reference implementations used only to pin expected values.

Deliberately written with different algorithms/data structures than the
package (explicit loops, recursion with memoization, exact rationals) so
that agreement is meaningful. Keep this module free of imports from
mtevalkit.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

import numpy as np


# ---------------------------------------------------------------------------
# BLEU


def ngram_counts(tokens, n):
    """Count n-grams by explicit enumeration."""
    counts = {}
    for i in range(len(tokens) - n + 1):
        g = tuple(tokens[i : i + n])
        counts[g] = counts.get(g, 0) + 1
    return counts


def clipped_matches(hyp_tokens, ref_tokens, n):
    hc = ngram_counts(hyp_tokens, n)
    rc = ngram_counts(ref_tokens, n)
    match = 0
    total = 0
    for g, c in hc.items():
        total += c
        if g in rc:
            match += min(c, rc[g])
    return match, total


def corpus_bleu_oracle(hyp_token_lists, ref_token_lists):
    """Corpus BLEU, hand-executed: sum stats per order, smooth, combine."""
    assert len(hyp_token_lists) == len(ref_token_lists)
    match = [0, 0, 0, 0]
    total = [0, 0, 0, 0]
    hyp_len = 0
    ref_len = 0
    for h, r in zip(hyp_token_lists, ref_token_lists):
        hyp_len += len(h)
        ref_len += len(r)
        for n in (1, 2, 3, 4):
            m, t = clipped_matches(h, r, n)
            match[n - 1] += m
            total[n - 1] += t

    smooth = 1
    log_precisions = []
    for n in (1, 2, 3, 4):
        if total[n - 1] == 0:
            log_precisions.append(float("-inf"))
        elif match[n - 1] == 0:
            smooth *= 2
            log_precisions.append(math.log(1.0 / (smooth * total[n - 1])))
        else:
            log_precisions.append(math.log(match[n - 1] / total[n - 1]))

    if hyp_len == 0:
        return 0.0
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * bp * math.exp(sum(log_precisions) / 4.0)


def sentence_bleu_oracle(hyp_tokens, ref_tokens):
    return corpus_bleu_oracle([hyp_tokens], [ref_tokens])


# ---------------------------------------------------------------------------
# Edit distance and TER


def levenshtein_oracle(a, b):
    """Full-matrix edit distance."""
    la, lb = len(a), len(b)
    d = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(la + 1):
        d[i][0] = i
    for j in range(lb + 1):
        d[0][j] = j
    for i in range(1, la + 1):
        for j in range(1, lb + 1):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1),
            )
    return d[la][lb]


def ter_optimal_oracle(hyp, ref):
    """Minimum shifts + edits by depth-first search over shift sequences.

    A shift may move any contiguous hypothesis span that exactly matches a
    reference span to any other position, at cost 1. Exponential; keep the
    inputs short.
    """
    ref = tuple(ref)

    def lev(a):
        @functools.lru_cache(maxsize=None)
        def d(i, j):
            if i == 0:
                return j
            if j == 0:
                return i
            return min(
                d(i - 1, j) + 1,
                d(i, j - 1) + 1,
                d(i - 1, j - 1) + (0 if a[i - 1] == ref[j - 1] else 1),
            )
        return d(len(a), len(ref))

    best = [lev(tuple(hyp))]
    cheapest: dict[tuple, int] = {}

    def moves(state):
        n = len(state)
        for i in range(n):
            for j in range(i + 1, n + 1):
                span = state[i:j]
                if not any(
                    ref[s : s + len(span)] == span
                    for s in range(len(ref) - len(span) + 1)
                ):
                    break
                rest = state[:i] + state[j:]
                for k in range(len(rest) + 1):
                    if k == i:
                        continue
                    yield rest[:k] + span + rest[k:]

    def go(state, shifts):
        if shifts >= best[0]:
            return
        if cheapest.get(state, 10**9) <= shifts:
            return
        cheapest[state] = shifts
        for nxt in moves(state):
            cost = shifts + 1 + lev(nxt)
            if cost < best[0]:
                best[0] = cost
            go(nxt, shifts + 1)

    go(tuple(hyp), 0)
    return best[0]


# ---------------------------------------------------------------------------
# Statistics


def binom_tail_exact(wins, n) -> Fraction:
    """P(X >= wins) for X ~ Binomial(n, 1/2), exact rational."""
    num = 0
    for k in range(wins, n + 1):
        num += math.comb(n, k)
    return Fraction(num, 2**n)


def fisher_ci_oracle(r, n, confidence=0.95):
    """Direct evaluation of the Fisher-transform interval."""
    from statistics import NormalDist

    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    center = 0.5 * math.log((1 + r) / (1 - r))
    half = z / math.sqrt(n - 3)

    def back(v):
        e = math.exp(2 * v)
        return (e - 1) / (e + 1)

    return back(center - half), back(center + half)


def paired_bootstrap_oracle(items_a, items_b, scorer, n_resamples, seed):
    """Reimplementation of the documented resampling contract:
    resample i draws its indices from PCG64(SeedSequence(seed, spawn_key=(i,))).
    """
    n = len(items_a)
    deltas = []
    for i in range(n_resamples):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(i,))))
        idx = rng.integers(0, n, size=n)
        a = scorer([items_a[j] for j in idx])
        b = scorer([items_b[j] for j in idx])
        deltas.append(a - b)
    deltas = np.asarray(deltas)
    low, high = np.percentile(deltas, [2.5, 97.5], method="linear")
    return {
        "delta_mean": float(deltas.mean()),
        "p_value": float(np.count_nonzero(deltas <= 0.0)) / n_resamples,
        "ci_low": float(low),
        "ci_high": float(high),
    }
