"""Corpus/sentence BLEU, TER, and forward/reverse delta tables.

BLEU follows the WMT configuration: case-sensitive, 13a tokenization,
exponential smoothing of zero n-gram matches, single reference. TER uses
the greedy block-shift search (span must match a reference span, a shift
must strictly reduce the edit distance) on top of unit-cost edit distance.

The edit-distance kernels come from the compiled `_kernels` extension when
available, else the pure-Python `_ter_py` module (set MTEVALKIT_NO_KERNELS=1
to force the fallback). Both expose the same functions and must agree
token-for-token; `benchmarks/bench_kernels.py` compares their speed.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import AlignmentError, ScoringError
from .tokenizer import TokenSequence

if os.environ.get("MTEVALKIT_NO_KERNELS") == "1":
    from . import _ter_py as _kern
else:
    try:
        from . import _kernels as _kern  # type: ignore[attr-defined]
    except ImportError:
        from . import _ter_py as _kern

KERNEL_BACKEND = _kern.BACKEND

BLEU_ORDER = 4

__all__ = [
    "BLEU_ORDER",
    "KERNEL_BACKEND",
    "BleuStats",
    "BleuReport",
    "TerReport",
    "DeltaRow",
    "DeltaTable",
    "bleu_stats",
    "bleu_score",
    "sentence_bleu",
    "corpus_stats",
    "corpus_bleu",
    "ter",
    "ter_exhaustive",
    "levenshtein",
    "delta_table",
]


def _tokens(seq: TokenSequence | Sequence[str]) -> tuple[str, ...]:
    if isinstance(seq, TokenSequence):
        return seq.tokens
    return tuple(seq)


@dataclass(frozen=True)
class BleuStats:
    """Per-segment sufficient statistics; addition is componentwise."""

    match: tuple[int, int, int, int]
    total: tuple[int, int, int, int]
    hyp_len: int
    ref_len: int

    def __add__(self, other: "BleuStats") -> "BleuStats":
        return BleuStats(
            match=tuple(a + b for a, b in zip(self.match, other.match)),
            total=tuple(a + b for a, b in zip(self.total, other.total)),
            hyp_len=self.hyp_len + other.hyp_len,
            ref_len=self.ref_len + other.ref_len,
        )

    __radd__ = __add__

    @classmethod
    def zero(cls) -> "BleuStats":
        return cls((0, 0, 0, 0), (0, 0, 0, 0), 0, 0)

    def to_dict(self) -> dict:
        return {
            "match": list(self.match),
            "total": list(self.total),
            "hyp_len": self.hyp_len,
            "ref_len": self.ref_len,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "BleuStats":
        return cls(
            match=tuple(int(x) for x in d["match"]),
            total=tuple(int(x) for x in d["total"]),
            hyp_len=int(d["hyp_len"]),
            ref_len=int(d["ref_len"]),
        )


@dataclass(frozen=True)
class BleuReport:
    """Aggregated BLEU with component precisions (fractions in [0, 1])."""

    score: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_len: int
    ref_len: int

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "precisions": list(self.precisions),
            "brevity_penalty": self.brevity_penalty,
            "hyp_len": self.hyp_len,
            "ref_len": self.ref_len,
        }


@dataclass(frozen=True)
class TerReport:
    """Translation edit rate: edits (incl. shifts) over reference length."""

    edits: int
    ref_len: int
    score: float

    def to_dict(self) -> dict:
        return {"edits": self.edits, "ref_len": self.ref_len, "score": self.score}


def bleu_stats(hyp: TokenSequence | Sequence[str], ref: TokenSequence | Sequence[str]) -> BleuStats:
    """Clipped n-gram matches and totals for one segment (orders 1..4)."""
    h, r = _tokens(hyp), _tokens(ref)
    match = [0] * BLEU_ORDER
    total = [0] * BLEU_ORDER
    for n in range(1, BLEU_ORDER + 1):
        hyp_ngrams = Counter(tuple(h[i : i + n]) for i in range(len(h) - n + 1))
        if not hyp_ngrams:
            continue
        ref_ngrams = Counter(tuple(r[i : i + n]) for i in range(len(r) - n + 1))
        total[n - 1] = sum(hyp_ngrams.values())
        match[n - 1] = sum(
            min(c, ref_ngrams[g]) for g, c in hyp_ngrams.items() if g in ref_ngrams
        )
    return BleuStats(tuple(match), tuple(total), len(h), len(r))


def bleu_score(stats: BleuStats) -> BleuReport:
    """Score aggregated statistics with exponential smoothing.

    Zero-match orders (with a nonzero total) use 1 / (s * total) where s
    doubles per smoothed order. Orders with zero totals leave precision 0,
    which drives the score to 0 (short degenerate corpora).
    """
    precisions = [0.0] * BLEU_ORDER
    smooth = 1.0
    for n in range(1, BLEU_ORDER + 1):
        m, t = stats.match[n - 1], stats.total[n - 1]
        if t == 0:
            continue
        if m == 0:
            smooth *= 2.0
            precisions[n - 1] = 1.0 / (smooth * t)
        else:
            precisions[n - 1] = m / t

    if stats.hyp_len >= stats.ref_len:
        bp = 1.0
    elif stats.hyp_len > 0:
        bp = math.exp(1.0 - stats.ref_len / stats.hyp_len)
    else:
        bp = 0.0

    log_sum = sum(math.log(p) if p > 0.0 else float("-inf") for p in precisions)
    score = 100.0 * bp * math.exp(log_sum / BLEU_ORDER)
    return BleuReport(score, tuple(precisions), bp, stats.hyp_len, stats.ref_len)


def sentence_bleu(
    hyp: TokenSequence | Sequence[str], ref: TokenSequence | Sequence[str]
) -> BleuReport:
    """BLEU of a single segment (same smoothing as the corpus score)."""
    return bleu_score(bleu_stats(hyp, ref))


def corpus_stats(
    hyps: Iterable[TokenSequence | Sequence[str]],
    refs: Iterable[TokenSequence | Sequence[str]],
) -> list[BleuStats]:
    """Per-segment statistics for aligned hypothesis/reference streams."""
    hyps, refs = list(hyps), list(refs)
    if len(hyps) != len(refs):
        raise AlignmentError(
            "hypothesis and reference streams differ in length: %d vs %d"
            % (len(hyps), len(refs))
        )
    return [bleu_stats(h, r) for h, r in zip(hyps, refs)]


def corpus_bleu(
    hyps: Iterable[TokenSequence | Sequence[str]],
    refs: Iterable[TokenSequence | Sequence[str]],
) -> BleuReport:
    per_item = corpus_stats(hyps, refs)
    agg = BleuStats.zero()
    for s in per_item:
        agg = agg + s
    return bleu_score(agg)


def _intern_pair(hyp: tuple[str, ...], ref: tuple[str, ...]) -> tuple[list[int], list[int]]:
    ids: dict[str, int] = {}
    h = [ids.setdefault(t, len(ids)) for t in hyp]
    r = [ids.setdefault(t, len(ids)) for t in ref]
    return h, r


def levenshtein(
    a: TokenSequence | Sequence[str], b: TokenSequence | Sequence[str]
) -> int:
    """Unit-cost token edit distance."""
    ai, bi = _intern_pair(_tokens(a), _tokens(b))
    return _kern.levenshtein_ints(ai, bi)


def ter(hyp: TokenSequence | Sequence[str], ref: TokenSequence | Sequence[str]) -> TerReport:
    """Translation edit rate of one segment.

    Greedy search: repeatedly apply the legal block shift (hypothesis span
    exactly matching a reference span) that most reduces the edit distance,
    one point per shift, then add the remaining edit distance.
    """
    h, r = _tokens(hyp), _tokens(ref)
    if not r:
        raise ScoringError("TER is undefined for an empty reference")
    hi, ri = _intern_pair(h, r)
    edits, _shifts = _kern.ter_greedy_ints(hi, ri)
    return TerReport(edits=edits, ref_len=len(r), score=edits / len(r))


def ter_exhaustive(
    hyp: TokenSequence | Sequence[str], ref: TokenSequence | Sequence[str]
) -> int:
    """Minimum shifts + edits over all legal shift sequences.

    Exponential; only usable on short segments. Kept as the reference
    answer the greedy search is validated against.
    """
    h, r = _tokens(hyp), _tokens(ref)
    if not r:
        raise ScoringError("TER is undefined for an empty reference")
    hi, ri = _intern_pair(h, r)
    return _kern.ter_optimal_ints(hi, ri)


@dataclass(frozen=True)
class DeltaRow:
    system: str
    fwd: float
    rev: float
    delta: float  # rev - fwd, from unrounded scores

    def display(self) -> tuple[str, str, str, str]:
        return (self.system, f"{self.fwd:.1f}", f"{self.rev:.1f}", f"{self.delta:.1f}")


@dataclass(frozen=True)
class DeltaTable:
    rows: tuple[DeltaRow, ...]

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"system": r.system, "fwd": r.fwd, "rev": r.rev, "delta": r.delta}
                for r in self.rows
            ]
        }


def _score_of(value: BleuReport | float) -> float:
    if isinstance(value, BleuReport):
        return value.score
    return float(value)


def delta_table(per_system: Mapping[str, tuple[BleuReport | float, BleuReport | float]]) -> DeltaTable:
    """Forward/reverse deltas per system, sorted by delta ascending.

    Deltas come from the unrounded scores; rounding to one decimal happens
    only in `DeltaRow.display`.
    """
    if not per_system:
        raise ScoringError("delta_table requires at least one system")
    rows = []
    for system, (fwd, rev) in per_system.items():
        f, r = _score_of(fwd), _score_of(rev)
        rows.append(DeltaRow(system=system, fwd=f, rev=r, delta=r - f))
    rows.sort(key=lambda row: (row.delta, row.system))
    return DeltaTable(rows=tuple(rows))
