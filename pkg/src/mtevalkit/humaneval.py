"""Human direct-assessment ingestion, normalization, and sign tests.

Raters score translations 1-100; scores are z-normalized per rater (mean
and sample standard deviation over everything that rater judged), averaged
per sentence, then averaged per system. Pairwise fluency preferences are
tested with a one-sided exact binomial sign test, draws excluded.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateInputError, LoadError, ValidationError

ASSESSMENT_TYPES = ("source_based", "target_based")

TSV_FIELDS = ("rater_id", "system_id", "item_id", "score", "assessment_type", "round")

__all__ = [
    "ASSESSMENT_TYPES",
    "TSV_FIELDS",
    "Judgement",
    "NormalizedJudgement",
    "ZNormalizeResult",
    "SystemScore",
    "AgreementResult",
    "PairwisePreference",
    "read_judgements_tsv",
    "z_normalize",
    "aggregate_system_scores",
    "flag_low_agreement",
    "sign_test_pairwise",
]


@dataclass(frozen=True)
class Judgement:
    rater_id: str
    system_id: str
    item_id: str
    score: float
    assessment_type: str
    round_id: int = 0

    def __post_init__(self):
        if not 1.0 <= self.score <= 100.0:
            raise ValidationError(
                "score %r for (%s, %s, %s) outside [1, 100]"
                % (self.score, self.rater_id, self.system_id, self.item_id)
            )
        if self.assessment_type not in ASSESSMENT_TYPES:
            raise ValidationError(
                "unknown assessment type %r (expected one of %s)"
                % (self.assessment_type, ", ".join(ASSESSMENT_TYPES))
            )


@dataclass(frozen=True)
class NormalizedJudgement:
    rater_id: str
    system_id: str
    item_id: str
    z: float
    assessment_type: str
    round_id: int = 0


@dataclass
class ZNormalizeResult:
    judgements: list[NormalizedJudgement]
    flagged_raters: list[str]  # zero variance or a single judgement

    def to_dict(self) -> dict:
        return {
            "judgements": len(self.judgements),
            "flagged_raters": list(self.flagged_raters),
            "std_divisor": "n-1",
        }


@dataclass(frozen=True)
class SystemScore:
    system_id: str
    z_score: float
    n_items: int

    def to_dict(self) -> dict:
        return {"system_id": self.system_id, "z_score": self.z_score, "n_items": self.n_items}


def read_judgements_tsv(lines: Iterable[str]) -> list[Judgement]:
    """Parse the judgements TSV (header row required)."""
    reader = csv.DictReader(lines, delimiter="\t")
    if reader.fieldnames is None:
        raise LoadError("judgements TSV is empty")
    missing = set(TSV_FIELDS) - set(reader.fieldnames)
    if missing:
        raise ValidationError(
            "judgements TSV is missing columns: %s" % ", ".join(sorted(missing))
        )
    out = []
    for lineno, row in enumerate(reader, start=2):
        try:
            score = float(row["score"])
            round_id = int(row["round"])
        except (TypeError, ValueError) as exc:
            raise ValidationError("bad numeric field on line %d: %s" % (lineno, exc)) from exc
        out.append(
            Judgement(
                rater_id=row["rater_id"],
                system_id=row["system_id"],
                item_id=row["item_id"],
                score=score,
                assessment_type=row["assessment_type"],
                round_id=round_id,
            )
        )
    return out


def z_normalize(judgements: Sequence[Judgement]) -> ZNormalizeResult:
    """Normalize each rater's scores to zero mean and unit sample std.

    Raters with a single judgement or zero variance get z = 0 everywhere
    and are flagged. Input order is preserved.
    """
    by_rater: dict[str, list[float]] = {}
    for j in judgements:
        by_rater.setdefault(j.rater_id, []).append(j.score)

    params: dict[str, tuple[float, float] | None] = {}
    flagged = []
    for rater in by_rater:
        scores = by_rater[rater]
        if len(scores) < 2:
            params[rater] = None
            flagged.append(rater)
            continue
        std = statistics.stdev(scores)
        if std == 0.0:
            params[rater] = None
            flagged.append(rater)
            continue
        params[rater] = (statistics.fmean(scores), std)

    normalized = []
    for j in judgements:
        p = params[j.rater_id]
        z = 0.0 if p is None else (j.score - p[0]) / p[1]
        normalized.append(
            NormalizedJudgement(
                rater_id=j.rater_id,
                system_id=j.system_id,
                item_id=j.item_id,
                z=z,
                assessment_type=j.assessment_type,
                round_id=j.round_id,
            )
        )
    return ZNormalizeResult(judgements=normalized, flagged_raters=sorted(set(flagged)))


def aggregate_system_scores(
    normalized: Sequence[NormalizedJudgement],
) -> list[SystemScore]:
    """Average z per (system, item), then per system over its items.

    Returned scores are sorted best-first (z descending, then system id).
    """
    per_sentence: dict[tuple[str, str], list[float]] = {}
    for j in normalized:
        per_sentence.setdefault((j.system_id, j.item_id), []).append(j.z)

    per_system: dict[str, list[float]] = {}
    for (system_id, _item_id), zs in per_sentence.items():
        per_system.setdefault(system_id, []).append(statistics.fmean(zs))

    scores = [
        SystemScore(
            system_id=system_id,
            z_score=statistics.fmean(means),
            n_items=len(means),
        )
        for system_id, means in per_system.items()
    ]
    scores.sort(key=lambda s: (-s.z_score, s.system_id))
    return scores


def per_item_means(
    normalized: Sequence[NormalizedJudgement], system_id: str
) -> dict[str, float]:
    """Per-sentence mean z for one system, keyed by item id."""
    per_sentence: dict[str, list[float]] = {}
    for j in normalized:
        if j.system_id == system_id:
            per_sentence.setdefault(j.item_id, []).append(j.z)
    return {item: statistics.fmean(zs) for item, zs in per_sentence.items()}


@dataclass
class AgreementResult:
    flagged: list[tuple[str, str]]  # (system_id, item_id), to be re-rated
    skipped: list[tuple[str, str]]  # groups not of size 3

    def to_dict(self) -> dict:
        return {
            "flagged": [list(t) for t in self.flagged],
            "skipped": [list(t) for t in self.skipped],
        }


def flag_low_agreement(
    judgements: Sequence[Judgement], spread: float = 30.0
) -> AgreementResult:
    """Flag (system, item) groups whose three raw scores differ by more
    than `spread` points (strictly); groups of any other size are skipped.
    """
    groups: dict[tuple[str, str], list[float]] = {}
    for j in judgements:
        groups.setdefault((j.system_id, j.item_id), []).append(j.score)
    flagged = []
    skipped = []
    for key in sorted(groups):
        scores = groups[key]
        if len(scores) != 3:
            skipped.append(key)
            continue
        if max(scores) - min(scores) > spread:
            flagged.append(key)
    return AgreementResult(flagged=flagged, skipped=skipped)


@dataclass(frozen=True)
class PairwisePreference:
    wins_a: int
    wins_b: int
    draws: int
    p_value: float

    def to_dict(self) -> dict:
        return {
            "wins_a": self.wins_a,
            "wins_b": self.wins_b,
            "draws": self.draws,
            "p_value": self.p_value,
            "test": "one-sided exact binomial, draws excluded",
        }


def sign_test_pairwise(wins_a: int, wins_b: int, draws: int = 0) -> PairwisePreference:
    """One-sided exact sign test: P(X >= wins_a) for X ~ Bin(a + b, 1/2).

    Draws are excluded from the trials. All draws -> the test is undefined.
    """
    if min(wins_a, wins_b, draws) < 0:
        raise ValidationError("preference counts must be non-negative")
    n = wins_a + wins_b
    if n == 0:
        raise DegenerateInputError("sign test undefined: no non-draw judgements")
    tail = sum(math.comb(n, k) for k in range(wins_a, n + 1))
    return PairwisePreference(
        wins_a=wins_a, wins_b=wins_b, draws=draws, p_value=tail / 2**n
    )
