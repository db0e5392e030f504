"""Test-suite data model, bitext filtering, and the LM disjointness guard.

A test suite is split into a *direct* partition (source-original sentences
X with translated references Ystar, optionally double translations
Xdoublestar) and a *reverse* partition (target-original Y with translated
sources Xstar, optionally Ydoublestar). Suites load from a JSON manifest
mapping partition -> role -> line-aligned text file.
"""

from __future__ import annotations

import json
import os
import unicodedata
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import AlignmentError, LoadError, ValidationError

PARTITIONS = ("direct", "reverse")

ROLE_DEPTH = {
    "X": 0,
    "Y": 0,
    "Xstar": 1,
    "Ystar": 1,
    "Xdoublestar": 2,
    "Ydoublestar": 2,
}

REQUIRED_ROLES = {
    "direct": frozenset({"X", "Ystar"}),
    "reverse": frozenset({"Xstar", "Y"}),
}

__all__ = [
    "PARTITIONS",
    "ROLE_DEPTH",
    "REQUIRED_ROLES",
    "Segment",
    "TestSuiteItem",
    "TestSuite",
    "BitextPair",
    "SystemOutput",
    "FilterReport",
    "OverlapReport",
    "load_suite",
    "filter_bitext",
    "disjointness_report",
    "script_predicate",
    "load_system_outputs",
]


@dataclass(frozen=True)
class Segment:
    """One text unit tagged with its content-origin language and depth.

    Depth 0 is an original sentence, 1 a translation of an original, 2 a
    translation of a translation.
    """

    id: str
    text: str
    origin_language: str
    translation_depth: int

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError("segment %s has empty text" % self.id)
        if self.translation_depth not in (0, 1, 2):
            raise ValidationError(
                "segment %s has invalid depth %r" % (self.id, self.translation_depth)
            )


@dataclass(frozen=True)
class TestSuiteItem:
    item_id: str
    partition: str
    slots: dict[str, Segment]

    def __post_init__(self):
        if self.partition not in PARTITIONS:
            raise ValidationError("unknown partition %r" % self.partition)
        missing = REQUIRED_ROLES[self.partition] - set(self.slots)
        if missing:
            raise ValidationError(
                "%s item %s is missing required roles %s"
                % (self.partition, self.item_id, sorted(missing))
            )
        for role, segment in self.slots.items():
            if role not in ROLE_DEPTH:
                raise ValidationError("unknown role %r in item %s" % (role, self.item_id))
            if segment.translation_depth != ROLE_DEPTH[role]:
                raise ValidationError(
                    "item %s role %s has depth %d, expected %d"
                    % (self.item_id, role, segment.translation_depth, ROLE_DEPTH[role])
                )
            if segment.id != self.item_id:
                raise ValidationError(
                    "segment id %s does not match item id %s" % (segment.id, self.item_id)
                )

    def texts(self, role: str) -> str:
        return self.slots[role].text


@dataclass(frozen=True)
class TestSuite:
    """Immutable, partitioned collection of test items."""

    direct: tuple[TestSuiteItem, ...]
    reverse: tuple[TestSuiteItem, ...]
    source_lang: str = "src"
    target_lang: str = "tgt"

    def items(self, partition: str) -> tuple[TestSuiteItem, ...]:
        if partition == "direct":
            return self.direct
        if partition == "reverse":
            return self.reverse
        raise ValidationError("unknown partition %r" % partition)

    def partition_sizes(self) -> dict[str, int]:
        return {"direct": len(self.direct), "reverse": len(self.reverse)}

    def roles(self, partition: str) -> list[str]:
        items = self.items(partition)
        return sorted(items[0].slots) if items else []

    def repartition(self) -> "TestSuite":
        """Reassign each item to the partition its roles imply.

        Items keep their relative order; items valid in their current
        partition stay put, so repartitioning is idempotent.
        """
        direct: list[TestSuiteItem] = []
        reverse: list[TestSuiteItem] = []
        for item in self.direct + self.reverse:
            roles = set(item.slots)
            if REQUIRED_ROLES[item.partition] <= roles:
                target = item.partition
            elif REQUIRED_ROLES["direct"] <= roles:
                target = "direct"
            elif REQUIRED_ROLES["reverse"] <= roles:
                target = "reverse"
            else:
                raise ValidationError(
                    "item %s fits neither partition (roles %s)"
                    % (item.item_id, sorted(roles))
                )
            bucket = direct if target == "direct" else reverse
            if target == item.partition:
                bucket.append(item)
            else:
                bucket.append(
                    TestSuiteItem(item_id=item.item_id, partition=target, slots=item.slots)
                )
        return TestSuite(
            direct=tuple(direct),
            reverse=tuple(reverse),
            source_lang=self.source_lang,
            target_lang=self.target_lang,
        )


def _read_lines(path: str, role: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            return [line.rstrip("\r\n") for line in fh]
    except OSError as exc:
        raise LoadError("cannot read file for role %s: %s (%s)" % (role, path, exc)) from exc


def load_suite(manifest_path: str) -> TestSuite:
    """Load a suite from a JSON manifest.

    Manifest shape::

        {"source_lang": "en", "target_lang": "de",
         "direct": {"X": "direct.X.txt", "Ystar": "direct.Ystar.txt"},
         "reverse": {"Xstar": "...", "Y": "..."}}

    Paths are relative to the manifest file. Line N of every role file in
    a partition forms item N; all files of a partition must have the same
    line count and no empty lines.
    """
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise LoadError("cannot read manifest %s: %s" % (manifest_path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError("manifest %s is not valid JSON: %s" % (manifest_path, exc)) from exc

    base = os.path.dirname(os.path.abspath(manifest_path))
    source_lang = manifest.get("source_lang", "src")
    target_lang = manifest.get("target_lang", "tgt")
    partitions: dict[str, list[TestSuiteItem]] = {"direct": [], "reverse": []}

    for partition in PARTITIONS:
        spec = manifest.get(partition)
        if not spec:
            continue
        unknown = set(spec) - set(ROLE_DEPTH)
        if unknown:
            raise ValidationError(
                "manifest %s partition %s has unknown roles %s"
                % (manifest_path, partition, sorted(unknown))
            )
        role_lines: dict[str, list[str]] = {}
        role_paths: dict[str, str] = {}
        for role in sorted(spec):
            path = os.path.join(base, spec[role])
            role_paths[role] = path
            role_lines[role] = _read_lines(path, role)
        first_role = sorted(spec)[0]
        n = len(role_lines[first_role])
        for role in sorted(spec):
            if len(role_lines[role]) != n:
                raise AlignmentError(
                    "partition %s: %s has %d lines but %s has %d lines"
                    % (
                        partition,
                        role_paths[first_role],
                        n,
                        role_paths[role],
                        len(role_lines[role]),
                    )
                )
        for role, lines in role_lines.items():
            for lineno, line in enumerate(lines, start=1):
                if not line.strip():
                    raise ValidationError(
                        "empty line %d in %s" % (lineno, role_paths[role])
                    )
        origin = source_lang if partition == "direct" else target_lang
        for i in range(n):
            item_id = "%s:%d" % (partition, i + 1)
            slots = {
                role: Segment(
                    id=item_id,
                    text=role_lines[role][i],
                    origin_language=origin,
                    translation_depth=ROLE_DEPTH[role],
                )
                for role in role_lines
            }
            partitions[partition].append(
                TestSuiteItem(item_id=item_id, partition=partition, slots=slots)
            )

    return TestSuite(
        direct=tuple(partitions["direct"]),
        reverse=tuple(partitions["reverse"]),
        source_lang=source_lang,
        target_lang=target_lang,
    )


@dataclass(frozen=True)
class BitextPair:
    """A sentence pair with whitespace token counts."""

    source: str
    target: str
    source_len: int
    target_len: int

    @classmethod
    def from_texts(cls, source: str, target: str) -> "BitextPair":
        return cls(
            source=source,
            target=target,
            source_len=len(source.split()),
            target_len=len(target.split()),
        )


@dataclass(frozen=True)
class SystemOutput:
    system_id: str
    item_id: str
    hypothesis: str


def load_system_outputs(
    system_id: str, path: str, item_ids: Sequence[str]
) -> list[SystemOutput]:
    """Read line-aligned system outputs for the given items."""
    lines = _read_lines(path, "system:%s" % system_id)
    # Tolerate one trailing blank line from a final newline.
    if lines and lines[-1] == "" and len(lines) == len(item_ids) + 1:
        lines = lines[:-1]
    if len(lines) != len(item_ids):
        raise AlignmentError(
            "system %s: %s has %d lines but the suite has %d items"
            % (system_id, path, len(lines), len(item_ids))
        )
    return [
        SystemOutput(system_id=system_id, item_id=item_id, hypothesis=line)
        for item_id, line in zip(item_ids, lines)
    ]


@dataclass
class FilterReport:
    """Removal counts per filtering rule; rules apply in listed order."""

    input_pairs: int = 0
    kept: int = 0
    removed: dict[str, int] = field(
        default_factory=lambda: {"max_len": 0, "ratio": 0, "lang": 0}
    )

    def to_dict(self) -> dict:
        return {
            "input_pairs": self.input_pairs,
            "kept": self.kept,
            "removed": dict(self.removed),
            "kept_fraction": (self.kept / self.input_pairs) if self.input_pairs else 0.0,
        }


def filter_bitext(
    pairs: Iterable[BitextPair],
    max_len: int = 250,
    max_ratio: float = 1.5,
    lang_predicate: Callable[[BitextPair], bool] | None = None,
) -> tuple[list[BitextPair], FilterReport]:
    """Keep pairs passing the length, ratio, and optional language rules.

    A removed pair is attributed to the first rule it violates, so the
    per-rule counts sum to input - kept. The ratio rule is symmetric:
    max(len)/min(len) must not exceed `max_ratio`.
    """
    if max_len < 1:
        raise ValidationError("max_len must be >= 1, got %r" % max_len)
    if not max_ratio > 0:
        raise ValidationError("max_ratio must be > 0, got %r" % max_ratio)
    kept: list[BitextPair] = []
    report = FilterReport()
    for pair in pairs:
        report.input_pairs += 1
        if pair.source_len > max_len or pair.target_len > max_len:
            report.removed["max_len"] += 1
            continue
        longer = max(pair.source_len, pair.target_len)
        shorter = min(pair.source_len, pair.target_len)
        if shorter == 0 or longer / shorter > max_ratio:
            report.removed["ratio"] += 1
            continue
        if lang_predicate is not None and not lang_predicate(pair):
            report.removed["lang"] += 1
            continue
        kept.append(pair)
        report.kept += 1
    return kept, report


def _script_fraction_ok(text: str, script: str, min_fraction: float) -> bool:
    alpha = [ch for ch in text if ch.isalpha()]
    if not alpha:
        return True
    hits = 0
    for ch in alpha:
        try:
            name = unicodedata.name(ch)
        except ValueError:
            continue
        if name.startswith(script):
            hits += 1
    return hits / len(alpha) >= min_fraction


def script_predicate(
    source_script: str, target_script: str, min_fraction: float = 0.5
) -> Callable[[BitextPair], bool]:
    """Heuristic language filter: the expected script must cover at least
    `min_fraction` of each side's alphabetic characters.

    Scripts are Unicode name prefixes ("LATIN", "CYRILLIC", ...). Pairs
    without alphabetic characters pass vacuously.
    """
    src = source_script.upper()
    tgt = target_script.upper()

    def predicate(pair: BitextPair) -> bool:
        return _script_fraction_ok(pair.source, src, min_fraction) and _script_fraction_ok(
            pair.target, tgt, min_fraction
        )

    return predicate


@dataclass(frozen=True)
class OverlapReport:
    """Exact-duplicate overlap of an LM corpus against an excluded corpus."""

    lm_lines: int
    overlapping: int
    fraction: float

    def to_dict(self) -> dict:
        return {
            "lm_lines": self.lm_lines,
            "overlapping": self.overlapping,
            "fraction": self.fraction,
        }


def _normalize_line(line: str) -> str:
    return " ".join(line.split())


def disjointness_report(
    lm_corpus: Iterable[str], excluded_corpus: Iterable[str]
) -> OverlapReport:
    """Count LM-corpus lines whose normalized form occurs in the excluded
    corpus (trimmed, whitespace-squeezed, case-preserved; exact matches
    only)."""
    excluded = {_normalize_line(line) for line in excluded_corpus}
    total = 0
    overlapping = 0
    for line in lm_corpus:
        total += 1
        if _normalize_line(line) in excluded:
            overlapping += 1
    return OverlapReport(
        lm_lines=total,
        overlapping=overlapping,
        fraction=(overlapping / total) if total else 0.0,
    )
