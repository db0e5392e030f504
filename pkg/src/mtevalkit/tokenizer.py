"""mteval-v13a compatible normalization and tokenization.

This is the "13a" scheme used for WMT-style case-sensitive BLEU. The rule
set is frozen by a committed golden file (tests/data/tok13a_golden.json);
any change that alters golden outputs is a breaking change.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

__all__ = ["TokenSequence", "tok13a", "tokenize_lines"]

# Splittable ASCII punctuation/symbol ranges: {-~ [-` space-& (-+ :-@ and /.
_PUNCT = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
# Period/comma split off unless attached to a digit on the relevant side.
_NONDIGIT_PUNCT = re.compile(r"([^0-9])([\.,])")
_PUNCT_NONDIGIT = re.compile(r"([\.,])([^0-9])")
_DIGIT_DASH = re.compile(r"([0-9])(-)")


@dataclass(frozen=True)
class TokenSequence:
    """Tokens produced by :func:`tok13a`, plus the original text."""

    tokens: tuple[str, ...]
    source_text: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def joined(self) -> str:
        return " ".join(self.tokens)


def _normalize(text: str) -> str:
    norm = text
    norm = norm.replace("<skipped>", "")
    norm = norm.replace("-\n", "")
    norm = norm.replace("\n", " ")
    norm = norm.replace("&quot;", '"')
    norm = norm.replace("&amp;", "&")
    norm = norm.replace("&lt;", "<")
    norm = norm.replace("&gt;", ">")
    return norm


def tok13a(text: str) -> TokenSequence:
    """Normalize and tokenize one segment.

    Case is preserved. Non-ASCII punctuation is deliberately left attached;
    only the ASCII ranges listed in ``_PUNCT`` are split.
    """
    norm = " {} ".format(_normalize(text))
    norm = _PUNCT.sub(r" \1 ", norm)
    norm = _NONDIGIT_PUNCT.sub(r"\1 \2 ", norm)
    norm = _PUNCT_NONDIGIT.sub(r" \1 \2", norm)
    norm = _DIGIT_DASH.sub(r"\1 \2 ", norm)
    return TokenSequence(tokens=tuple(norm.split()), source_text=text)


def tokenize_lines(lines: Iterable[str]) -> list[TokenSequence]:
    """Tokenize an iterable of segments, stripping trailing newlines."""
    return [tok13a(line.rstrip("\r\n")) for line in lines]
