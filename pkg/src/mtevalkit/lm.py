"""Interpolated modified Kneser-Ney n-gram language models.

Two fluency protocols sit on top of this module: per-system LMs trained on
system outputs and scored on reference portions, and a single LM trained
on held-out monolingual text scoring competing system outputs. Both only
need a consistent relative scorer, which an exactly-specified n-gram model
provides.

Counting pads each sentence with order-1 begin markers and one end marker
and slides windows of every order over the padded sequence. Estimation
uses continuation counts below the top order (begin-marker-initial
n-grams keep raw counts), three count-dependent discounts per order, and
interpolation all the way down to a uniform distribution over the
vocabulary, so every conditional distribution sums to exactly 1 and every
vocabulary token has positive probability in every context.

Perplexity accumulates log10 probabilities (matching the ARPA on-disk
representation) and reports exp-domain values.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import LoadError, ScoringError, ValidationError
from .tokenizer import tok13a

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
_MARKERS = (BOS, EOS, UNK)

MAX_ORDER = 6
_LN10 = math.log(10.0)

__all__ = [
    "BOS",
    "EOS",
    "UNK",
    "CountTable",
    "NGramModel",
    "PerplexityReport",
    "FluencyReport",
    "count_ngrams",
    "estimate_kn",
    "perplexity",
    "fluency_compare",
    "train_model",
]


def _split(line: str, tokenization: str) -> list[str]:
    if tokenization == "whitespace":
        return line.split()
    if tokenization == "13a":
        return list(tok13a(line).tokens)
    raise ValidationError("unknown tokenization %r" % (tokenization,))


@dataclass
class CountTable:
    """Raw n-gram counts for all orders 1..order, with boundary markers."""

    order: int
    counts: dict[tuple[str, ...], int] = field(default_factory=dict)
    sentences: int = 0
    tokenization: str = "whitespace"

    def add_sentence(self, tokens: Sequence[str]) -> None:
        padded = [BOS] * (self.order - 1) + list(tokens) + [EOS]
        counts = self.counts
        for n in range(1, self.order + 1):
            for i in range(len(padded) - n + 1):
                g = tuple(padded[i : i + n])
                counts[g] = counts.get(g, 0) + 1
        self.sentences += 1

    def merge(self, other: "CountTable") -> "CountTable":
        """Merge counts from another shard (associative, order-independent)."""
        if self.order != other.order:
            raise ValidationError(
                "cannot merge count tables of order %d and %d" % (self.order, other.order)
            )
        merged = dict(self.counts)
        for g, c in other.counts.items():
            merged[g] = merged.get(g, 0) + c
        return CountTable(
            order=self.order,
            counts=merged,
            sentences=self.sentences + other.sentences,
            tokenization=self.tokenization,
        )

    def of_order(self, n: int) -> dict[tuple[str, ...], int]:
        return {g: c for g, c in self.counts.items() if len(g) == n}


def count_ngrams(
    corpus: Iterable[str], order: int, tokenization: str = "whitespace"
) -> CountTable:
    """Count all n-grams up to `order` over a line-delimited corpus.

    Blank lines are skipped; a corpus with no non-blank line is an error.
    """
    if not 1 <= order <= MAX_ORDER:
        raise ValidationError("order must be in [1, %d], got %r" % (MAX_ORDER, order))
    table = CountTable(order=order, tokenization=tokenization)
    for line in corpus:
        tokens = _split(line.rstrip("\r\n"), tokenization)
        if not tokens:
            continue
        table.add_sentence(tokens)
    if table.sentences == 0:
        raise ValidationError("empty corpus: no non-blank sentences")
    return table


def _counts_of_counts(values: Iterable[int]) -> tuple[int, int, int, int]:
    cc = [0, 0, 0, 0]
    for v in values:
        if 1 <= v <= 4:
            cc[v - 1] += 1
    return tuple(cc)


def _estimate_discounts(cc: tuple[int, int, int, int]) -> tuple[tuple[float, float, float], list[str]]:
    """Three discounts from counts-of-counts; 0.5 for unusable slots."""
    n1, n2, n3, n4 = cc
    y = n1 / (n1 + 2.0 * n2) if (n1 + 2 * n2) > 0 else None
    slots: list[float] = []
    fallbacks: list[str] = []
    specs = (
        ("D1", n1, lambda: 1.0 - 2.0 * y * n2 / n1),
        ("D2", n2, lambda: 2.0 - 3.0 * y * n3 / n2),
        ("D3+", n3, lambda: 3.0 - 4.0 * y * n4 / n3),
    )
    for name, divisor, formula in specs:
        if y is None or divisor == 0:
            slots.append(0.5)
            fallbacks.append(name)
            continue
        value = formula()
        if value <= 0.0 or value > 3.0:
            slots.append(0.5)
            fallbacks.append(name)
        else:
            slots.append(value)
    return (slots[0], slots[1], slots[2]), fallbacks


def _discount_for(discounts: tuple[float, float, float], count: int) -> float:
    if count <= 0:
        return 0.0
    return discounts[min(count, 3) - 1]


@dataclass
class PerplexityReport:
    """Per-token scoring summary. `total_neg_log_prob` is in natural log."""

    token_count: int
    total_neg_log_prob: float
    ppl: float
    oov_rate: float
    sentences: int
    tokenization: str

    def to_dict(self) -> dict:
        return {
            "token_count": self.token_count,
            "total_neg_log_prob": self.total_neg_log_prob,
            "ppl": self.ppl,
            "oov_rate": self.oov_rate,
            "sentences": self.sentences,
            "tokenization": self.tokenization,
        }


@dataclass
class NGramModel:
    """ARPA-style model: interpolated probabilities plus backoff weights.

    `probabilities` maps each stored n-gram to its conditional probability
    (interpolation with lower orders already applied); `backoffs` maps each
    context to the weight applied when a continuation is not stored.
    """

    order: int
    vocab: frozenset[str]
    probabilities: dict[tuple[str, ...], float]
    backoffs: dict[tuple[str, ...], float]
    discounts: dict[int, tuple[float, float, float]]
    metadata: dict = field(default_factory=dict)

    @classmethod
    def uniform(cls, tokens: Sequence[str]) -> "NGramModel":
        """Closed-vocabulary uniform unigram model over `tokens`.

        Include the end marker in `tokens` if sentences are to be scored;
        every scored token then costs exactly -log10(1/len(tokens)).
        """
        toks = list(dict.fromkeys(tokens))
        if not toks:
            raise ValidationError("uniform model needs a non-empty vocabulary")
        p = 1.0 / len(toks)
        return cls(
            order=1,
            vocab=frozenset(toks),
            probabilities={(t,): p for t in toks},
            backoffs={},
            discounts={},
            metadata={"kind": "uniform", "vocab_size": len(toks)},
        )

    def _map_token(self, token: str) -> str:
        if token in self.vocab:
            return token
        if UNK in self.vocab:
            return UNK
        raise ScoringError(
            "token %r is out of vocabulary and the model has no %s entry" % (token, UNK)
        )

    def logprob10(self, context: Sequence[str], word: str) -> float:
        """log10 p(word | context); both sides are unk-mapped first."""
        ctx = tuple(self._map_token(t) for t in context)
        return self._logprob10_mapped(ctx, self._map_token(word))

    def _logprob10_mapped(self, context: tuple[str, ...], word: str) -> float:
        if self.order > 1:
            ctx = context[-(self.order - 1) :]
        else:
            ctx = ()
        acc = 0.0
        while True:
            g = ctx + (word,)
            p = self.probabilities.get(g)
            if p is not None:
                return acc + math.log10(p)
            if not ctx:
                raise ScoringError("no unigram entry for %r" % (word,))
            bo = self.backoffs.get(ctx)
            if bo is not None:
                acc += math.log10(bo)
            ctx = ctx[1:]

    def prob(self, context: Sequence[str], word: str) -> float:
        return 10.0 ** self.logprob10(context, word)

    def save_arpa(self, path: str) -> None:
        """Write the model in the textual ARPA format (log10 values)."""
        orders = range(1, self.order + 1)
        by_order: dict[int, list[tuple[tuple[str, ...], float]]] = {n: [] for n in orders}
        for g, p in self.probabilities.items():
            by_order[len(g)].append((g, p))
        for n in orders:
            by_order[n].sort()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\\data\\\n")
            for n in orders:
                fh.write("ngram %d=%d\n" % (n, len(by_order[n])))
            for n in orders:
                fh.write("\n\\%d-grams:\n" % n)
                for g, p in by_order[n]:
                    line = "%.12g\t%s" % (math.log10(p), " ".join(g))
                    bo = self.backoffs.get(g)
                    if bo is not None:
                        line += "\t%.12g" % math.log10(bo)
                    fh.write(line + "\n")
            fh.write("\n\\end\\\n")

    @classmethod
    def load_arpa(cls, path: str) -> "NGramModel":
        probabilities: dict[tuple[str, ...], float] = {}
        backoffs: dict[tuple[str, ...], float] = {}
        declared: dict[int, int] = {}
        section = 0
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise LoadError("cannot open ARPA file %s: %s" % (path, exc)) from exc
        with fh:
            for raw in fh:
                line = raw.rstrip("\r\n")
                if not line or line == "\\data\\":
                    continue
                if line == "\\end\\":
                    break
                if line.startswith("ngram "):
                    lhs, _, rhs = line[len("ngram ") :].partition("=")
                    declared[int(lhs)] = int(rhs)
                    continue
                if line.startswith("\\") and line.endswith("-grams:"):
                    section = int(line[1 : -len("-grams:")])
                    continue
                if section == 0:
                    raise LoadError("unexpected line outside any section: %r" % line)
                parts = line.split("\t")
                if len(parts) == 2:
                    logp, gram = parts
                    bo = None
                elif len(parts) == 3:
                    logp, gram, bo = parts
                else:
                    raise LoadError("malformed ARPA line: %r" % line)
                g = tuple(gram.split(" "))
                if len(g) != section:
                    raise LoadError("%d-gram line holds %d tokens: %r" % (section, len(g), line))
                probabilities[g] = 10.0 ** float(logp)
                if bo is not None:
                    backoffs[g] = 10.0 ** float(bo)
        if not probabilities:
            raise LoadError("no n-gram entries found in %s" % path)
        order = max(declared) if declared else max(len(g) for g in probabilities)
        vocab = frozenset(g[0] for g in probabilities if len(g) == 1)
        return cls(
            order=order,
            vocab=vocab,
            probabilities=probabilities,
            backoffs=backoffs,
            discounts={},
            metadata={"kind": "arpa", "source": path},
        )


def estimate_kn(counts: CountTable, unk_threshold: int = 2) -> NGramModel:
    """Estimate an interpolated modified Kneser-Ney model from counts.

    Word types whose corpus count is below `unk_threshold` are replaced by
    the unk symbol before estimation. Discount slots that cannot be
    estimated from counts-of-counts fall back to 0.5 and are listed in the
    model metadata.
    """
    if counts.sentences < 1:
        raise ValidationError("counts are degenerate: no sentences")
    k = counts.order

    word_counts = {
        g[0]: c for g, c in counts.counts.items() if len(g) == 1 and g[0] not in _MARKERS
    }
    vocab = {w for w, c in word_counts.items() if c >= unk_threshold}
    vocab.update(_MARKERS)

    def remap(token: str) -> str:
        return token if token in vocab else UNK

    remapped: dict[tuple[str, ...], int] = defaultdict(int)
    for g, c in counts.counts.items():
        remapped[tuple(remap(t) for t in g)] += c

    by_order: dict[int, dict[tuple[str, ...], int]] = {n: {} for n in range(1, k + 1)}
    for g, c in remapped.items():
        by_order[len(g)][g] = c

    # Adjusted counts: raw at the top order, continuation counts below,
    # except begin-marker-initial n-grams which keep raw counts (they
    # cannot be freely extended to the left).
    adjusted: dict[int, dict[tuple[str, ...], int]] = {k: dict(by_order[k])}
    for n in range(k - 1, 0, -1):
        table: dict[tuple[str, ...], int] = defaultdict(int)
        for g2 in by_order[n + 1]:
            table[g2[1:]] += 1
        for g, c in by_order[n].items():
            if g[0] == BOS and len(g) >= 2:
                table[g] = c
            elif g not in table:
                table[g] = 0
        adjusted[n] = dict(table)

    discounts: dict[int, tuple[float, float, float]] = {}
    fallback_log: dict[int, list[str]] = {}
    for n in range(1, k + 1):
        cc = _counts_of_counts(adjusted[n].values())
        discounts[n], fell = _estimate_discounts(cc)
        if fell:
            fallback_log[n] = fell

    probabilities: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}

    # Unigrams interpolate with the uniform distribution so that every
    # vocabulary token has positive probability under every context.
    uni = adjusted[1]
    d1 = discounts[1]
    denom1 = float(sum(uni.values()))
    if denom1 <= 0:
        raise ValidationError("no unigram mass; corpus too degenerate to estimate")
    n1_, n2_, n3p = 0, 0, 0
    for c in uni.values():
        if c == 1:
            n1_ += 1
        elif c == 2:
            n2_ += 1
        elif c >= 3:
            n3p += 1
    gamma1 = (d1[0] * n1_ + d1[1] * n2_ + d1[2] * n3p) / denom1
    v_size = len(vocab)
    for w in sorted(vocab):
        a = uni.get((w,), 0)
        base = max(a - _discount_for(d1, a), 0.0) / denom1
        probabilities[(w,)] = base + gamma1 / v_size

    for n in range(2, k + 1):
        dn = discounts[n]
        contexts: dict[tuple[str, ...], list[tuple[tuple[str, ...], int]]] = defaultdict(list)
        for g, a in adjusted[n].items():
            contexts[g[:-1]].append((g, a))
        for u, entries in contexts.items():
            denom = float(sum(a for _, a in entries))
            if denom <= 0:
                continue
            cn1 = sum(1 for _, a in entries if a == 1)
            cn2 = sum(1 for _, a in entries if a == 2)
            cn3 = sum(1 for _, a in entries if a >= 3)
            gamma = (dn[0] * cn1 + dn[1] * cn2 + dn[2] * cn3) / denom
            backoffs[u] = gamma
            for g, a in entries:
                lower = probabilities[g[1:]]
                probabilities[g] = max(a - _discount_for(dn, a), 0.0) / denom + gamma * lower

    return NGramModel(
        order=k,
        vocab=frozenset(vocab),
        probabilities=probabilities,
        backoffs=backoffs,
        discounts=discounts,
        metadata={
            "kind": "kneser-ney",
            "unk_threshold": unk_threshold,
            "tokenization": counts.tokenization,
            "vocab_size": v_size,
            "sentences": counts.sentences,
            "discount_fallbacks": fallback_log,
        },
    )


def train_model(
    corpus: Iterable[str],
    order: int = 5,
    tokenization: str = "whitespace",
    unk_threshold: int = 2,
) -> NGramModel:
    """Count and estimate in one step."""
    return estimate_kn(count_ngrams(corpus, order, tokenization), unk_threshold)


def perplexity(
    model: NGramModel, corpus: Iterable[str], tokenization: str | None = None
) -> PerplexityReport:
    """Score a line-delimited corpus.

    Each sentence is scored token by token plus one end marker; begin
    markers condition but are never scored. Unknown tokens are mapped to
    unk and counted in the OOV rate. Blank lines are skipped.
    """
    tokenization = tokenization or model.metadata.get("tokenization", "whitespace")
    neg_log10: list[float] = []
    token_count = 0
    oov = 0
    sentences = 0
    history = (BOS,) * (model.order - 1)
    for line in corpus:
        tokens = _split(line.rstrip("\r\n"), tokenization)
        if not tokens:
            continue
        sentences += 1
        mapped = []
        for t in tokens:
            m = model._map_token(t)
            if m == UNK and t != UNK:
                oov += 1
            mapped.append(m)
        seq = list(history) + mapped + [EOS]
        ctx_len = model.order - 1
        for pos in range(ctx_len, len(seq)):
            ctx = tuple(seq[pos - ctx_len : pos]) if ctx_len else ()
            neg_log10.append(-model._logprob10_mapped(ctx, seq[pos]))
        token_count += len(mapped) + 1
    if sentences == 0:
        raise ValidationError("empty corpus: nothing to score")
    total10 = math.fsum(neg_log10)
    return PerplexityReport(
        token_count=token_count,
        total_neg_log_prob=total10 * _LN10,
        ppl=10.0 ** (total10 / token_count),
        oov_rate=oov / token_count,
        sentences=sentences,
        tokenization=tokenization,
    )


@dataclass
class FluencyReport:
    """Side-by-side perplexity of two output streams under one model."""

    ppl_a: float
    ppl_b: float
    winner: str  # "a", "b" or "tie"
    report_a: PerplexityReport
    report_b: PerplexityReport
    overlaps: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ppl_a": self.ppl_a,
            "ppl_b": self.ppl_b,
            "winner": self.winner,
            "report_a": self.report_a.to_dict(),
            "report_b": self.report_b.to_dict(),
            "overlaps": self.overlaps,
        }


# Relative tolerance for declaring a perplexity tie; aggregation order
# makes bit-equality too strict.
TIE_REL_TOL = 1e-9


def fluency_compare(
    model: NGramModel,
    outputs_a: Iterable[str],
    outputs_b: Iterable[str],
    overlaps: Mapping[str, object] | None = None,
    tokenization: str | None = None,
) -> FluencyReport:
    """Compare two output streams by perplexity under a shared model.

    `overlaps` carries precomputed disjointness results (training corpus
    or output streams vs. an excluded corpus) to be embedded verbatim in
    the report.
    """
    report_a = perplexity(model, outputs_a, tokenization)
    report_b = perplexity(model, outputs_b, tokenization)
    pa, pb = report_a.ppl, report_b.ppl
    if math.isclose(pa, pb, rel_tol=TIE_REL_TOL):
        winner = "tie"
    elif pa < pb:
        winner = "a"
    else:
        winner = "b"
    return FluencyReport(
        ppl_a=pa,
        ppl_b=pb,
        winner=winner,
        report_a=report_a,
        report_b=report_b,
        overlaps=dict(overlaps or {}),
    )
