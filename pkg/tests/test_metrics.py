import functools
import json
import math
import os
import random

import pytest

from mtevalkit import _ter_py
from mtevalkit.errors import AlignmentError, ScoringError
from mtevalkit.metrics import (
    BleuStats,
    bleu_score,
    bleu_stats,
    corpus_bleu,
    corpus_stats,
    delta_table,
    levenshtein,
    sentence_bleu,
    ter,
    ter_exhaustive,
)
from mtevalkit.tokenizer import tok13a

from oracles import (
    clipped_matches,
    corpus_bleu_oracle,
    levenshtein_oracle,
    sentence_bleu_oracle,
    ter_optimal_oracle,
)


def load_bleu_golden():
    path = os.path.join(os.path.dirname(__file__), "data", "bleu_golden.json")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# BLEU statistics


def test_stats_identity():
    s = bleu_stats(["the", "cat", "sat"], ["the", "cat", "sat"])
    assert s.match == (3, 2, 1, 0)
    assert s.total == (3, 2, 1, 0)
    assert s.hyp_len == 3 and s.ref_len == 3


def test_stats_clipping():
    s = bleu_stats(["the", "cat", "the", "cat"], ["the", "cat", "sat", "down"])
    assert s.match == (2, 1, 0, 0)
    assert s.total == (4, 3, 2, 1)


def test_stats_empty_hypothesis():
    s = bleu_stats([], ["a"])
    assert s.match == (0, 0, 0, 0)
    assert s.total == (0, 0, 0, 0)
    assert s.hyp_len == 0 and s.ref_len == 1


def test_stats_match_oracle_fuzz():
    rng = random.Random(5)
    vocab = ["w%d" % i for i in range(8)]
    for _ in range(300):
        h = rng.choices(vocab, k=rng.randint(0, 15))
        r = rng.choices(vocab, k=rng.randint(1, 15))
        s = bleu_stats(h, r)
        for n in (1, 2, 3, 4):
            m, t = clipped_matches(h, r, n)
            assert s.match[n - 1] == m
            assert s.total[n - 1] == t
            assert 0 <= s.match[n - 1] <= s.total[n - 1]
            assert s.total[n - 1] == max(s.hyp_len - n + 1, 0)


def test_stats_addition_associative_commutative():
    rng = random.Random(6)
    vocab = list("abcd")
    stats = [
        bleu_stats(rng.choices(vocab, k=rng.randint(1, 9)), rng.choices(vocab, k=5))
        for _ in range(12)
    ]
    left = functools.reduce(lambda a, b: a + b, stats)
    right = functools.reduce(lambda a, b: b + a, reversed(stats))
    assert left == right
    shuffled = stats[:]
    rng.shuffle(shuffled)
    assert functools.reduce(lambda a, b: a + b, shuffled) == left
    # corpus score is aggregation-order independent
    assert bleu_score(left).score == bleu_score(right).score


def test_stats_dict_roundtrip():
    s = bleu_stats(["a", "b"], ["a", "c"])
    assert BleuStats.from_dict(s.to_dict()) == s


# ---------------------------------------------------------------------------
# BLEU scores


def test_identity_corpus_is_exactly_100():
    refs = [tok13a(t) for t in ("The cat sat on the mat.", "It rained all day today.")]
    assert corpus_bleu(refs, refs).score == 100.0


def test_worked_single_segment_example():
    report = sentence_bleu(["the", "cat", "the", "cat"], ["the", "cat", "sat", "down"])
    assert report.precisions == (0.5, 1 / 3, 1 / (2 * 2), 1 / (4 * 1))
    assert report.brevity_penalty == 1.0
    oracle = sentence_bleu_oracle(["the", "cat", "the", "cat"], ["the", "cat", "sat", "down"])
    assert report.score == pytest.approx(oracle, abs=1e-12)
    assert report.score == pytest.approx(31.9472, abs=1e-3)


def test_empty_hypothesis_corpus_scores_zero():
    report = corpus_bleu([[], []], [["a"], ["b", "c"]])
    assert report.score == 0.0


def test_smoothing_on_disjoint_vocabulary():
    n = 6
    hyp = ["h%d" % i for i in range(n)]
    ref = ["r%d" % i for i in range(n)]
    report = sentence_bleu(hyp, ref)
    assert report.precisions == (
        1 / (2 * n),
        1 / (4 * (n - 1)),
        1 / (8 * (n - 2)),
        1 / (16 * (n - 3)),
    )
    assert report.brevity_penalty == 1.0


def test_brevity_penalty():
    hyp = [["a", "b", "c", "d"]]
    ref = [["a", "b", "c", "d", "e", "f"]]
    report = corpus_bleu(hyp, ref)
    assert report.brevity_penalty == pytest.approx(math.exp(1 - 6 / 4), rel=1e-12)
    # hyp longer than ref: no penalty
    assert corpus_bleu(ref, hyp).brevity_penalty == 1.0


def test_golden_corpus_matches_pinned_and_oracle():
    golden = load_bleu_golden()
    hyps = [tok13a(t) for t in golden["hyp"]]
    refs = [tok13a(t) for t in golden["ref"]]
    report = corpus_bleu(hyps, refs)
    assert report.score == pytest.approx(golden["corpus_score"], abs=0.01)
    oracle = corpus_bleu_oracle([list(h.tokens) for h in hyps], [list(r.tokens) for r in refs])
    assert oracle == pytest.approx(golden["corpus_score"], abs=1e-5)
    for h, r, pinned in zip(hyps, refs, golden["sentence_scores"]):
        assert sentence_bleu(h, r).score == pytest.approx(pinned, abs=0.01)


def test_bleu_range_and_perfect_iff_identical():
    rng = random.Random(7)
    vocab = ["tok%d" % i for i in range(30)]
    for _ in range(100):
        refs = [rng.choices(vocab, k=rng.randint(4, 12)) for _ in range(5)]
        hyps = [list(r) for r in refs]
        if rng.random() < 0.7:
            # perturb one hypothesis
            i = rng.randrange(len(hyps))
            hyps[i] = hyps[i][:-1] if rng.random() < 0.5 else hyps[i] + [rng.choice(vocab)]
        report = corpus_bleu(hyps, refs)
        assert 0.0 <= report.score <= 100.0
        if all(h == r for h, r in zip(hyps, refs)):
            assert report.score == 100.0
        else:
            assert report.score < 100.0


def test_corpus_stats_length_mismatch():
    with pytest.raises(AlignmentError):
        corpus_stats([["a"]], [["a"], ["b"]])


def test_multi_reference_runs_are_independent():
    hyps = [tok13a("the cat sat on the mat")]
    refs_a = [tok13a("the cat sat on the mat")]
    refs_b = [tok13a("a dog slept on a rug")]
    assert corpus_bleu(hyps, refs_a).score == 100.0
    assert corpus_bleu(hyps, refs_b).score < 100.0


# ---------------------------------------------------------------------------
# Levenshtein / TER


def test_levenshtein_against_oracle():
    rng = random.Random(8)
    for _ in range(400):
        a = rng.choices("abc", k=rng.randint(0, 10))
        b = rng.choices("abc", k=rng.randint(0, 10))
        assert levenshtein(a, b) == levenshtein_oracle(a, b)


def test_ter_identity_is_zero():
    assert ter(["a", "b"], ["a", "b"]).score == 0.0


def test_ter_single_substitution():
    report = ter(["a", "b", "x", "d"], ["a", "b", "c", "d"])
    assert report.edits == 1
    assert report.score == 0.25


def test_ter_single_shift():
    report = ter(["c", "d", "a", "b"], ["a", "b", "c", "d"])
    assert report.edits == 1
    assert report.score == 0.25


def test_ter_empty_reference_rejected():
    with pytest.raises(ScoringError):
        ter(["a"], [])
    with pytest.raises(ScoringError):
        ter_exhaustive(["a"], [])


def test_ter_score_zero_iff_equal():
    rng = random.Random(9)
    for _ in range(200):
        r = rng.choices("abcd", k=rng.randint(1, 8))
        h = list(r)
        if rng.random() < 0.5:
            h[rng.randrange(len(h))] = "zz"
        report = ter(h, r)
        assert (report.score == 0.0) == (h == r)


def test_ter_never_exceeds_levenshtein():
    rng = random.Random(10)
    for _ in range(400):
        h = rng.choices("abc", k=rng.randint(0, 8))
        r = rng.choices("abc", k=rng.randint(1, 8))
        assert ter(h, r).edits <= levenshtein(h, r)


def test_ter_greedy_vs_exhaustive_on_random_pairs():
    rng = random.Random(11)
    equal = 0
    total = 0
    for _ in range(600):
        h = rng.choices("abc", k=rng.randint(0, 6))
        r = rng.choices("abc", k=rng.randint(1, 6))
        g = ter(h, r).edits
        o = ter_exhaustive(h, r)
        assert g >= o, (h, r, g, o)
        total += 1
        equal += g == o
    # the greedy search is optimal on the overwhelming majority of pairs
    assert equal / total > 0.97


def test_exhaustive_matches_independent_dfs_oracle():
    rng = random.Random(12)
    for _ in range(150):
        h = rng.choices("abc", k=rng.randint(0, 5))
        r = rng.choices("abc", k=rng.randint(1, 5))
        assert ter_exhaustive(h, r) == ter_optimal_oracle(h, r)


def test_known_greedy_suboptimal_pair_stays_above_optimum():
    # smallest relabel-canonical pair where the greedy search is suboptimal
    hyp = ["a", "a", "b", "b"]
    ref = ["b", "c", "b", "a", "c", "a"]
    assert ter(hyp, ref).edits == 5
    assert ter_exhaustive(hyp, ref) == 4


def test_backends_agree():
    try:
        from mtevalkit import _kernels
    except ImportError:
        pytest.skip("compiled kernels not built")
    rng = random.Random(13)
    for _ in range(500):
        h = [rng.randint(0, 3) for _ in range(rng.randint(0, 7))]
        r = [rng.randint(0, 3) for _ in range(rng.randint(1, 7))]
        assert _kernels.levenshtein_ints(h, r) == _ter_py.levenshtein_ints(h, r)
        assert _kernels.ter_greedy_ints(h, r) == _ter_py.ter_greedy_ints(h, r)
        assert _kernels.ter_optimal_ints(h, r) == _ter_py.ter_optimal_ints(h, r)


def test_exhaustive_guard_on_long_inputs():
    with pytest.raises(ValueError):
        ter_exhaustive(list("abcdefgh") * 4, list("hgfedcba") * 4)


# ---------------------------------------------------------------------------
# Delta table


def test_delta_table_rounding_from_unrounded_scores():
    # displays 45.8 / 46.1 but the delta of the unrounded scores is 0.38 -> "0.4"
    table = delta_table({"big-bt-system": (45.76, 46.14)})
    row = table.rows[0]
    assert row.display() == ("big-bt-system", "45.8", "46.1", "0.4")
    assert row.delta == pytest.approx(0.38)


def test_delta_table_equal_scores():
    table = delta_table({"sys": (30.0, 30.0)})
    assert table.rows[0].delta == 0.0
    assert table.rows[0].display()[3] == "0.0"


def test_delta_table_sorted_ascending():
    table = delta_table({"a": (50.0, 40.0), "b": (30.0, 35.0), "c": (20.0, 20.0)})
    assert [r.system for r in table.rows] == ["a", "c", "b"]
    deltas = [r.delta for r in table.rows]
    assert deltas == sorted(deltas)


def test_delta_table_requires_systems():
    with pytest.raises(ScoringError):
        delta_table({})
