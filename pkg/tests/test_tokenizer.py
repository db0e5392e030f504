import json
import os
import random
import string

import pytest

from mtevalkit.tokenizer import TokenSequence, tok13a, tokenize_lines


def load_golden():
    path = os.path.join(os.path.dirname(__file__), "data", "tok13a_golden.json")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)["pairs"]


GOLDEN = load_golden()


def test_golden_suite_is_big_enough():
    assert len(GOLDEN) >= 50


@pytest.mark.parametrize("case", GOLDEN, ids=lambda c: repr(c["text"])[:40])
def test_golden_pairs_exact(case):
    assert list(tok13a(case["text"]).tokens) == case["tokens"]


def test_required_examples():
    assert tok13a("Hello, world!").tokens == ("Hello", ",", "world", "!")
    assert tok13a("1,000.5").tokens == ("1,000.5",)
    assert tok13a("3-4").tokens == ("3", "-", "4")
    assert tok13a("").tokens == ()


def test_entity_normalization():
    assert tok13a("&quot;x&quot;").tokens == ('"', "x", '"')
    assert tok13a("a &amp; b").tokens == ("a", "&", "b")
    assert tok13a("1 &lt; 2").tokens == ("1", "<", "2")
    assert tok13a("2 &gt; 1").tokens == ("2", ">", "1")
    for case in GOLDEN:
        joined = " ".join(tok13a(case["text"]).tokens)
        for entity in ("&quot;", "&amp;", "&lt;", "&gt;"):
            assert entity not in joined


def test_case_preserved():
    assert tok13a("MiXeD CaSe").tokens == ("MiXeD", "CaSe")


def test_idempotent_on_detokenized_form():
    for case in GOLDEN:
        once = tok13a(case["text"]).tokens
        again = tok13a(" ".join(once)).tokens
        assert again == once, case["text"]


def test_ascii_alnum_passthrough():
    rng = random.Random(1)
    alphabet = string.ascii_letters + string.digits
    for _ in range(200):
        words = [
            "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 8)))
            for _ in range(rng.randint(1, 10))
        ]
        text = " ".join(words)
        assert list(tok13a(text).tokens) == words


def test_tokens_never_contain_whitespace():
    rng = random.Random(2)
    printable = string.printable
    for _ in range(300):
        text = "".join(rng.choice(printable) for _ in range(rng.randint(0, 40)))
        seq = tok13a(text)
        for tok in seq.tokens:
            assert tok
            assert not any(ch.isspace() for ch in tok)
        joined = seq.joined()
        assert joined == joined.strip()
        assert "  " not in joined


def test_non_ascii_punctuation_not_split():
    assert tok13a("em—dash").tokens == ("em—dash",)
    assert tok13a("«quoted»").tokens == ("«quoted»",)


def test_token_sequence_helpers():
    seq = tok13a("a b")
    assert len(seq) == 2
    assert list(seq) == ["a", "b"]
    assert seq.source_text == "a b"
    assert seq.joined() == "a b"
    assert isinstance(seq, TokenSequence)


def test_tokenize_lines_strips_newlines():
    out = tokenize_lines(["one two\n", "three\r\n"])
    assert [s.tokens for s in out] == [("one", "two"), ("three",)]
