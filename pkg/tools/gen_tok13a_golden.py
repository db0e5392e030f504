#!/usr/bin/env python3
"""Regenerate tests/data/tok13a_golden.json from sacrebleu's 13a tokenizer.

The committed golden file was produced with sacrebleu 1.4.5; this script
needs `pip install sacrebleu` and accepts both the 1.x and 2.x layouts.
The golden file is the tokenizer contract: regenerating it should be a
no-op unless sacrebleu itself changes behaviour.
"""

import json
import os

try:  # sacrebleu 1.x
    from sacrebleu import tokenize_13a as _tokenize
except ImportError:  # sacrebleu 2.x
    from sacrebleu.tokenizers.tokenizer_13a import Tokenizer13a

    _tokenize = Tokenizer13a()

INPUTS = [
    "Hello, world!",
    "1,000.5",
    "3-4",
    "",
    "Hello, world!  ",
    "The quick brown fox jumps over the lazy dog",
    "&quot;Hi&quot; she said.",
    "Tom &amp; Jerry",
    "1 &lt; 2 &gt; 0",
    "&amp;lt;",
    "&gt;&lt;&quot;&amp;",
    "foo <skipped> bar",
    "a<skipped>b",
    "co-\noperate",
    "line one\nline two",
    "a{b}c",
    "[x] `y`",
    "f(x)=y*z+w",
    "a:b;c",
    "p@q#r",
    "path/to/file",
    "wow!! really?",
    "50% of US$4",
    "it's a quote\"end",
    "x|y and tilde~test",
    "back\\slash caret^top under_score",
    "3.14",
    "2,718",
    "1.",
    ".5",
    "v1.2.3",
    "9-5 job",
    "phone 555-1234",
    "a-1 and 1-a",
    "-3 and 3-",
    "12,34.56,",
    "Nr. 7",
    "7 . 8",
    "100,000,000",
    "3,4",
    "3 -4",
    "A 23-year-old man",
    "Müller-Straße 3",
    "русский текст, да.",
    "«guillemets»",
    "em—dash stays",
    "ellipsis… stays",
    "naïve café",
    "中文测试。",
    "ハイフン-テスト",
    "Ω≠π",
    "  leading",
    "trailing  ",
    "a\tb",
    "a  b",
    " ",
    "Mr. Smith's 2nd attempt, at 3:30 p.m., failed.",
    'He said: "No."',
    "(parentheses) [brackets] {braces}",
    "semi;colon and co:lon",
    "Don't stop - keep going!",
    "The 1990s-era 'tech' boom",
    "A+B=C, D*E/F",
    "End with period.",
    "Multi.  space.   after.",
]


def main():
    pairs = [{"text": text, "tokens": _tokenize(text).split()} for text in INPUTS]
    out = os.path.join(os.path.dirname(__file__), "..", "tests", "data", "tok13a_golden.json")
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(
            {"generator": "sacrebleu 1.4.5 tokenize_13a", "pairs": pairs},
            fh,
            ensure_ascii=False,
            indent=1,
        )
        fh.write("\n")
    print("wrote %d pairs to %s" % (len(pairs), os.path.normpath(out)))


if __name__ == "__main__":
    main()
