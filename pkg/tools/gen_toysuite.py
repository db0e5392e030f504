#!/usr/bin/env python3
"""Generate the committed toy test suite under tests/data/toysuite/.

Two synthetic "languages" come from seeded first-order Markov chains over
disjoint pseudo-word vocabularies, so a trained n-gram model prefers
in-order sentences over word-shuffled ones. Every sentence uses distinct
tokens, which guarantees that any reordering changes at least one bigram
(nonzero TER/BLEU gap for the shuffle system on every item).

Deterministic: same seed, same bytes. The suite, the two synthetic
systems (copy vs. per-sentence shuffle of the references), an LM training
corpus, and a small direct-assessment TSV are all written here.
"""

import json
import os
import random

SEED = 20240817
N_ITEMS = 100  # per partition
N_LM_SENTENCES = 3000
OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "data", "toysuite")

_ONSETS = "b d f g k l m n p r s t v z".split()
_NUCLEI = "a e i o u ai ei ou".split()


def make_vocab(rng: random.Random, size: int, seen: set) -> list[str]:
    vocab = []
    while len(vocab) < size:
        word = "".join(
            rng.choice(_ONSETS) + rng.choice(_NUCLEI)
            for _ in range(rng.randint(2, 3))
        )
        if word not in seen:
            seen.add(word)
            vocab.append(word)
    return vocab


class MarkovLanguage:
    """First-order chain: each word prefers 4 fixed successors (p=0.85)."""

    def __init__(self, rng: random.Random, vocab: list[str]):
        self.rng = rng
        self.vocab = vocab
        self.successors = {w: rng.sample(vocab, 4) for w in vocab}

    def sentence(self, min_len=6, max_len=12) -> str:
        rng = self.rng
        while True:
            length = rng.randint(min_len, max_len)
            words = [rng.choice(self.vocab)]
            while len(words) < length:
                if rng.random() < 0.85:
                    words.append(rng.choice(self.successors[words[-1]]))
                else:
                    words.append(rng.choice(self.vocab))
            if len(set(words)) == len(words):
                return " ".join(words)


def shuffled_copy(rng: random.Random, line: str) -> str:
    words = line.split()
    while True:
        perm = words[:]
        rng.shuffle(perm)
        if perm != words:
            return " ".join(perm)


def write_lines(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(line + "\n" for line in lines)


def main():
    rng = random.Random(SEED)
    seen: set[str] = set()
    src = MarkovLanguage(rng, make_vocab(rng, 150, seen))
    tgt = MarkovLanguage(rng, make_vocab(rng, 150, seen))

    os.makedirs(OUT, exist_ok=True)
    for sub in ("systems/copy", "systems/shuffle"):
        os.makedirs(os.path.join(OUT, sub), exist_ok=True)

    roles = {
        "direct": {
            "X": [src.sentence() for _ in range(N_ITEMS)],
            "Ystar": [tgt.sentence() for _ in range(N_ITEMS)],
            "Xdoublestar": [src.sentence() for _ in range(N_ITEMS)],
        },
        "reverse": {
            "Y": [tgt.sentence() for _ in range(N_ITEMS)],
            "Xstar": [src.sentence() for _ in range(N_ITEMS)],
            "Ydoublestar": [tgt.sentence() for _ in range(N_ITEMS)],
        },
    }
    manifest = {"source_lang": "srclang", "target_lang": "tgtlang", "direct": {}, "reverse": {}}
    for partition, table in roles.items():
        for role, lines in table.items():
            fname = "%s.%s.txt" % (partition, role)
            write_lines(os.path.join(OUT, fname), lines)
            manifest[partition][role] = fname
    with open(os.path.join(OUT, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")

    # Synthetic systems: references verbatim vs. per-sentence shuffles.
    references = {"direct": roles["direct"]["Ystar"], "reverse": roles["reverse"]["Y"]}
    for partition, refs in references.items():
        write_lines(os.path.join(OUT, "systems/copy", partition + ".txt"), refs)
        write_lines(
            os.path.join(OUT, "systems/shuffle", partition + ".txt"),
            [shuffled_copy(rng, line) for line in refs],
        )

    write_lines(
        os.path.join(OUT, "lm_corpus.txt"),
        [tgt.sentence() for _ in range(N_LM_SENTENCES)],
    )

    # Direct assessments: three raters, twenty direct items, two systems.
    rows = ["\t".join(("rater_id", "system_id", "item_id", "score", "assessment_type", "round"))]
    for item in range(1, 21):
        for system, mean in (("copy", 82), ("shuffle", 38)):
            for rater, bias in (("r1", -4), ("r2", 0), ("r3", 5)):
                score = max(1, min(100, round(rng.gauss(mean + bias, 6))))
                rows.append(
                    "\t".join(
                        ("%s" % rater, system, "direct:%d" % item, str(score), "source_based", "0")
                    )
                )
    write_lines(os.path.join(OUT, "judgements.tsv"), rows)
    print("toy suite written to", os.path.normpath(OUT))


if __name__ == "__main__":
    main()
