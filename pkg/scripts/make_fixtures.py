#!/usr/bin/env python3
"""Generate the bundled regression fixtures.

Writes tests/data/fixture20.conllu (20 hand-written sentences with UPOS tags
and gold heads) and tests/data/fixture20.pkm (an aligned synthetic
token-kind matrix corpus; record i uses splitmix64 seed 1000 + i).

Run from the repo root: python3 scripts/make_fixtures.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from impactparse import MatrixCorpus, random_matrix, read_conllu, save_corpus

SENTENCES = [
    ("s01", [("The", "DET", 2), ("dog", "NOUN", 3), ("barks", "VERB", 0), (".", "PUNCT", 3)]),
    ("s02", [("She", "PRON", 2), ("reads", "VERB", 0), ("old", "ADJ", 4), ("books", "NOUN", 2), (".", "PUNCT", 2)]),
    ("s03", [("Birds", "NOUN", 2), ("sing", "VERB", 0), (".", "PUNCT", 2)]),
    ("s04", [("A", "DET", 2), ("cat", "NOUN", 3), ("sleeps", "VERB", 0), ("on", "ADP", 6), ("the", "DET", 6), ("mat", "NOUN", 3), (".", "PUNCT", 3)]),
    ("s05", [("He", "PRON", 3), ("quickly", "ADV", 3), ("left", "VERB", 0), (".", "PUNCT", 3)]),
    ("s06", [("We", "PRON", 2), ("saw", "VERB", 0), ("a", "DET", 6), ("very", "ADV", 5), ("small", "ADJ", 6), ("bird", "NOUN", 2), (".", "PUNCT", 2)]),
    ("s07", [("They", "PRON", 2), ("arrived", "VERB", 0), ("late", "ADV", 2), (",", "PUNCT", 5), ("however", "ADV", 2), (".", "PUNCT", 2)]),
    ("s08", [("Rain", "NOUN", 2), ("fell", "VERB", 0), (".", "PUNCT", 2)]),
    ("s09", [("The", "DET", 3), ("old", "ADJ", 3), ("man", "NOUN", 4), ("smiled", "VERB", 0), ("warmly", "ADV", 4), (".", "PUNCT", 4)]),
    ("s10", [("I", "PRON", 2), ("like", "VERB", 0), ("tea", "NOUN", 2), (".", "PUNCT", 2)]),
    ("s11", [("Dogs", "NOUN", 2), ("chase", "VERB", 0), ("cats", "NOUN", 2), ("in", "ADP", 5), ("parks", "NOUN", 2), (".", "PUNCT", 2)]),
    ("s12", [("My", "PRON", 2), ("friend", "NOUN", 3), ("writes", "VERB", 0), ("short", "ADJ", 5), ("stories", "NOUN", 3), (".", "PUNCT", 3)]),
    ("s13", [("Snow", "NOUN", 2), ("covered", "VERB", 0), ("the", "DET", 5), ("quiet", "ADJ", 5), ("village", "NOUN", 2), (".", "PUNCT", 2)]),
    ("s14", [("She", "PRON", 2), ("smiled", "VERB", 0), (".", "PUNCT", 2)]),
    ("s15", [("The", "DET", 2), ("children", "NOUN", 3), ("played", "VERB", 0), ("outside", "ADV", 3), ("yesterday", "NOUN", 3), (".", "PUNCT", 3)]),
    ("s16", [("He", "PRON", 2), ("bought", "VERB", 0), ("bread", "NOUN", 2), (",", "PUNCT", 5), ("milk", "NOUN", 3), ("and", "CCONJ", 7), ("cheese", "NOUN", 3), (".", "PUNCT", 2)]),
    ("s17", [("Time", "NOUN", 2), ("flies", "VERB", 0), (".", "PUNCT", 2)]),
    ("s18", [("The", "DET", 2), ("river", "NOUN", 3), ("flows", "VERB", 0), ("through", "ADP", 6), ("green", "ADJ", 6), ("valleys", "NOUN", 3), (".", "PUNCT", 3)]),
    ("s19", [("Students", "NOUN", 2), ("read", "VERB", 0), ("many", "DET", 5), ("difficult", "ADJ", 5), ("books", "NOUN", 2), (".", "PUNCT", 2)]),
    ("s20", [("Light", "NOUN", 2), ("faded", "VERB", 0), ("slowly", "ADV", 2), (".", "PUNCT", 2)]),
]

PKM_SEED_BASE = 1000


def main():
    data_dir = os.path.join(os.path.dirname(__file__), "..", "tests", "data")
    os.makedirs(data_dir, exist_ok=True)

    conllu_path = os.path.join(data_dir, "fixture20.conllu")
    with open(conllu_path, "w", encoding="utf-8") as fh:
        for sid, rows in SENTENCES:
            fh.write(f"# sent_id = {sid}\n")
            for i, (form, upos, head) in enumerate(rows, start=1):
                fh.write(f"{i}\t{form}\t_\t{upos}\t_\t_\t{head}\t_\t_\t_\n")
            fh.write("\n")

    # validate through the reader (tree checks included)
    gold = read_conllu(conllu_path)
    assert len(gold) == 20

    matrices = []
    for i, sentence in enumerate(gold):
        matrices.append(
            random_matrix(
                sentence.n, PKM_SEED_BASE + i, id=sentence.id, units=sentence.tokens
            )
        )
    corpus = MatrixCorpus(
        matrices=matrices,
        kind="token",
        metric="synthetic",
        meta={"source": "fixture20", "seed_base": PKM_SEED_BASE},
    )
    save_corpus(corpus, os.path.join(data_dir, "fixture20.pkm"))
    print(f"wrote {conllu_path} and fixture20.pkm ({len(gold)} sentences)")


if __name__ == "__main__":
    main()
