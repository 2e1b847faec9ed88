import json

import numpy as np
import pytest

from impactparse import (
    DepTree,
    GoldSentence,
    TreebankError,
    punct_positions,
    read_conllu,
    read_ptb,
    read_scidtb,
    strip_punct,
    write_conllu,
    wsj10_filter,
)
from impactparse.validation import check_heads

from oracles import random_tree


def conllu_row(i, form, upos="X", head=0):
    return f"{i}\t{form}\t_\t{upos}\t_\t_\t{head}\t_\t_\t_"


class TestReadConllu:
    def test_two_token_sentence(self, tmp_path):
        p = tmp_path / "t.conllu"
        p.write_text(
            "\n".join([conllu_row(1, "Hello", "INTJ", 2), conllu_row(2, "world", "NOUN", 0), ""]),
            encoding="utf-8",
        )
        (sent,) = read_conllu(p)
        assert sent.tokens == ["Hello", "world"]
        assert sent.heads == [2, 0]

    def test_range_lines_skipped(self, tmp_path):
        p = tmp_path / "t.conllu"
        p.write_text(
            "\n".join(
                [
                    "# sent_id = s9",
                    conllu_row(1, "He", "PRON", 2),
                    conllu_row(2, "sang", "VERB", 0),
                    "3-4\tcannot\t_\t_\t_\t_\t_\t_\t_\t_",
                    conllu_row(3, "can", "AUX", 2),
                    conllu_row(4, "not", "PART", 2),
                    "",
                ]
            ),
            encoding="utf-8",
        )
        (sent,) = read_conllu(p)
        assert sent.id == "s9"
        assert sent.tokens == ["He", "sang", "can", "not"]

    def test_empty_nodes_skipped(self, tmp_path):
        p = tmp_path / "t.conllu"
        p.write_text(
            "\n".join(
                [
                    conllu_row(1, "a", "X", 0),
                    "1.1\televen\t_\t_\t_\t_\t_\t_\t_\t_",
                    "",
                ]
            ),
            encoding="utf-8",
        )
        (sent,) = read_conllu(p)
        assert sent.tokens == ["a"]

    def test_non_integer_head_reports_line(self, tmp_path):
        p = tmp_path / "t.conllu"
        p.write_text(conllu_row(1, "a", "X", 0) + "\n" + conllu_row(2, "b", "X", "x") + "\n\n")
        with pytest.raises(TreebankError, match=":2:"):
            read_conllu(p)

    def test_head_out_of_range(self, tmp_path):
        p = tmp_path / "t.conllu"
        p.write_text(conllu_row(1, "a", "X", 5) + "\n\n")
        with pytest.raises(TreebankError, match="out of range"):
            read_conllu(p)

    def test_cyclic_heads_rejected(self, tmp_path):
        p = tmp_path / "t.conllu"
        lines = [conllu_row(1, "a", "X", 2), conllu_row(2, "b", "X", 1), conllu_row(3, "c", "X", 0)]
        p.write_text("\n".join(lines) + "\n\n")
        with pytest.raises(TreebankError, match="cycle"):
            read_conllu(p)

    def test_comments_skipped(self, tmp_path):
        p = tmp_path / "t.conllu"
        p.write_text("# text = hi\n" + conllu_row(1, "hi", "INTJ", 0) + "\n\n")
        (sent,) = read_conllu(p)
        assert sent.tokens == ["hi"]


class TestWriteConllu:
    def test_minimal_columns(self, tmp_path):
        p = tmp_path / "o.conllu"
        write_conllu([(["a", "b"], DepTree((2, 0)))], p)
        lines = p.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "1\ta\t_\t_\t_\t_\t2\t_\t_\t_"
        assert lines[1] == "2\tb\t_\t_\t_\t_\t0\t_\t_\t_"

    def test_empty_list(self, tmp_path):
        p = tmp_path / "o.conllu"
        write_conllu([], p)
        assert p.read_text(encoding="utf-8") == ""

    def test_round_trip_heads(self, tmp_path, rng):
        items = []
        for k in range(25):
            n = int(rng.integers(1, 10))
            items.append(([f"w{i}" for i in range(n)], DepTree(random_tree(n, rng))))
        p = tmp_path / "o.conllu"
        write_conllu(items, p, ids=[f"s{k}" for k in range(len(items))])
        back = read_conllu(p)
        assert [s.heads for s in back] == [list(t.heads) for _, t in items]
        assert [s.id for s in back] == [f"s{k}" for k in range(len(items))]


PTB_SAMPLE = "(S (NP (DT the) (NN cat)) (VP (VBZ sleeps)))"


class TestReadPtb:
    def test_basic_tree(self, tmp_path):
        p = tmp_path / "t.mrg"
        p.write_text(PTB_SAMPLE + "\n", encoding="utf-8")
        (sent,) = read_ptb(p)
        assert sent.tokens == ["the", "cat", "sleeps"]
        assert sent.xpos == ["DT", "NN", "VBZ"]
        assert sent.brackets == {(1, 3, "S"), (1, 2, "NP"), (3, 3, "VP")}

    def test_traces_removed(self, tmp_path):
        p = tmp_path / "t.mrg"
        p.write_text(
            "(S (NP-SBJ (-NONE- *T*-1)) (VP (VBZ sleeps) (NP (DT a) (NN lot))))\n",
            encoding="utf-8",
        )
        (sent,) = read_ptb(p)
        assert sent.tokens == ["sleeps", "a", "lot"]
        # the emptied NP-SBJ is gone; function tag stripped elsewhere
        assert (1, 3, "S") in sent.brackets
        assert (2, 3, "NP") in sent.brackets

    def test_function_tags_stripped(self, tmp_path):
        p = tmp_path / "t.mrg"
        p.write_text("(S (NP-SBJ-1 (DT the) (NN cat)) (VP (VBZ sleeps)))\n", encoding="utf-8")
        (sent,) = read_ptb(p)
        assert (1, 2, "NP") in sent.brackets

    def test_mrg_wrapping_layer(self, tmp_path):
        p = tmp_path / "t.mrg"
        p.write_text("( " + PTB_SAMPLE + " )\n( (NP (DT a) (NN dog)) )\n", encoding="utf-8")
        sents = read_ptb(p)
        assert [s.tokens for s in sents] == [["the", "cat", "sleeps"], ["a", "dog"]]

    def test_unbalanced_rejected(self, tmp_path):
        p = tmp_path / "t.mrg"
        p.write_text("((\n", encoding="utf-8")
        with pytest.raises(TreebankError, match="unbalanced"):
            read_ptb(p)

    def test_multiline_mrg_layout(self, tmp_path):
        p = tmp_path / "t.mrg"
        p.write_text(
            "( (S\n"
            "    (NP (DT The)\n"
            "        (NN dog))\n"
            "    (VP (VBZ barks))) )\n"
            "( (S (NP (PRP She)) (VP (VBZ left))) )\n",
            encoding="utf-8",
        )
        sents = read_ptb(p)
        assert [s.tokens for s in sents] == [["The", "dog", "barks"], ["She", "left"]]
        assert (1, 2, "NP") in sents[0].brackets


class TestReadScidtb:
    def test_basic(self, tmp_path):
        p = tmp_path / "d1.dep"
        p.write_text(
            json.dumps(
                {
                    "root": [
                        {"id": 0, "parent": -1, "text": "ROOT", "relation": "null"},
                        {"id": 1, "parent": 0, "text": "We propose a method ,", "relation": "ROOT"},
                        {"id": 2, "parent": 1, "text": "which works .", "relation": "elab-addition"},
                    ]
                }
            ),
            encoding="utf-8",
        )
        (doc,) = read_scidtb(p)
        assert doc.kind == "span"
        assert doc.heads == [0, 1]
        assert doc.edus[1] == "which works ."
        assert doc.relations == ["ROOT", "elab-addition"]

    def test_without_id0_entry(self, tmp_path):
        p = tmp_path / "d1.dep"
        p.write_text(
            json.dumps({"root": [{"id": 1, "parent": 0, "text": "x", "relation": "ROOT"}]}),
            encoding="utf-8",
        )
        (doc,) = read_scidtb(p)
        assert doc.heads == [0]

    def test_parent_out_of_range(self, tmp_path):
        p = tmp_path / "d1.dep"
        records = [{"id": k, "parent": 0 if k == 1 else 9, "text": "x", "relation": "r"} for k in (1, 2, 3)]
        p.write_text(json.dumps({"root": records}), encoding="utf-8")
        with pytest.raises(TreebankError, match="out of range"):
            read_scidtb(p)

    def test_missing_parent(self, tmp_path):
        p = tmp_path / "d1.dep"
        p.write_text(json.dumps({"root": [{"id": 1, "text": "x"}]}), encoding="utf-8")
        with pytest.raises(TreebankError, match="parent"):
            read_scidtb(p)

    def test_forest_rejected(self, tmp_path):
        p = tmp_path / "d1.dep"
        records = [{"id": k, "parent": 0, "text": "x", "relation": "r"} for k in (1, 2)]
        p.write_text(json.dumps({"root": records}), encoding="utf-8")
        with pytest.raises(TreebankError, match="root"):
            read_scidtb(p)

    def test_directory_input(self, tmp_path):
        for name in ("b.dep", "a.dep"):
            (tmp_path / name).write_text(
                json.dumps({"root": [{"id": 1, "parent": 0, "text": name, "relation": "r"}]}),
                encoding="utf-8",
            )
        docs = read_scidtb(tmp_path)
        assert [d.id for d in docs] == ["a", "b"]


def random_tagged_sentence(rng, n, punct_prob=0.3):
    """Random valid tree over n tokens with random PUNCT tags."""
    heads = list(random_tree(n, rng))
    upos = ["PUNCT" if rng.random() < punct_prob else "NOUN" for _ in range(n)]
    if all(t == "PUNCT" for t in upos):
        upos[int(rng.integers(0, n))] = "NOUN"
    return GoldSentence(
        id="r", tokens=[f"w{i}" for i in range(n)], upos=upos, heads=heads
    )


class TestStripPunct:
    def test_simple_removal(self):
        s = GoldSentence(
            id="x",
            tokens=["hello", ",", "world"],
            upos=["INTJ", "PUNCT", "NOUN"],
            heads=[3, 3, 0],
        )
        out = strip_punct(s)
        assert out.tokens == ["hello", "world"]
        assert out.heads == [2, 0]

    def test_no_punctuation_is_identity(self):
        s = GoldSentence(id="x", tokens=["a", "b"], upos=["X", "X"], heads=[2, 0])
        assert strip_punct(s) is s

    def test_dependent_of_punct_reattaches(self):
        # punct token 2 heads token 1; removing it moves 1 up to 2's head
        s = GoldSentence(
            id="x",
            tokens=["a", "-", "b"],
            upos=["X", "PUNCT", "X"],
            heads=[2, 3, 0],
        )
        out = strip_punct(s)
        assert out.tokens == ["a", "b"]
        assert out.heads == [2, 0]

    def test_brackets_reindexed(self):
        s = GoldSentence(
            id="x",
            tokens=["a", ",", "b", "c"],
            upos=["X", "PUNCT", "X", "X"],
            heads=None,
            brackets={(1, 4, "S"), (3, 4, "NP"), (2, 2, "P")},
        )
        out = strip_punct(s)
        assert out.brackets == {(1, 3, "S"), (2, 3, "NP")}

    def test_ptb_tagset_on_xpos(self):
        s = GoldSentence(
            id="x",
            tokens=["a", ".", "b"],
            xpos=["DT", ".", "NN"],
            heads=[3, 3, 0],
        )
        out = strip_punct(s)
        assert out.tokens == ["a", "b"]

    def test_validity_preserved_on_random_sentences(self, rng):
        # the derived oracle: 100 random treebank sentences keep a valid tree
        for _ in range(100):
            n = int(rng.integers(2, 15))
            s = random_tagged_sentence(rng, n)
            out = strip_punct(s)
            check_heads(out.heads, n=len(out.tokens))
            retained = [t for t, u in zip(s.tokens, s.upos) if u != "PUNCT"]
            assert out.tokens == retained  # relative order preserved


class TestWsj10Filter:
    def _sentence(self, words, puncts):
        n = words + puncts
        heads = [0] + [1] * (n - 1)
        upos = ["NOUN"] * words + ["PUNCT"] * puncts
        return GoldSentence(id="x", tokens=["t"] * n, upos=upos, heads=heads)

    def test_keeps_at_most_ten_words(self):
        corpus = [self._sentence(9, 3), self._sentence(10, 0), self._sentence(11, 2)]
        kept = wsj10_filter(corpus)
        assert len(kept) == 2

    def test_empty_corpus(self):
        assert wsj10_filter([]) == []

    def test_idempotent(self):
        corpus = [self._sentence(k, 1) for k in range(2, 14)]
        once = wsj10_filter(corpus)
        assert wsj10_filter(once) == once
