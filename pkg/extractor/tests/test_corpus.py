import json

import numpy as np
import pytest

from impactextract import (
    ExtractionConfig,
    ExtractionError,
    StubMaskedLM,
    extract_corpus,
    read_span_input,
    read_token_input,
)


def load_pkm(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return json.loads(lines[0]), [json.loads(l) for l in lines[1:]]


class TestInputs:
    def test_token_input_line_numbers(self, tmp_path):
        p = tmp_path / "in.txt"
        p.write_text("the dog barks\n\nshe reads\n", encoding="utf-8")
        records = read_token_input(p)
        assert records == [("1", ["the", "dog", "barks"]), ("3", ["she", "reads"])]

    def test_span_input_jsonl(self, tmp_path):
        p = tmp_path / "in.jsonl"
        p.write_text(
            json.dumps({"id": "d1", "tokens": ["a", "b"], "span_boundaries": [[0, 1], [1, 2]]})
            + "\n",
            encoding="utf-8",
        )
        (rec,) = read_span_input(p)
        assert rec[0] == "d1"

    def test_span_input_missing_field(self, tmp_path):
        p = tmp_path / "in.jsonl"
        p.write_text(json.dumps({"id": "d1", "tokens": ["a"]}) + "\n", encoding="utf-8")
        with pytest.raises(ExtractionError, match="span_boundaries"):
            read_span_input(p)


class TestExtractCorpus:
    def test_records_in_input_order(self, tmp_path):
        cfg = ExtractionConfig(model="stub")
        out = tmp_path / "c.pkm"
        n = extract_corpus([("1", ["a", "b"]), ("2", ["c"])], cfg, out, model=StubMaskedLM())
        assert n == 2
        header, records = load_pkm(out)
        assert header == {
            "pkm_version": "1",
            "kind": "token",
            "metric": "dist",
            "meta": {"model": "stub", "layer": -1, "random_weights": False, "seed": 0},
        }
        assert [r["id"] for r in records] == ["1", "2"]
        assert len(records[0]["values"]) == 2
        assert records[1]["values"] == [[0.0]]

    def test_resume_computes_only_missing(self, tmp_path):
        cfg = ExtractionConfig(model="stub")
        out = tmp_path / "c.pkm"
        inputs = [("1", ["a", "b"]), ("2", ["c", "d"]), ("3", ["e", "f"])]
        extract_corpus(inputs[:2], cfg, out, model=StubMaskedLM())
        before = load_pkm(out)[1]

        counter = StubMaskedLM()
        n = extract_corpus(inputs, cfg, out, model=counter)
        assert n == 1  # only record 3 computed
        assert counter.sequences_seen == 2 + 2  # one 2-word sentence
        header, records = load_pkm(out)
        assert [r["id"] for r in records] == ["1", "2", "3"]
        assert records[:2] == before  # existing payload untouched

    def test_resume_rejects_header_mismatch(self, tmp_path):
        out = tmp_path / "c.pkm"
        extract_corpus([("1", ["a"])], ExtractionConfig(model="stub"), out, model=StubMaskedLM())
        with pytest.raises(ExtractionError, match="header"):
            extract_corpus(
                [("1", ["a"])], ExtractionConfig(model="stub", metric="prob"), out,
                model=StubMaskedLM(),
            )

    def test_resume_rejects_stray_records(self, tmp_path):
        out = tmp_path / "c.pkm"
        cfg = ExtractionConfig(model="stub")
        extract_corpus([("1", ["a"]), ("2", ["b"])], cfg, out, model=StubMaskedLM())
        with pytest.raises(ExtractionError, match="different run"):
            extract_corpus([("1", ["a"])], cfg, out, model=StubMaskedLM())

    def test_duplicate_input_ids_rejected(self, tmp_path):
        with pytest.raises(ExtractionError, match="duplicate"):
            extract_corpus(
                [("1", ["a"]), ("1", ["b"])], ExtractionConfig(model="stub"),
                tmp_path / "c.pkm", model=StubMaskedLM(),
            )

    def test_record_errors_carry_id(self, tmp_path):
        with pytest.raises(ExtractionError, match="'9'"):
            extract_corpus(
                [("9", [])], ExtractionConfig(model="stub"), tmp_path / "c.pkm",
                model=StubMaskedLM(),
            )

    def test_deterministic_output_bytes(self, tmp_path):
        cfg = ExtractionConfig(model="stub")
        a, b = tmp_path / "a.pkm", tmp_path / "b.pkm"
        inputs = [("1", ["x", "y", "z"])]
        extract_corpus(inputs, cfg, a, model=StubMaskedLM())
        extract_corpus(inputs, cfg, b, model=StubMaskedLM())
        assert a.read_bytes() == b.read_bytes()

    def test_span_corpus(self, tmp_path):
        cfg = ExtractionConfig(model="stub", kind="span")
        out = tmp_path / "c.pkm"
        extract_corpus(
            [("d1", ["a", "b", "c", "d"], [[0, 2], [2, 4]])], cfg, out, model=StubMaskedLM()
        )
        header, records = load_pkm(out)
        assert header["kind"] == "span"
        assert records[0]["units"] == ["a b", "c d"]
        values = np.array(records[0]["values"])
        assert values.shape == (2, 2)
        assert values[0, 1] > 0
