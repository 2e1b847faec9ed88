import numpy as np
import pytest

from impactextract import (
    ExtractionConfig,
    ExtractionError,
    StubMaskedLM,
    span_impact,
    token_impact,
)


def word_norm(stub, word):
    return float(np.linalg.norm(sum(stub.embedding(t) for t in stub.encode_word(word))))


class TestTokenImpactStubOracle:
    def test_dist_columns_are_embedding_norms(self):
        # the double's representation is the sum of visible embeddings, so
        # stage1 - stage2 = e(word j): every column j is constant at ||e_j||
        stub = StubMaskedLM(dim=8)
        cfg = ExtractionConfig(model="stub", metric="dist")
        words = ["the", "dog", "barks", "loudly"]
        rec = token_impact(words, stub, cfg)
        assert rec.values.shape == (4, 4)
        assert np.all(np.diagonal(rec.values) == 0.0)
        for j, word in enumerate(words):
            expected = word_norm(stub, word)
            for i in range(4):
                if i != j:
                    assert rec.values[i, j] == pytest.approx(expected, abs=1e-6)

    def test_prob_columns_are_mask_fractions(self):
        # stub probability = visible / length, so p1 - p2 = (tokens of j) / length
        stub = StubMaskedLM(dim=4)
        cfg = ExtractionConfig(model="stub", metric="prob")
        words = ["a", "b", "c"]
        rec = token_impact(words, stub, cfg)
        length = 3 + 2  # plus [CLS]/[SEP]
        for j in range(3):
            for i in range(3):
                if i != j:
                    assert rec.values[i, j] == pytest.approx(1 / length, abs=1e-12)

    def test_forward_sequence_count_is_t_plus_t_squared_minus_t(self):
        stub = StubMaskedLM()
        cfg = ExtractionConfig(model="stub")
        token_impact(["w1", "w2", "w3", "w4", "w5"], stub, cfg)
        assert stub.sequences_seen == 5 + 5 * 4

    def test_determinism(self):
        cfg = ExtractionConfig(model="stub")
        a = token_impact(["x", "y", "z"], StubMaskedLM(), cfg)
        b = token_impact(["x", "y", "z"], StubMaskedLM(), cfg)
        assert np.array_equal(a.values, b.values)

    def test_single_word(self):
        rec = token_impact(["only"], StubMaskedLM(), ExtractionConfig(model="stub"))
        assert rec.values.tolist() == [[0.0]]

    def test_empty_sentence_rejected(self):
        with pytest.raises(ExtractionError):
            token_impact([], StubMaskedLM(), ExtractionConfig(model="stub"))

    def test_length_budget_enforced(self):
        stub = StubMaskedLM(max_length=4)
        with pytest.raises(ExtractionError, match="budget"):
            token_impact(["a", "b", "c"], stub, ExtractionConfig(model="stub"))


class TestSubwordRules:
    def test_split_word_masked_whole_and_column_constant(self):
        # '|' splits a word into pieces in the stub tokenizer; the impact BY
        # the split word is the norm of the sum of its piece embeddings
        stub = StubMaskedLM(dim=8)
        cfg = ExtractionConfig(model="stub", metric="dist")
        words = ["it", "was", "un|believ|able"]
        rec = token_impact(words, stub, cfg)
        assert rec.values.shape == (3, 3)
        expected = word_norm(stub, "un|believ|able")
        assert rec.values[0, 2] == pytest.approx(expected, abs=1e-6)
        assert rec.values[1, 2] == pytest.approx(expected, abs=1e-6)

    def test_impact_on_split_word_averages_its_tokens(self):
        # all positions share the same representation in the stub, so the
        # average over the split word's tokens equals the single-token value
        stub = StubMaskedLM(dim=8)
        cfg = ExtractionConfig(model="stub", metric="dist")
        rec = token_impact(["un|easy", "calm"], stub, cfg)
        assert rec.values[0, 1] == pytest.approx(word_norm(stub, "calm"), abs=1e-6)


class TestBatchInvariance:
    SENTENCES = [
        ["for", "those", "who", "follow"],
        ["this", "will", "be", "a", "little", "different"],
        ["social", "media", "transitions"],
        ["it", "closed", "on", "sunday"],
        ["the", "quick", "brown", "fox", "jumps"],
    ]

    @pytest.mark.parametrize("metric", ["dist", "prob"])
    def test_batch_size_never_changes_values(self, metric):
        base = [
            token_impact(s, StubMaskedLM(), ExtractionConfig(model="stub", metric=metric, batch_size=1))
            for s in self.SENTENCES
        ]
        for batch_size in (7, 64):
            cfg = ExtractionConfig(model="stub", metric=metric, batch_size=batch_size)
            for sentence, expected in zip(self.SENTENCES, base):
                rec = token_impact(sentence, StubMaskedLM(), cfg)
                assert np.allclose(rec.values, expected.values, atol=1e-5)


class TestSpanImpact:
    def test_single_span_document(self):
        cfg = ExtractionConfig(model="stub", kind="span")
        rec = span_impact(["just", "one"], [[0, 2]], StubMaskedLM(), cfg)
        assert rec.values.tolist() == [[0.0]]
        assert rec.units == ["just one"]

    def test_stub_oracle_columns(self):
        # masking span j shifts every representation by the sum of its
        # token embeddings; the span mean does not change that
        stub = StubMaskedLM(dim=8)
        cfg = ExtractionConfig(model="stub", kind="span")
        tokens = ["we", "propose", "a", "model", "that", "works"]
        boundaries = [[0, 2], [2, 4], [4, 6]]
        rec = span_impact(tokens, boundaries, stub, cfg)
        assert rec.values.shape == (3, 3)
        for j, (a, b) in enumerate(boundaries):
            mass = sum(stub.embedding(stub.token_id(t)) for t in tokens[a:b])
            expected = float(np.linalg.norm(mass))
            for i in range(3):
                if i != j:
                    assert rec.values[i, j] == pytest.approx(expected, abs=1e-6)

    def test_boundary_validation(self):
        stub = StubMaskedLM()
        cfg = ExtractionConfig(model="stub", kind="span")
        with pytest.raises(ExtractionError, match="contiguous"):
            span_impact(["a", "b", "c"], [[0, 1], [2, 3]], stub, cfg)
        with pytest.raises(ExtractionError, match="cover"):
            span_impact(["a", "b", "c"], [[0, 1], [1, 2]], stub, cfg)
        with pytest.raises(ExtractionError, match="no spans"):
            span_impact(["a"], [], stub, cfg)

    def test_prob_metric_rejected(self):
        with pytest.raises(ExtractionError, match="dist"):
            span_impact(
                ["a", "b"], [[0, 1], [1, 2]], StubMaskedLM(),
                ExtractionConfig(model="stub", kind="span", metric="prob"),
            )

    def test_sliding_window_matches_full_for_cofitting_pairs(self):
        # the stub is position-free, so windowed values for pairs sharing a
        # window equal the full-document values; pairs too far apart to
        # co-fit read as zero impact
        tokens = [f"w{k}" for k in range(12)]
        boundaries = [[0, 3], [3, 6], [6, 9], [9, 12]]
        cfg = ExtractionConfig(model="stub", kind="span")
        full = span_impact(tokens, boundaries, StubMaskedLM(), cfg)
        windowed_model = StubMaskedLM(max_length=8)  # 6-token budget + specials
        windowed = span_impact(tokens, boundaries, windowed_model, cfg)
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                if abs(i - j) == 1:  # adjacent 3-token spans co-fit in 6
                    assert windowed.values[i, j] == pytest.approx(full.values[i, j], abs=1e-12)
                else:
                    assert windowed.values[i, j] == 0.0

    def test_single_span_over_budget_rejected(self):
        tokens = [f"w{k}" for k in range(12)]
        boundaries = [[0, 8], [8, 12]]
        cfg = ExtractionConfig(model="stub", kind="span")
        with pytest.raises(ExtractionError, match="budget"):
            span_impact(tokens, boundaries, StubMaskedLM(max_length=8), cfg)
