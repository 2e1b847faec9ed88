import pytest

TINY_VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "dog", "cat", "dogs", "cats", "bark", "barks", "sleep", "sleeps",
    "run", "runs", "she", "he", "it", "reads", "books", "on", "mat", "quick",
    "un", "##believ", "##able", "##s", "##ing", ".", ",", "and", "media",
    "social", "transitions", "follow", "different", "little", "will", "be", "this",
]


@pytest.fixture(scope="session")
def tiny_bert(tmp_path_factory):
    """A randomly initialized wordpiece BERT saved locally; no downloads."""
    torch = pytest.importorskip("torch")
    transformers = pytest.importorskip("transformers")
    from transformers import BertConfig, BertForMaskedLM, BertTokenizerFast

    model_dir = tmp_path_factory.mktemp("tiny-bert")
    vocab_file = model_dir / "vocab.txt"
    vocab_file.write_text("\n".join(TINY_VOCAB) + "\n", encoding="utf-8")
    tokenizer = BertTokenizerFast(vocab_file=str(vocab_file), do_lower_case=True)
    tokenizer.model_max_length = 64

    config = BertConfig(
        vocab_size=len(TINY_VOCAB),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    torch.manual_seed(1234)
    model = BertForMaskedLM(config)
    model.save_pretrained(model_dir)
    tokenizer.save_pretrained(model_dir)
    return str(model_dir)
