"""Masked-language-model backends.

The perturbation pipeline talks to a small interface: encode one word into
subword ids, wrap a token sequence with the model's boundary specials, and
run batched forwards that expose hidden states (for the dist metric) or
true-token probabilities (for the prob metric).

`resolve_model` returns either the HuggingFace adapter or, for model ids
``stub`` / ``stub:<dim>``, an analytic test double whose representation at
every position is the sum of the embeddings of all visible tokens, so
expected impact values can be derived in closed form.
"""

from __future__ import annotations

import zlib
from abc import ABC, abstractmethod

import numpy as np


class MaskedLM(ABC):
    """What the extractor needs from a masked language model."""

    mask_id: int
    max_length: int | None

    @abstractmethod
    def encode_word(self, word: str) -> list[int]:
        """Subword ids for one word, without special tokens."""

    @abstractmethod
    def wrap(self, ids: list[int]) -> tuple[list[int], int]:
        """Add boundary specials; return (sequence, offset of first real token)."""

    @abstractmethod
    def states(self, sequences: list[list[int]], layer: int) -> np.ndarray:
        """Hidden states, shape (batch, length, hidden). Sequences share a length."""

    @abstractmethod
    def probs(self, sequences: list[list[int]], queries: list[list[tuple[int, int]]]) -> list[list[float]]:
        """Per sequence, the model probability of token_id at position for
        each (position, token_id) query."""


def _splitmix64_floats(seed: int, count: int) -> np.ndarray:
    mask = (1 << 64) - 1
    state = seed & mask
    out = np.empty(count)
    for k in range(count):
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        z = z ^ (z >> 31)
        out[k] = (z >> 11) * 2.0**-53 - 0.5
    return out


class StubMaskedLM(MaskedLM):
    """Additive test double.

    Tokenization splits a word on ``|`` (so tests can force subword
    behaviour); each fragment hashes to a stable token id with a fixed
    embedding. The representation of every position is the sum of the
    embeddings of all visible (unmasked) tokens, hence masking token t
    shifts every representation by exactly e(t). The probability of any
    token at any position is (visible tokens) / (sequence length).
    """

    MASK = 1
    CLS = 2
    SEP = 3

    def __init__(self, dim: int = 8, max_length: int | None = None):
        self.dim = dim
        self.mask_id = self.MASK
        self.max_length = max_length
        self.forward_calls = 0
        self.sequences_seen = 0
        self._cache: dict[int, np.ndarray] = {}

    def token_id(self, fragment: str) -> int:
        return 16 + (zlib.crc32(fragment.encode("utf-8")) & 0x7FFFFFFF)

    def embedding(self, token_id: int) -> np.ndarray:
        if token_id not in self._cache:
            self._cache[token_id] = _splitmix64_floats(token_id, self.dim)
        return self._cache[token_id]

    def encode_word(self, word):
        fragments = [f for f in word.split("|") if f]
        if not fragments:
            raise ValueError(f"cannot tokenize word {word!r}")
        return [self.token_id(f) for f in fragments]

    def wrap(self, ids):
        return [self.CLS, *ids, self.SEP], 1

    def _visible_sum(self, seq) -> np.ndarray:
        total = np.zeros(self.dim)
        for t in seq:
            if t != self.mask_id:
                total += self.embedding(t)
        return total

    def states(self, sequences, layer):
        self.forward_calls += 1
        self.sequences_seen += len(sequences)
        out = np.empty((len(sequences), len(sequences[0]), self.dim))
        for b, seq in enumerate(sequences):
            out[b, :, :] = self._visible_sum(seq)
        return out

    def probs(self, sequences, queries):
        self.forward_calls += 1
        self.sequences_seen += len(sequences)
        out = []
        for seq, qs in zip(sequences, queries):
            visible = sum(1 for t in seq if t != self.mask_id)
            p = visible / len(seq)
            out.append([p for _ in qs])
        return out


class HuggingFaceMaskedLM(MaskedLM):
    """Adapter over ``transformers`` masked LMs (BERT and friends)."""

    def __init__(self, model_id: str, *, random_weights: bool = False, seed: int = 0,
                 device: str = "cpu", max_length: int | None = None):
        import torch
        from transformers import AutoModelForMaskedLM, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForMaskedLM.from_pretrained(model_id, output_hidden_states=True)
        if random_weights:
            # loaded weights carry _is_hf_initialized guards that make the
            # init functions no-ops; clear them before re-initializing
            for obj in (
                *self.model.modules(),
                *self.model.parameters(),
                *self.model.buffers(),
            ):
                if hasattr(obj, "_is_hf_initialized"):
                    obj._is_hf_initialized = False
            torch.manual_seed(seed)
            self.model.apply(self.model._init_weights)
        self.model.to(device)
        self.model.eval()
        self.device = device
        self.mask_id = self.tokenizer.mask_token_id
        if self.mask_id is None:
            raise ValueError(f"{model_id} has no mask token; not a masked LM")
        # the model's special-token template, discovered via the mask token
        probe = self.tokenizer(self.tokenizer.mask_token)["input_ids"]
        anchor = probe.index(self.mask_id)
        self._prefix = probe[:anchor]
        self._suffix = probe[anchor + 1 :]
        if max_length is not None:
            self.max_length = max_length
        else:
            budget = getattr(self.tokenizer, "model_max_length", None)
            self.max_length = budget if budget and budget < 1_000_000 else None

    def encode_word(self, word):
        ids = self.tokenizer(word, add_special_tokens=False)["input_ids"]
        if not ids:
            raise ValueError(f"cannot tokenize word {word!r}")
        return ids

    def wrap(self, ids):
        return [*self._prefix, *ids, *self._suffix], len(self._prefix)

    def _forward(self, sequences):
        torch = self._torch
        batch = torch.tensor(sequences, dtype=torch.long, device=self.device)
        attention = torch.ones_like(batch)
        with torch.no_grad():
            return self.model(input_ids=batch, attention_mask=attention)

    def states(self, sequences, layer):
        out = self._forward(sequences)
        hidden = out.hidden_states[layer]
        return hidden.to(dtype=self._torch.float64).cpu().numpy()

    def probs(self, sequences, queries):
        torch = self._torch
        out = self._forward(sequences)
        logits = out.logits
        results = []
        for b, qs in enumerate(queries):
            row = []
            for position, token_id in qs:
                dist = torch.softmax(logits[b, position].to(dtype=torch.float64), dim=-1)
                row.append(float(dist[token_id]))
            results.append(row)
        return results


def resolve_model(cfg) -> MaskedLM:
    """Build the backend named by ``cfg.model``."""
    if cfg.model == "stub" or cfg.model.startswith("stub:"):
        dim = int(cfg.model.split(":", 1)[1]) if ":" in cfg.model else 8
        return StubMaskedLM(dim=dim, max_length=cfg.max_length)
    return HuggingFaceMaskedLM(
        cfg.model,
        random_weights=cfg.random_weights,
        seed=cfg.seed,
        device=cfg.device,
        max_length=cfg.max_length,
    )
