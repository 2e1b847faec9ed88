"""Extraction configuration."""

from __future__ import annotations

from dataclasses import dataclass

METRICS = ("dist", "prob")
KINDS = ("token", "span")


@dataclass
class ExtractionConfig:
    """How matrices are extracted from a masked language model.

    model
        A HuggingFace checkpoint id or local path, or ``stub``/``stub:<dim>``
        for the built-in analytic test double.
    metric
        ``dist``: Euclidean distance between the two representations of the
        perturbed position. ``prob``: drop in the model's probability of the
        true token at that position.
    layer
        Which hidden representation feeds the dist metric: 0 is the
        embedding output, 1..N the encoder layers, negative counts from the
        end (default -1, the final layer, which also feeds the MLM head the
        prob metric uses).
    kind
        ``token`` for word-by-word matrices, ``span`` for span-by-span.
    random_weights
        Re-initialize all model parameters (seeded) while keeping the
        tokenizer and architecture: the random-model baseline.
    """

    model: str = "stub"
    metric: str = "dist"
    layer: int = -1
    kind: str = "token"
    random_weights: bool = False
    seed: int = 0
    batch_size: int = 32
    device: str = "cpu"
    max_length: int | None = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
