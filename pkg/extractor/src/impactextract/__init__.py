"""Extract inter-unit impact matrices from a pretrained masked language model.

Two-stage masking: mask a unit, read its contextual representation,
additionally mask a second unit, and measure the shift. The resulting
matrices are written in the PKM corpus format consumed by the probing
toolkit.
"""

from .config import ExtractionConfig
from .corpus import extract_corpus, read_span_input, read_token_input
from .model import HuggingFaceMaskedLM, MaskedLM, StubMaskedLM, resolve_model
from .perturb import ExtractionError, ImpactRecord, span_impact, token_impact

__version__ = "0.1.0"

__all__ = [
    "ExtractionConfig",
    "ExtractionError",
    "HuggingFaceMaskedLM",
    "ImpactRecord",
    "MaskedLM",
    "StubMaskedLM",
    "extract_corpus",
    "read_span_input",
    "read_token_input",
    "resolve_model",
    "span_impact",
    "token_impact",
]
