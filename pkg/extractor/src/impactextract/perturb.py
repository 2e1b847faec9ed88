"""Two-stage masking perturbation: from token/span sequences to impact values.

For every ordered unit pair (i, j), stage one masks unit i and reads the
model's representation of i; stage two additionally masks unit j. The shift
between the two readings is the impact of j on i: Euclidean distance between
the representations (dist) or the drop in the model's probability of the
true token (prob).

Words that the tokenizer splits into several subword tokens are masked
whole; the impact on a split word averages over its token positions, and the
impact it exerts is measured once for the whole word (its tokens are masked
together, so each of them would report the same value; the first token's
value is the one that enters the matrix).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ExtractionConfig
from .model import MaskedLM


class ExtractionError(ValueError):
    """Raised when a sentence or document cannot be extracted."""


@dataclass
class ImpactRecord:
    """One extracted matrix: unit labels plus the square value grid."""

    units: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        n = len(self.units)
        if self.values.shape != (n, n):
            raise ExtractionError(f"value grid {self.values.shape} does not match {n} units")
        if not np.all(np.isfinite(self.values)):
            raise ExtractionError("non-finite impact value")


def _chunks(items, size):
    for start in range(0, len(items), size):
        yield items[start : start + size]


def _piece_layout(words, model):
    """Subword pieces per word and their positions in the wrapped sequence."""
    pieces = [model.encode_word(w) for w in words]
    flat = [t for ps in pieces for t in ps]
    wrapped, offset = model.wrap(flat)
    positions = []
    cursor = offset
    for ps in pieces:
        positions.append(list(range(cursor, cursor + len(ps))))
        cursor += len(ps)
    return pieces, wrapped, positions


def _mask_positions(sequence, positions, mask_id):
    out = list(sequence)
    for p in positions:
        out[p] = mask_id
    return out


def _batched_states(model, keyed_sequences, layer, batch_size):
    """keyed_sequences: (key, sequence, read positions) -> key: (k, H) array."""
    out = {}
    for chunk in _chunks(keyed_sequences, batch_size):
        states = model.states([seq for _k, seq, _p in chunk], layer)
        for b, (key, _seq, read) in enumerate(chunk):
            out[key] = np.asarray(states[b], dtype=np.float64)[read, :]
    return out


def _batched_probs(model, keyed_sequences, batch_size):
    """keyed_sequences: (key, sequence, [(position, token id), ...])."""
    out = {}
    for chunk in _chunks(keyed_sequences, batch_size):
        rows = model.probs([seq for _k, seq, _q in chunk], [q for _k, _s, q in chunk])
        for (key, _seq, _q), row in zip(chunk, rows):
            out[key] = np.asarray(row, dtype=np.float64)
    return out


def token_impact(words, model: MaskedLM, cfg: ExtractionConfig) -> ImpactRecord:
    """Word-by-word impact matrix for one sentence.

    T + T*(T-1) forward sequences per sentence: one stage-one masking per
    word, one stage-two masking per ordered pair. Batching only chunks the
    forwards; it never changes the values.
    """
    words = list(words)
    if not words:
        raise ExtractionError("empty sentence")
    t = len(words)
    if t == 1:
        return ImpactRecord(units=words, values=np.zeros((1, 1)))

    pieces, wrapped, positions = _piece_layout(words, model)
    if model.max_length is not None and len(wrapped) > model.max_length:
        raise ExtractionError(
            f"sentence of {len(wrapped)} tokens exceeds the model budget {model.max_length}"
        )

    stage1 = {i: _mask_positions(wrapped, positions[i], model.mask_id) for i in range(t)}
    jobs = []
    for i in range(t):
        if cfg.metric == "dist":
            jobs.append(((i, None), stage1[i], positions[i]))
        else:
            jobs.append(((i, None), stage1[i], [(p, tid) for p, tid in zip(positions[i], pieces[i])]))
    for i in range(t):
        for j in range(t):
            if i == j:
                continue
            seq2 = _mask_positions(stage1[i], positions[j], model.mask_id)
            if cfg.metric == "dist":
                jobs.append(((i, j), seq2, positions[i]))
            else:
                jobs.append(((i, j), seq2, [(p, tid) for p, tid in zip(positions[i], pieces[i])]))

    values = np.zeros((t, t))
    if cfg.metric == "dist":
        reps = _batched_states(model, jobs, cfg.layer, cfg.batch_size)
        for i in range(t):
            r1 = reps[(i, None)]
            for j in range(t):
                if i != j:
                    r2 = reps[(i, j)]
                    values[i, j] = float(np.linalg.norm(r1 - r2, axis=1).mean())
    else:
        probs = _batched_probs(model, jobs, cfg.batch_size)
        for i in range(t):
            p1 = probs[(i, None)]
            for j in range(t):
                if i != j:
                    values[i, j] = float((p1 - probs[(i, j)]).mean())
    return ImpactRecord(units=words, values=values)


def _check_boundaries(boundaries, n_tokens):
    spans = [tuple(int(x) for x in b) for b in boundaries]
    if not spans:
        raise ExtractionError("document has no spans")
    cursor = 0
    for k, (start, end) in enumerate(spans):
        if start != cursor or end <= start:
            raise ExtractionError(
                f"span {k} is ({start}, {end}); spans must be non-empty, contiguous, in order"
            )
        cursor = end
    if cursor != n_tokens:
        raise ExtractionError(f"spans cover {cursor} of {n_tokens} tokens")
    return spans


def span_impact(tokens, boundaries, model: MaskedLM, cfg: ExtractionConfig) -> ImpactRecord:
    """Span-by-span impact matrix for one document.

    Whole spans are masked at once and a span's representation is the mean
    of its token representations; impacts use the Euclidean distance.
    Documents longer than the model budget fall back to a per-pair sliding
    window (an approximation): the window covers both spans when they
    co-fit, otherwise it centers on the span being read and any part of the
    perturbed span outside it contributes nothing, down to an impact of 0
    for pairs too far apart to share a window. A single span larger than
    the budget is an error.
    """
    if cfg.metric != "dist":
        raise ExtractionError("span mode supports the dist metric only")
    tokens = list(tokens)
    spans = _check_boundaries(boundaries, len(tokens))
    n = len(spans)
    units = [" ".join(tokens[a:b]) for a, b in spans]
    if n == 1:
        return ImpactRecord(units=units, values=np.zeros((1, 1)))

    pieces = [model.encode_word(w) for w in tokens]
    flat = [t for ps in pieces for t in ps]
    word_start = np.cumsum([0] + [len(ps) for ps in pieces])
    span_ranges = [(int(word_start[a]), int(word_start[b])) for a, b in spans]  # flat, half-open

    specials = len(model.wrap([])[0])
    budget = None if model.max_length is None else model.max_length - specials

    values = np.zeros((n, n))
    if budget is None or len(flat) <= budget:
        wrapped, offset = model.wrap(flat)
        positions = [list(range(a + offset, b + offset)) for a, b in span_ranges]
        stage1 = {i: _mask_positions(wrapped, positions[i], model.mask_id) for i in range(n)}
        jobs = [((i, None), stage1[i], positions[i]) for i in range(n)]
        for i in range(n):
            for j in range(n):
                if i != j:
                    seq2 = _mask_positions(stage1[i], positions[j], model.mask_id)
                    jobs.append(((i, j), seq2, positions[i]))
        reps = _batched_states(model, jobs, cfg.layer, cfg.batch_size)
        for i in range(n):
            r1 = reps[(i, None)].mean(axis=0)
            for j in range(n):
                if i != j:
                    r2 = reps[(i, j)].mean(axis=0)
                    values[i, j] = float(np.linalg.norm(r1 - r2))
        return ImpactRecord(units=units, values=values)

    # Sliding window: each pair sees one window centered on the two spans
    # when they co-fit, otherwise centered on the span being read. Context
    # outside the window is absent from both stages, so a perturbed span
    # that falls entirely outside contributes zero impact.
    jobs = []
    zero_pairs = []
    for i in range(n):
        ia, ib = span_ranges[i]
        if ib - ia > budget:
            raise ExtractionError(
                f"span {i + 1} alone needs {ib - ia} tokens, over the model budget {budget}"
            )
        for j in range(n):
            if i == j:
                continue
            ja, jb = span_ranges[j]
            lo, hi = min(ia, ja), max(ib, jb)
            if hi - lo <= budget:
                cover_a, cover_b = lo, hi  # both spans fit one window
            else:
                cover_a, cover_b = ia, ib  # cover the span being read
            center = (cover_a + cover_b) // 2
            w0 = max(0, min(center - budget // 2, len(flat) - budget))
            w0 = min(w0, cover_a)
            w0 = max(w0, cover_b - budget)
            w1 = w0 + budget
            window = flat[w0:w1]
            wrapped, offset = model.wrap(window)

            def local(a, b):
                return list(range(max(a, w0) - w0 + offset, min(b, w1) - w0 + offset))

            pos_j = local(ja, jb)
            if not pos_j:
                zero_pairs.append((i, j))
                continue
            pos_i = local(ia, ib)
            seq1 = _mask_positions(wrapped, pos_i, model.mask_id)
            seq2 = _mask_positions(seq1, pos_j, model.mask_id)
            jobs.append(((i, j, 1), seq1, pos_i))
            jobs.append(((i, j, 2), seq2, pos_i))
    reps = _batched_states(model, jobs, cfg.layer, cfg.batch_size)
    for i in range(n):
        for j in range(n):
            if i != j and (i, j) not in zero_pairs:
                r1 = reps[(i, j, 1)].mean(axis=0)
                r2 = reps[(i, j, 2)].mean(axis=0)
                values[i, j] = float(np.linalg.norm(r1 - r2))
    return ImpactRecord(units=units, values=values)
