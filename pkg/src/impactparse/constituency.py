"""Top-down constituency induction over impact matrices.

The parser recursively splits each span at the point that maximizes the
average impact inside the two halves minus the average impact across them,
optionally nudged toward right-branching splits. Spans are 1-based inclusive
``(a, b)`` pairs; a tree is the set of all spans produced by the recursion,
singletons included.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import ImpactMatrix
from .validation import check_spans, check_square_scores


@dataclass(frozen=True)
class ConstTree:
    """An unlabeled binary bracketing of an n-token sentence."""

    n: int
    spans: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "spans", check_spans(self.spans, self.n))

    def phrases(self) -> set[tuple[int, int]]:
        """Non-singleton spans only."""
        return {(a, b) for a, b in self.spans if a != b}


def _values_of(m) -> np.ndarray:
    if isinstance(m, ImpactMatrix):
        return m.values
    return check_square_scores(np.asarray(m, dtype=np.float64))


def _block_sums(values: np.ndarray):
    """Inclusive 2-D prefix sums of values and of the diagonal."""
    n = values.shape[0]
    prefix = np.zeros((n + 1, n + 1))
    prefix[1:, 1:] = values.cumsum(axis=0).cumsum(axis=1)
    diag = np.zeros(n + 1)
    diag[1:] = np.diagonal(values).cumsum()
    return prefix, diag


def _rect_sum(prefix, a, b, c, d):
    # sum of values[a-1..b-1, c-1..d-1], 1-based inclusive
    return prefix[b, d] - prefix[a - 1, d] - prefix[b, c - 1] + prefix[a - 1, c - 1]


def _gain(prefix, diag, i, j, k) -> float:
    left = k - i + 1
    right = j - k
    if left >= 2:
        intra_left = (_rect_sum(prefix, i, k, i, k) - (diag[k] - diag[i - 1])) / (left * (left - 1))
    else:
        intra_left = 0.0
    if right >= 2:
        intra_right = (_rect_sum(prefix, k + 1, j, k + 1, j) - (diag[j] - diag[k])) / (
            right * (right - 1)
        )
    else:
        intra_right = 0.0
    cross = _rect_sum(prefix, i, k, k + 1, j) / (left * right)
    cross_t = _rect_sum(prefix, k + 1, j, i, k) / (left * right)
    return intra_left + intra_right - cross - cross_t


def split_gain(m, i: int, j: int, k: int) -> float:
    """Score of splitting span [i..j] into [i..k] and [k+1..j].

    Average impact inside each half minus the average impact between the
    halves. Square-block averages divide by the number of off-diagonal cells
    (a single-unit block contributes 0); cross-block averages divide by the
    full block size.
    """
    values = _values_of(m)
    n = values.shape[0]
    if not (1 <= i <= k < j <= n):
        raise ValueError(f"need 1 <= i <= k < j <= {n}, got i={i}, k={k}, j={j}")
    prefix, diag = _block_sums(values)
    return _gain(prefix, diag, i, j, k)


def mart_parse(m, right_bias: float = 0.0) -> ConstTree:
    """Top-down split parser over an impact matrix.

    Each span [i..j] splits at ``argmax_k split_gain(i, j, k) + right_bias *
    (j - k) / (j - i + 1)``, ties toward the larger k, recursing until
    single units remain. The bias weights the normalized size of the right
    half, so it rewards splits near the left edge: ``right_bias=0`` is the
    unbiased parser and large values degenerate to the right-branching
    baseline.
    """
    if right_bias < 0:
        raise ValueError(f"right_bias must be >= 0, got {right_bias}")
    values = _values_of(m)
    n = values.shape[0]
    prefix, diag = _block_sums(values)
    spans = set()

    def split(i: int, j: int) -> None:
        spans.add((i, j))
        if i == j:
            return
        length = j - i + 1
        best_k = i
        best = -np.inf
        for k in range(i, j):
            score = _gain(prefix, diag, i, j, k)
            if right_bias:
                score += right_bias * (j - k) / length
            if score >= best:  # ties go to the larger (later) k
                best = score
                best_k = k
        split(i, best_k)
        split(best_k + 1, j)

    split(1, n)
    return ConstTree(n=n, spans=frozenset(spans))


def branching_baseline(n: int, direction: str) -> ConstTree:
    """Purely right- or left-branching bracketing of n tokens."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if direction not in ("right", "left"):
        raise ValueError(f"direction must be 'right' or 'left', got {direction!r}")
    spans = {(k, k) for k in range(1, n + 1)}
    if direction == "right":
        spans.update((a, n) for a in range(1, n))
    else:
        spans.update((1, b) for b in range(2, n + 1))
    spans.add((1, n))
    return ConstTree(n=n, spans=frozenset(spans))


def to_bracket_string(tree: ConstTree, tokens) -> str:
    """Serialize as nested unlabeled brackets, e.g. ``( ( w1 w2 ) ( w3 w4 ) )``."""
    tokens = list(tokens)
    if len(tokens) != tree.n:
        raise ValueError(f"{len(tokens)} tokens for an n={tree.n} tree")
    spans = tree.spans

    def render(a: int, b: int) -> str:
        if a == b:
            return tokens[a - 1]
        for k in range(a, b):
            if (a, k) in spans and (k + 1, b) in spans:
                return f"( {render(a, k)} {render(k + 1, b)} )"
        raise ValueError(f"span ({a}, {b}) has no children in the tree")

    return render(1, tree.n)


def parse_bracket_string(text: str) -> tuple[list[str], ConstTree]:
    """Inverse of :func:`to_bracket_string`: tokens plus the span set."""
    parts = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0
    tokens: list[str] = []
    spans: set[tuple[int, int]] = set()

    def parse() -> tuple[int, int]:
        nonlocal pos
        if pos >= len(parts):
            raise ValueError("unbalanced brackets: unexpected end of input")
        if parts[pos] == "(":
            pos += 1
            children = []
            while pos < len(parts) and parts[pos] != ")":
                children.append(parse())
            if pos >= len(parts):
                raise ValueError("unbalanced brackets: missing ')'")
            pos += 1  # consume ')'
            if not children:
                raise ValueError("empty bracket")
            span = (children[0][0], children[-1][1])
            spans.add(span)
            return span
        if parts[pos] == ")":
            raise ValueError("unbalanced brackets: unexpected ')'")
        tokens.append(parts[pos])
        pos += 1
        span = (len(tokens), len(tokens))
        spans.add(span)
        return span

    root = parse()
    if pos != len(parts):
        raise ValueError("trailing content after the outermost bracket")
    if root != (1, len(tokens)):
        spans.add((1, len(tokens)))
    return tokens, ConstTree(n=len(tokens), spans=frozenset(spans))
