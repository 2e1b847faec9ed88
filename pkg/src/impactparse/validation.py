"""Input validation helpers shared by the data model, decoders, and estimators.

All public indices in this package are 1-based (treebank convention); head
index 0 denotes the artificial root. NumPy arrays are 0-based internally, so
row/column ``k`` of a matrix corresponds to unit ``k + 1``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def check_values(values, *, nonnegative: bool = False) -> np.ndarray:
    """Coerce a square impact-value matrix to float64 and validate it.

    Requires a T x T matrix (T >= 1) of finite reals with an exactly-zero
    diagonal. Returns a read-only float64 array.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"impact values must be square, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("impact values must have at least one unit")
    if not np.all(np.isfinite(arr)):
        raise ValueError("impact values must be finite (no NaN/Inf)")
    if np.any(np.diagonal(arr) != 0.0):
        raise ValueError("impact-value diagonal must be exactly 0")
    if nonnegative and np.any(arr < 0.0):
        raise ValueError("impact values must be non-negative for this metric")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def check_square_scores(scores) -> np.ndarray:
    """Validate an arc-score matrix: square, finite off the diagonal."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"score matrix must be square and non-empty, got shape {arr.shape}")
    off = ~np.eye(arr.shape[0], dtype=bool)
    if not np.all(np.isfinite(arr[off])):
        raise ValueError("score matrix must be finite off the diagonal")
    return arr


def check_unit_index(index: int, n: int, *, name: str = "index") -> int:
    """Validate a 1-based unit index against a sequence of length *n*."""
    index = int(index)
    if not 1 <= index <= n:
        raise ValueError(f"{name} must be in [1, {n}], got {index}")
    return index


def check_heads(heads: Sequence[int], *, n: int | None = None) -> tuple[int, ...]:
    """Validate a head vector as a single rooted tree.

    ``heads[i]`` is the 1-based head of unit ``i + 1``; exactly one entry must
    be 0 (the root) and following head links from every unit must reach the
    root without revisiting a node.
    """
    out = tuple(int(h) for h in heads)
    if n is not None and len(out) != n:
        raise ValueError(f"expected {n} heads, got {len(out)}")
    size = len(out)
    if size == 0:
        raise ValueError("head vector must not be empty")
    roots = [i + 1 for i, h in enumerate(out) if h == 0]
    if len(roots) != 1:
        raise ValueError(f"tree must have exactly one root, found {len(roots)}")
    for i, h in enumerate(out):
        if not 0 <= h <= size:
            raise ValueError(f"head {h} of unit {i + 1} out of range [0, {size}]")
        if h == i + 1:
            raise ValueError(f"unit {i + 1} cannot head itself")
    for start in range(1, size + 1):
        seen = set()
        node = start
        while node != 0:
            if node in seen:
                raise ValueError(f"cycle through unit {node}")
            seen.add(node)
            node = out[node - 1]
    return out


def check_spans(spans: Iterable[tuple[int, int]], n: int) -> frozenset[tuple[int, int]]:
    """Validate a bracketing: spans within [1, n], properly nested, (1, n) present."""
    out = frozenset((int(a), int(b)) for a, b in spans)
    for a, b in out:
        if not (1 <= a <= b <= n):
            raise ValueError(f"span ({a}, {b}) out of bounds for n={n}")
    if (1, n) not in out:
        raise ValueError(f"bracketing must contain the whole span (1, {n})")
    items = sorted(out)
    for i, (a, b) in enumerate(items):
        for c, d in items[i + 1 :]:
            if c > b:
                break
            if c > a and d > b:
                raise ValueError(f"spans ({a}, {b}) and ({c}, {d}) cross")
    return out
