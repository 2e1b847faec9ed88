"""Dependency induction: arc scoring and tree decoding over impact matrices.

The two decoders search different tree families over the same arc scores:
:func:`eisner` returns the best projective tree (span dynamic program),
:func:`cle` the best spanning arborescence (greedy best-incoming-edge with
cycle contraction), both rooted at a caller-chosen unit. Scores come from
:func:`arc_scores`, which maps an impact matrix to directed head->dependent
scores under a configurable direction convention and an optional power-law
penalty on arc length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import ImpactMatrix
from .validation import check_heads, check_square_scores, check_unit_index

DIRECTIONS = ("h2d", "d2h", "sym")
_DIRECTION_ALIASES = {
    "head_impacts_dep": "h2d",
    "dep_impacts_head": "d2h",
    "symmetric": "sym",
}
ROOT_MODES = ("gold", "heuristic")

_NEG = -np.inf

# Eisner chart axes, after the usual span-DP layout.
_L, _R = 0, 1
_INCOMPLETE, _COMPLETE = 0, 1


@dataclass(frozen=True)
class ScoreOptions:
    """How an impact matrix becomes arc scores.

    direction
        ``"h2d"``: the head's impact on the dependent scores the arc, i.e.
        score(h -> d) = values[d][h] (the default: heads exert influence on
        their dependents). ``"d2h"`` uses values[h][d]; ``"sym"`` averages
        both.
    beta
        Non-negative exponent of a multiplicative ``|h - d| ** -beta``
        penalty favouring short arcs; 0 disables it.
    root_mode
        ``"gold"`` (callers supply the root per sentence) or
        ``"heuristic"`` (row-sum argmax via :func:`infer_root`).
    """

    direction: str = "h2d"
    beta: float = 0.0
    root_mode: str = "heuristic"

    def __post_init__(self):
        direction = _DIRECTION_ALIASES.get(self.direction, self.direction)
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        object.__setattr__(self, "direction", direction)
        if not (isinstance(self.beta, (int, float)) and np.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be a finite non-negative real, got {self.beta!r}")
        if self.root_mode not in ROOT_MODES:
            raise ValueError(f"root_mode must be one of {ROOT_MODES}, got {self.root_mode!r}")


@dataclass(frozen=True)
class DepTree:
    """A rooted dependency tree: ``heads[i]`` is the head of unit i+1, 0 = root."""

    heads: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "heads", check_heads(self.heads))

    @property
    def n(self) -> int:
        return len(self.heads)

    @property
    def root(self) -> int:
        return self.heads.index(0) + 1

    def edges(self) -> set[tuple[int, int]]:
        """Undirected token-token edges; the root attachment is excluded."""
        return {(min(i + 1, h), max(i + 1, h)) for i, h in enumerate(self.heads) if h != 0}


def _values_of(m) -> np.ndarray:
    if isinstance(m, ImpactMatrix):
        return m.values
    return np.asarray(m, dtype=np.float64)


def arc_scores(m, options: ScoreOptions | None = None) -> np.ndarray:
    """Arc-score matrix S with ``S[h-1, d-1]`` = score of arc h -> d.

    The diagonal is meaningless and set to 0; decoders never read it.
    """
    opts = options or ScoreOptions()
    values = _values_of(m)
    check_square_scores(values)
    if opts.direction == "h2d":
        base = values.T
    elif opts.direction == "d2h":
        base = values
    else:
        base = (values + values.T) / 2.0
    scores = np.array(base, dtype=np.float64)
    if opts.beta > 0:
        n = scores.shape[0]
        idx = np.arange(n)
        dist = np.abs(idx[:, None] - idx[None, :]).astype(np.float64)
        np.fill_diagonal(dist, 1.0)
        scores = scores * dist ** (-opts.beta)
    np.fill_diagonal(scores, 0.0)
    return scores


def infer_root(m) -> int:
    """Root heuristic: the unit whose row sum (total received impact) is largest.

    Ties break toward the smallest index.
    """
    values = _values_of(m)
    check_square_scores(values)
    return int(np.argmax(values.sum(axis=1))) + 1


def tree_score(scores, tree: DepTree) -> float:
    """Sum of arc scores over the tree; the artificial root arc scores 0."""
    s = np.asarray(scores, dtype=np.float64)
    return float(sum(s[h - 1, d] for d, h in enumerate(tree.heads) if h != 0))


def eisner(scores, root: int) -> DepTree:
    """Highest-scoring projective tree rooted at *root* (O(n^3) span DP).

    The artificial node 0 may attach only to *root*. Ties break toward the
    smaller split point, then the smaller head index (first-maximum wins at
    every chart cell).
    """
    s = check_square_scores(scores)
    n = s.shape[0]
    root = check_unit_index(root, n, name="root")
    if n == 1:
        return DepTree((0,))

    size = n + 1
    w = np.full((size, size), _NEG)
    w[1:, 1:] = s
    w[0, :] = _NEG
    w[:, 0] = _NEG
    w[0, root] = 0.0
    np.fill_diagonal(w, _NEG)

    chart = np.full((size, size, 2, 2), _NEG)
    back = np.zeros((size, size, 2, 2), dtype=np.int64)
    for i in range(size):
        chart[i, i, :, :] = 0.0

    for span in range(1, size):
        for s0 in range(0, size - span):
            t = s0 + span
            # Incomplete items share the inner split: max over k in [s0, t-1]
            # of right-complete [s0, k] + left-complete [k+1, t].
            cand = chart[s0, s0:t, _R, _COMPLETE] + chart[s0 + 1 : t + 1, t, _L, _COMPLETE]
            k = int(np.argmax(cand))
            chart[s0, t, _L, _INCOMPLETE] = cand[k] + w[t, s0]
            chart[s0, t, _R, _INCOMPLETE] = cand[k] + w[s0, t]
            back[s0, t, :, _INCOMPLETE] = s0 + k
            if s0 == 0:
                # node 0 can never be a dependent
                chart[0, t, _L, _INCOMPLETE] = _NEG
            # Left-complete: left-complete [s0, k] + left-incomplete [k, t].
            cand = chart[s0, s0:t, _L, _COMPLETE] + chart[s0:t, t, _L, _INCOMPLETE]
            k = int(np.argmax(cand))
            chart[s0, t, _L, _COMPLETE] = cand[k]
            back[s0, t, _L, _COMPLETE] = s0 + k
            # Right-complete: right-incomplete [s0, k] + right-complete [k, t].
            cand = chart[s0, s0 + 1 : t + 1, _R, _INCOMPLETE] + chart[s0 + 1 : t + 1, t, _R, _COMPLETE]
            k = int(np.argmax(cand))
            chart[s0, t, _R, _COMPLETE] = cand[k]
            back[s0, t, _R, _COMPLETE] = s0 + 1 + k

    heads = [0] * size

    def backtrack(s0: int, t: int, direction: int, complete: int) -> None:
        if s0 == t:
            return
        k = int(back[s0, t, direction, complete])
        if complete == _COMPLETE:
            if direction == _R:
                backtrack(s0, k, _R, _INCOMPLETE)
                backtrack(k, t, _R, _COMPLETE)
            else:
                backtrack(s0, k, _L, _COMPLETE)
                backtrack(k, t, _L, _INCOMPLETE)
        else:
            if direction == _R:
                heads[t] = s0
            else:
                heads[s0] = t
            backtrack(s0, k, _R, _COMPLETE)
            backtrack(k + 1, t, _L, _COMPLETE)

    backtrack(0, size - 1, _R, _COMPLETE)
    return DepTree(tuple(heads[1:]))


def _find_cycle(parent: list[int], root: int) -> list[int] | None:
    size = len(parent)
    color = [0] * size  # 0 unvisited, 1 on stack, 2 done
    color[root] = 2
    for start in range(size):
        if color[start] != 0:
            continue
        path = []
        node = start
        while color[node] == 0:
            color[node] = 1
            path.append(node)
            node = parent[node]
        if color[node] == 1:
            cycle = path[path.index(node) :]
            return cycle
        for v in path:
            color[v] = 2
    return None


def _max_arborescence(w: np.ndarray, root: int) -> list[int]:
    """Greedy best-incoming-edge + cycle contraction on node ids 0..N-1."""
    size = w.shape[0]
    parent = [-1] * size
    for d in range(size):
        if d == root:
            continue
        parent[d] = int(np.argmax(w[:, d]))  # first maximum: smaller head wins
    cycle = _find_cycle(parent, root)
    if cycle is None:
        return parent

    in_cycle = set(cycle)
    outside = [v for v in range(size) if v not in in_cycle]
    # Reduced graph: outside nodes keep their relative order; the contracted
    # cycle becomes the last node.
    contracted = len(outside)
    red_size = contracted + 1
    red = np.full((red_size, red_size), _NEG)
    enter_via = {}  # outside head index -> (real head, cycle node it enters at)
    leave_via = {}  # outside dep index -> real head inside the cycle
    cycle_weight = {d: w[parent[d], d] for d in cycle}

    for oi, u in enumerate(outside):
        for oj, v in enumerate(outside):
            if oi != oj:
                red[oi, oj] = w[u, v]
        # arcs entering the cycle from u: keep the best entry point,
        # reweighted by the cycle arc it would displace
        best = _NEG
        best_d = None
        for d in sorted(in_cycle):
            cand = w[u, d] - cycle_weight[d]
            if cand > best:
                best = cand
                best_d = d
        red[oi, contracted] = best
        enter_via[oi] = (u, best_d)
        # arcs leaving the cycle toward u: best real head inside
        best = _NEG
        best_h = None
        for h in sorted(in_cycle):
            if w[h, u] > best:
                best = w[h, u]
                best_h = h
        red[contracted, oi] = best
        leave_via[oi] = best_h

    red_root = outside.index(root)
    red_parent = _max_arborescence(red, red_root)

    parent_out = [-1] * size
    for oi, v in enumerate(outside):
        if v == root:
            continue
        p = red_parent[oi]
        parent_out[v] = leave_via[oi] if p == contracted else outside[p]
    entry_head, entry_node = enter_via[red_parent[contracted]]
    for d in cycle:
        parent_out[d] = parent[d]
    parent_out[entry_node] = entry_head
    return parent_out


def cle(scores, root: int) -> DepTree:
    """Maximum spanning arborescence rooted at *root* (may be non-projective).

    Among equal-score incoming edges the smaller head index wins.
    """
    s = check_square_scores(scores)
    n = s.shape[0]
    root = check_unit_index(root, n, name="root")
    if n == 1:
        return DepTree((0,))

    size = n + 1
    w = np.full((size, size), _NEG)
    w[1:, 1:] = s
    w[0, :] = _NEG
    w[:, 0] = _NEG
    w[0, root] = 0.0
    np.fill_diagonal(w, _NEG)

    parent = _max_arborescence(w, 0)
    return DepTree(tuple(parent[1:]))


def chain_baseline(n: int, direction: str, root: int) -> DepTree:
    """Right-/left-chain tree with the root attachment redirected to *root*.

    Right: every unit attaches to its right neighbour, the last unit to
    *root*; left is the mirror image. ``chain_baseline(n, "right", n)`` and
    ``chain_baseline(n, "left", 1)`` are the pure chains.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    root = check_unit_index(root, n, name="root")
    if direction not in ("right", "left"):
        raise ValueError(f"direction must be 'right' or 'left', got {direction!r}")
    heads = [0] * n
    if direction == "right":
        for i in range(1, n + 1):
            if i == root:
                heads[i - 1] = 0
            elif i < n:
                heads[i - 1] = i + 1
            else:
                heads[i - 1] = root
    else:
        for i in range(1, n + 1):
            if i == root:
                heads[i - 1] = 0
            elif i > 1:
                heads[i - 1] = i - 1
            else:
                heads[i - 1] = root
    return DepTree(tuple(heads))
