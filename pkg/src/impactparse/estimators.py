"""Scikit-learn style estimators over the induction algorithms.

The decoders are parameter-free, so ``fit`` only validates hyperparameters
and input; ``predict`` maps a list of impact matrices to trees. All
estimators are stateless, clone-safe, and usable inside sklearn pipelines.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from . import metrics
from .constituency import ConstTree, branching_baseline, mart_parse
from .dependency import (
    DepTree,
    ScoreOptions,
    arc_scores,
    chain_baseline,
    cle,
    eisner,
    infer_root,
)
from .matrix import ImpactMatrix
from .validation import check_values

_DEP_ALGORITHMS = ("eisner", "cle")


def _as_matrix(x) -> ImpactMatrix:
    if isinstance(x, ImpactMatrix):
        return x
    values = check_values(np.asarray(x, dtype=np.float64))
    return ImpactMatrix(id="anon", units=[f"u{k+1}" for k in range(values.shape[0])], values=values)


def check_matrix_list(X) -> list[ImpactMatrix]:
    """Validate estimator input: an iterable of impact matrices (or raw arrays)."""
    items = list(X)
    if not items:
        raise ValueError("X must contain at least one impact matrix")
    return [_as_matrix(x) for x in items]


class DependencyParser(BaseEstimator):
    """Decode dependency trees from impact matrices.

    Parameters
    ----------
    algorithm : {"eisner", "cle"}
        Projective span DP or maximum spanning arborescence.
    direction : {"h2d", "d2h", "sym"}
        How matrix values map to arc scores (see
        :class:`~impactparse.dependency.ScoreOptions`).
    beta : float
        Distance-bias exponent; 0 disables the short-arc preference.
    """

    def __init__(self, algorithm="eisner", direction="h2d", beta=0.0):
        self.algorithm = algorithm
        self.direction = direction
        self.beta = beta

    def _options(self) -> ScoreOptions:
        if self.algorithm not in _DEP_ALGORITHMS:
            raise ValueError(f"algorithm must be one of {_DEP_ALGORITHMS}, got {self.algorithm!r}")
        return ScoreOptions(direction=self.direction, beta=self.beta)

    def fit(self, X, y=None):
        self._options()
        check_matrix_list(X)
        return self

    def predict(self, X, roots=None) -> list[DepTree]:
        """Trees for each matrix; *roots* supplies gold roots (1-based),
        otherwise the row-sum heuristic picks them."""
        opts = self._options()
        matrices = check_matrix_list(X)
        if roots is not None:
            roots = list(roots)
            if len(roots) != len(matrices):
                raise ValueError(f"{len(roots)} roots for {len(matrices)} matrices")
        decoder = eisner if self.algorithm == "eisner" else cle
        out = []
        for k, m in enumerate(matrices):
            root = int(roots[k]) if roots is not None else infer_root(m)
            out.append(decoder(arc_scores(m, opts), root))
        return out

    def score(self, X, y, roots=None) -> float:
        """Micro-averaged UAS in [0, 1] against gold head vectors *y*."""
        trees = self.predict(X, roots=roots)
        counts = metrics.aggregate(
            "uas", ((str(i), metrics.uas(t, g)) for i, (t, g) in enumerate(zip(trees, y)))
        )
        return (counts.value or 0.0) / 100.0


class MartParser(BaseEstimator):
    """Top-down constituency parser over impact matrices.

    ``right_bias`` adds the split-position bonus that favours
    right-branching structures; 0 is the unbiased parser.
    """

    def __init__(self, right_bias=0.0):
        self.right_bias = right_bias

    def _check(self):
        if not (isinstance(self.right_bias, (int, float)) and self.right_bias >= 0):
            raise ValueError(f"right_bias must be >= 0, got {self.right_bias!r}")

    def fit(self, X, y=None):
        self._check()
        check_matrix_list(X)
        return self

    def predict(self, X) -> list[ConstTree]:
        self._check()
        return [mart_parse(m, self.right_bias) for m in check_matrix_list(X)]

    def score(self, X, y) -> float:
        """Micro-averaged unlabeled bracket F1 in [0, 1] against gold span sets."""
        trees = self.predict(X)
        precision = metrics.Counts(0, 0)
        recall = metrics.Counts(0, 0)
        for tree, gold in zip(trees, y):
            p, r = metrics.bracket_counts(tree, gold, n=tree.n)
            precision = precision + p
            recall = recall + r
        f1 = metrics.f1_from_counts(precision, recall)
        return (f1.value or 0.0) / 100.0


class ChainBaseline(BaseEstimator):
    """Right- or left-chain dependency baseline.

    ``predict`` accepts impact matrices or plain sentence lengths; *roots*
    overrides the default chain root (last unit for right chains, first for
    left ones), mirroring the gold-root adjustment applied to all baselines.
    """

    def __init__(self, direction="right"):
        self.direction = direction

    def fit(self, X, y=None):
        if self.direction not in ("right", "left"):
            raise ValueError(f"direction must be 'right' or 'left', got {self.direction!r}")
        return self

    def predict(self, X, roots=None) -> list[DepTree]:
        self.fit(X)
        lengths = [x if isinstance(x, int) else _as_matrix(x).n for x in X]
        if roots is None:
            roots = [n if self.direction == "right" else 1 for n in lengths]
        roots = list(roots)
        if len(roots) != len(lengths):
            raise ValueError(f"{len(roots)} roots for {len(lengths)} sentences")
        return [chain_baseline(n, self.direction, int(r)) for n, r in zip(lengths, roots)]


class BranchingBaseline(BaseEstimator):
    """Right- or left-branching constituency baseline over lengths or matrices."""

    def __init__(self, direction="right"):
        self.direction = direction

    def fit(self, X, y=None):
        if self.direction not in ("right", "left"):
            raise ValueError(f"direction must be 'right' or 'left', got {self.direction!r}")
        return self

    def predict(self, X) -> list[ConstTree]:
        self.fit(X)
        lengths = [x if isinstance(x, int) else _as_matrix(x).n for x in X]
        return [branching_baseline(n, self.direction) for n in lengths]
