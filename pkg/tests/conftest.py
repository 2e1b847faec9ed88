import numpy as np
import pytest

from impactparse import ImpactMatrix, MatrixCorpus, random_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_matrix(values, id="m", kind="token", metric="synthetic", units=None):
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if units is None:
        units = [f"w{k}" for k in range(1, n + 1)]
    return ImpactMatrix(id=id, units=units, values=values, kind=kind, metric=metric)


def random_corpus(seed, n_matrices=None):
    """A small synthetic corpus with varied sizes; deterministic in *seed*."""
    rng = np.random.default_rng(seed)
    if n_matrices is None:
        n_matrices = int(rng.integers(0, 6))
    mats = []
    for k in range(n_matrices):
        n = int(rng.integers(1, 7))
        mats.append(random_matrix(n, int(rng.integers(0, 2**63)), id=f"m{k}"))
    return MatrixCorpus(matrices=mats, kind="token", metric="synthetic", meta={"seed": seed})
