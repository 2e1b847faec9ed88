"""Impact-matrix data model, PKM corpus I/O, synthetic matrices, and heatmaps.

An impact matrix holds, for one sentence (token kind) or one document of
text spans (span kind), the pairwise influence values between units:
``values[i][j]`` is the impact unit ``j + 1`` exerts on unit ``i + 1``. Rows
index the affected unit, columns the perturbed unit, and the diagonal is
fixed at 0 by convention.

Corpora of matrices travel in the line-delimited PKM format (see
:func:`load_corpus` / :func:`save_corpus`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .validation import check_values

KINDS = ("token", "span")
METRICS = ("dist", "prob", "synthetic")
PKM_VERSION = "1"

_MASK64 = (1 << 64) - 1


class PkmError(ValueError):
    """Raised for malformed .pkm files or invalid matrix payloads."""


@dataclass(eq=False)
class ImpactMatrix:
    """A T x T matrix of pairwise unit-on-unit impact values.

    Parameters
    ----------
    id : str
        Identifier, unique within a corpus.
    units : sequence of str
        Ordered unit labels: word forms for token kind, span texts for
        span kind. Length T >= 1.
    values : array-like
        T x T finite reals; ``values[i][j]`` is the impact of unit ``j + 1``
        on unit ``i + 1``. Diagonal must be exactly 0. ``dist``-metric
        matrices must be non-negative.
    kind : {"token", "span"}
    metric : {"dist", "prob", "synthetic"}
    """

    id: str
    units: tuple[str, ...]
    values: np.ndarray
    kind: str = "token"
    metric: str = "synthetic"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PkmError(f"unknown kind {self.kind!r}")
        if self.metric not in METRICS:
            raise PkmError(f"unknown metric {self.metric!r}")
        self.units = tuple(str(u) for u in self.units)
        if len(self.units) == 0:
            raise PkmError(f"matrix {self.id!r} has no units")
        try:
            self.values = check_values(self.values, nonnegative=self.metric == "dist")
        except ValueError as exc:
            raise PkmError(f"matrix {self.id!r}: {exc}") from exc
        if self.values.shape[0] != len(self.units):
            raise PkmError(
                f"matrix {self.id!r}: {len(self.units)} units but "
                f"{self.values.shape[0]}x{self.values.shape[1]} values"
            )

    @property
    def n(self) -> int:
        return len(self.units)

    def submatrix(self, keep: Sequence[int]) -> "ImpactMatrix":
        """Restrict to the given 1-based unit positions, preserving order."""
        idx = [k - 1 for k in keep]
        if not idx:
            raise PkmError(f"matrix {self.id!r}: cannot keep zero units")
        vals = self.values[np.ix_(idx, idx)]
        return ImpactMatrix(
            id=self.id,
            units=tuple(self.units[k] for k in idx),
            values=vals,
            kind=self.kind,
            metric=self.metric,
        )


@dataclass(eq=False)
class MatrixCorpus:
    """An ordered collection of impact matrices sharing one kind and metric."""

    matrices: list[ImpactMatrix]
    kind: str = "token"
    metric: str = "synthetic"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PkmError(f"unknown kind {self.kind!r}")
        if self.metric not in METRICS:
            raise PkmError(f"unknown metric {self.metric!r}")
        seen = set()
        for m in self.matrices:
            if m.id in seen:
                raise PkmError(f"duplicate matrix id {m.id!r}")
            seen.add(m.id)
            if m.kind != self.kind or m.metric != self.metric:
                raise PkmError(
                    f"matrix {m.id!r} is {m.kind}/{m.metric}, "
                    f"corpus is {self.kind}/{self.metric}"
                )

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self) -> Iterator[ImpactMatrix]:
        return iter(self.matrices)

    def __getitem__(self, key):
        if isinstance(key, str):
            for m in self.matrices:
                if m.id == key:
                    return m
            raise KeyError(key)
        return self.matrices[key]

    def ids(self) -> list[str]:
        return [m.id for m in self.matrices]


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), allow_nan=False)


def load_corpus(path) -> MatrixCorpus:
    """Read a PKM corpus file.

    Line 1 is a header object ``{"pkm_version":"1","kind":...,"metric":...,
    "meta":{...}}``; every following line is one record ``{"id":...,
    "units":[...],"values":[[...],...]}``. Raises :class:`PkmError` with the
    offending line number on any malformed content.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise PkmError(f"{path}: empty file, expected a PKM header line")

    def fail(lineno, msg):
        raise PkmError(f"{path}:{lineno}: {msg}")

    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        fail(1, f"malformed header: {exc.msg}")
    if not isinstance(header, dict) or header.get("pkm_version") != PKM_VERSION:
        fail(1, f"expected pkm_version {PKM_VERSION!r} header")
    kind = header.get("kind")
    metric = header.get("metric")
    meta = header.get("meta", {})
    if kind not in KINDS:
        fail(1, f"unknown kind {kind!r}")
    if metric not in METRICS:
        fail(1, f"unknown metric {metric!r}")
    if not isinstance(meta, dict):
        fail(1, "meta must be an object")

    matrices = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            fail(lineno, f"malformed record: {exc.msg}")
        if not isinstance(record, dict):
            fail(lineno, "record must be an object")
        missing = {"id", "units", "values"} - record.keys()
        if missing:
            fail(lineno, f"record missing fields {sorted(missing)}")
        rid = record["id"]
        if not isinstance(rid, str):
            fail(lineno, "record id must be a string")
        if rid in seen:
            fail(lineno, f"duplicate id {rid!r}")
        units = record["units"]
        if not isinstance(units, list) or not all(isinstance(u, str) for u in units):
            fail(lineno, f"record {rid!r}: units must be a list of strings")
        values = record["values"]
        rows_ok = isinstance(values, list) and all(
            isinstance(row, list)
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row)
            for row in values
        )
        if not rows_ok:
            fail(lineno, f"record {rid!r}: values must be a list of numeric rows")
        if len(values) != len(units) or any(len(row) != len(units) for row in values):
            fail(
                lineno,
                f"record {rid!r}: values shape does not match {len(units)} units",
            )
        try:
            matrices.append(
                ImpactMatrix(id=rid, units=tuple(units), values=values, kind=kind, metric=metric)
            )
        except PkmError as exc:
            fail(lineno, str(exc))
        seen.add(rid)
    return MatrixCorpus(matrices=matrices, kind=kind, metric=metric, meta=dict(meta))


def save_corpus(corpus: MatrixCorpus, path) -> None:
    """Write a PKM corpus file readable by :func:`load_corpus`.

    Numbers are serialized with their shortest round-trip decimal
    representation, so ``load_corpus`` followed by ``save_corpus``
    reproduces a saved file byte for byte.
    """
    header = {
        "pkm_version": PKM_VERSION,
        "kind": corpus.kind,
        "metric": corpus.metric,
        "meta": corpus.meta,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dump(header))
        fh.write("\n")
        for m in corpus:
            record = {
                "id": m.id,
                "units": list(m.units),
                "values": [[float(v) for v in row] for row in m.values],
            }
            fh.write(_dump(record))
            fh.write("\n")


def _splitmix64(seed: int) -> Iterator[int]:
    """The splitmix64 stream used for all synthetic baselines.

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64, then the output word is
    state mixed by two xor-shift-multiply rounds (constants
    0xBF58476D1CE4E5B9 and 0x94D049BB133111EB) and a final ``z ^ (z >> 31)``.
    Fixed here so every implementation of the toolkit, in any language,
    reproduces bit-identical baselines.
    """
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def random_values(n: int, seed: int) -> np.ndarray:
    """n x n array with off-diagonal entries i.i.d. uniform on [0, 1).

    Entries are drawn from :func:`_splitmix64` keyed by *seed*, mapped to
    [0, 1) as ``(word >> 11) * 2**-53``, and filled row-major with the
    diagonal skipped (and left at 0).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    stream = _splitmix64(int(seed))
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            out[i, j] = (next(stream) >> 11) * 2.0**-53
    return out


def random_matrix(n: int, seed: int, *, id: str | None = None, units: Sequence[str] | None = None) -> ImpactMatrix:
    """Synthetic impact matrix: the stand-in for the random-model baseline.

    A pure function of ``(n, seed)``: calling it twice with the same
    arguments yields identical matrices.
    """
    values = random_values(n, seed)
    if units is None:
        units = tuple(f"u{k}" for k in range(1, n + 1))
    if id is None:
        id = f"random-{n}-{int(seed)}"
    return ImpactMatrix(id=id, units=tuple(units), values=values, kind="token", metric="synthetic")


def render_heatmap(m: ImpactMatrix) -> np.ndarray:
    """Grayscale pixels for the matrix, rows = affected unit.

    Per-matrix min-max scaling: ``pixel = round(255 * (v - min) / (max -
    min))`` with halves rounded away from zero; a constant matrix renders
    all black (0).
    """
    vals = m.values
    lo = float(vals.min())
    hi = float(vals.max())
    pixels = np.zeros(vals.shape, dtype=np.int64)
    if hi > lo:
        scaled = 255.0 * (vals - lo) / (hi - lo)
        pixels = np.floor(scaled + 0.5).astype(np.int64)
    return pixels


def heatmap_pgm(m: ImpactMatrix) -> str:
    """The heatmap as an ASCII PGM (P2, maxval 255) document."""
    pixels = render_heatmap(m)
    t = pixels.shape[0]
    lines = ["P2", f"{t} {t}", "255"]
    for row in pixels:
        lines.append(" ".join(str(int(p)) for p in row))
    return "\n".join(lines) + "\n"
