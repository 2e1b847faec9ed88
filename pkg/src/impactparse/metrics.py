"""Evaluation metrics for induced trees.

Dependency side: UAS (directed head match), UUAS (undirected edge overlap,
root attachment excluded), NED (a predicted head also counts when it is the
gold child or gold grandparent of the token), and accuracy bucketed by gold
head-dependent distance. Constituency side: unlabeled bracket
precision/recall/F1 and per-tag span accuracy.

Every metric returns correct/total counts per sentence; corpus aggregates
are micro-averages (summed counts), reported as percentages.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constituency import ConstTree

_HEADS = "heads"


@dataclass(frozen=True)
class Counts:
    correct: int
    total: int

    @property
    def value(self) -> float | None:
        """Percentage, or None when the total is 0 (skipped in aggregates)."""
        if self.total == 0:
            return None
        return 100.0 * self.correct / self.total

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.correct + other.correct, self.total + other.total)


@dataclass
class EvalReport:
    """A corpus-level metric: micro-aggregated counts plus the per-sentence trail."""

    metric: str
    counts: Counts
    per_sentence: list[tuple[str, Counts]]

    @property
    def value(self) -> float | None:
        return self.counts.value

    @property
    def correct(self) -> int:
        return self.counts.correct

    @property
    def total(self) -> int:
        return self.counts.total


def aggregate(metric: str, per_sentence) -> EvalReport:
    """Micro-average per-sentence counts into one report."""
    items = list(per_sentence)
    total = Counts(0, 0)
    for _sid, counts in items:
        total = total + counts
    return EvalReport(metric=metric, counts=total, per_sentence=items)


def _heads_of(tree) -> tuple[int, ...]:
    heads = getattr(tree, _HEADS, tree)
    return tuple(int(h) for h in heads)


def _paired(pred, gold):
    p = _heads_of(pred)
    g = _heads_of(gold)
    if len(p) != len(g):
        raise ValueError(f"length mismatch: {len(p)} predicted vs {len(g)} gold heads")
    return p, g


def uas(pred, gold) -> Counts:
    """Directed unlabeled attachment: predicted head equals gold head."""
    p, g = _paired(pred, gold)
    correct = sum(1 for ph, gh in zip(p, g) if ph == gh)
    return Counts(correct, len(g))


def uuas(pred, gold) -> Counts:
    """Undirected attachment over token-token edges; root arcs are excluded.

    A single-token sentence has no edges and contributes a 0/0 count.
    """
    p, g = _paired(pred, gold)

    def edges(heads):
        return {
            (min(i + 1, h), max(i + 1, h)) for i, h in enumerate(heads) if h != 0
        }

    gold_edges = edges(g)
    pred_edges = edges(p)
    return Counts(len(gold_edges & pred_edges), len(gold_edges))


def ned(pred, gold) -> Counts:
    """Neutral edge direction: a predicted head is also correct when it is a
    gold child or the gold grandparent of the token. Tokens predicted as
    root are correct only if they are the gold root."""
    p, g = _paired(pred, gold)
    n = len(g)
    children: dict[int, set[int]] = {i: set() for i in range(1, n + 1)}
    for i, h in enumerate(g, start=1):
        if h != 0:
            children[h].add(i)
    correct = 0
    for i, ph in enumerate(p, start=1):
        gh = g[i - 1]
        if ph == 0:
            correct += gh == 0
            continue
        if ph == gh or ph in children[i]:
            correct += 1
            continue
        grandparent = g[gh - 1] if gh != 0 else 0
        if grandparent != 0 and ph == grandparent:
            correct += 1
    return Counts(correct, n)


def accuracy_by_distance(pred, gold) -> dict[int, Counts]:
    """Attachment accuracy bucketed by gold arc length.

    Bucket d holds tokens whose gold head sits d+1 positions away (0 =
    adjacent); gold-root tokens are not bucketed.
    """
    p, g = _paired(pred, gold)
    buckets: dict[int, Counts] = {}
    for i, (ph, gh) in enumerate(zip(p, g), start=1):
        if gh == 0:
            continue
        d = abs(gh - i) - 1
        prev = buckets.get(d, Counts(0, 0))
        buckets[d] = prev + Counts(int(ph == gh), 1)
    return buckets


def _span_set(tree, n=None):
    if isinstance(tree, ConstTree):
        return {(a, b) for a, b in tree.spans}, tree.n
    spans = set()
    for item in tree:
        a, b = item[0], item[1]
        spans.add((int(a), int(b)))
    if n is None:
        raise ValueError("raw span sets need an explicit token count")
    return spans, n


def bracket_counts(
    pred, gold, *, n: int | None = None, include_full_span: bool = True
) -> tuple[Counts, Counts]:
    """(precision counts, recall counts) for unlabeled bracket overlap.

    Singleton spans never count; the whole-sentence span counts unless
    *include_full_span* is False.
    """
    pred_spans, n_pred = _span_set(pred, n)
    gold_spans, n_gold = _span_set(gold, n)
    if n_pred != n_gold:
        raise ValueError(f"length mismatch: {n_pred} predicted vs {n_gold} gold tokens")

    def usable(spans, length):
        out = {(a, b) for a, b in spans if a != b}
        if not include_full_span:
            out.discard((1, length))
        return out

    p = usable(pred_spans, n_pred)
    g = usable(gold_spans, n_gold)
    match = len(p & g)
    return Counts(match, len(p)), Counts(match, len(g))


def f1_from_counts(precision: Counts, recall: Counts) -> Counts:
    """F1 as a count pair: 2*match over predicted+gold span totals (Dice)."""
    return Counts(precision.correct + recall.correct, precision.total + recall.total)


def tag_accuracy(pred, gold_tagged, tag: str, *, n: int | None = None) -> Counts:
    """Fraction of gold non-singleton *tag* spans present in the prediction."""
    pred_spans, _ = _span_set(pred, n)
    relevant = {(a, b) for a, b, t in gold_tagged if t == tag and a != b}
    correct = sum(1 for span in relevant if span in pred_spans)
    return Counts(correct, len(relevant))
