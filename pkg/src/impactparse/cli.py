"""Command-line orchestration: induce, evaluate, baseline, export.

Subcommands: ``induce dep|const|disc`` decode trees from a PKM matrix corpus
and score them against gold treebanks; ``baseline dep|const|disc`` produce
chain/branching/random-matrix baselines from the gold side alone; ``eval``
scores an existing prediction file; ``heatmap`` renders one matrix as a P2
PGM; ``export-conllu`` decodes a matrix corpus into CoNLL-U for downstream
consumers (short-dependency bias on by default).

Exit codes: 0 success, 1 usage error, 2 data error. Reports are
deterministic: the same config always produces byte-identical output.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

import click

from . import metrics as metrics_mod
from .constituency import branching_baseline, mart_parse, parse_bracket_string, to_bracket_string
from .dependency import ScoreOptions, arc_scores, chain_baseline, cle, eisner, infer_root
from .matrix import ImpactMatrix, PkmError, heatmap_pgm, load_corpus, random_values
from .treebank import (
    TreebankError,
    punct_positions,
    read_conllu,
    read_ptb,
    read_scidtb,
    strip_punct,
    write_conllu,
)

DEP_METRICS = ("uas", "uuas", "ned", "dist")
CONST_METRICS = ("f1", "tags")


class DataError(ValueError):
    """Input files exist but do not line up or parse; exit code 2."""


@dataclass
class RunConfig:
    """One resolved CLI invocation."""

    command: str
    task: str | None = None
    matrices: str | None = None
    gold: str | None = None
    pred: str | None = None
    parser: str = "eisner"
    direction: str = "h2d"
    beta: float = 0.0
    root: str = "gold"
    right_bias: float = 0.0
    baseline_kind: str | None = None  # right | left | random
    metric_names: tuple[str, ...] = ()
    out: str | None = None
    fmt: str = "tsv"
    punct: str = "keep"
    seed: int = 0
    export_trees: str | None = None
    matrix_id: str | None = None


# ---------------------------------------------------------------------------
# report assembly


@dataclass
class Report:
    aggregate: list  # (name, EvalReport)
    per_sentence: list  # (sentence id, [(name, Counts), ...])

    def render(self, fmt: str) -> str:
        if fmt == "json":
            payload = {
                "aggregate": {
                    name: {"value": rep.value, "correct": rep.correct, "total": rep.total}
                    for name, rep in self.aggregate
                },
                "per_sentence": [
                    {
                        "id": sid,
                        "metrics": {
                            name: {
                                "value": counts.value,
                                "correct": counts.correct,
                                "total": counts.total,
                            }
                            for name, counts in rows
                        },
                    }
                    for sid, rows in self.per_sentence
                ],
            }
            return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

        def fmt_value(v):
            return "-" if v is None else repr(v)

        lines = ["# aggregate", "metric\tvalue\tcorrect\ttotal"]
        for name, rep in self.aggregate:
            lines.append(f"{name}\t{fmt_value(rep.value)}\t{rep.correct}\t{rep.total}")
        lines.append("# per-sentence")
        lines.append("sent_id\tmetric\tvalue\tcorrect\ttotal")
        for sid, rows in self.per_sentence:
            for name, counts in rows:
                lines.append(
                    f"{sid}\t{name}\t{fmt_value(counts.value)}\t{counts.correct}\t{counts.total}"
                )
        return "\n".join(lines) + "\n"


def _dep_report(pairs, names) -> Report:
    """pairs: (sentence id, predicted heads, gold heads)."""
    per_sentence = []
    simple = {"uas": metrics_mod.uas, "uuas": metrics_mod.uuas, "ned": metrics_mod.ned}
    collected: dict[str, list] = {}
    bucket_rows: dict[int, list] = {}
    for sid, pred, gold in pairs:
        rows = []
        for name in names:
            if name in simple:
                counts = simple[name](pred, gold)
                rows.append((name, counts))
                collected.setdefault(name, []).append((sid, counts))
            elif name == "dist":
                for d, counts in sorted(metrics_mod.accuracy_by_distance(pred, gold).items()):
                    rows.append((f"dist_{d}", counts))
                    bucket_rows.setdefault(d, []).append((sid, counts))
        per_sentence.append((sid, rows))
    aggregate = []
    for name in names:
        if name in simple:
            aggregate.append((name, metrics_mod.aggregate(name, collected.get(name, []))))
        elif name == "dist":
            for d in sorted(bucket_rows):
                aggregate.append(
                    (f"dist_{d}", metrics_mod.aggregate(f"dist_{d}", bucket_rows[d]))
                )
    return Report(aggregate=aggregate, per_sentence=per_sentence)


def _const_report(pairs, names, include_full_span=True) -> Report:
    """pairs: (sentence id, predicted span set, gold tagged spans, n)."""
    per_sentence = []
    precision_rows, recall_rows, f1_rows = [], [], []
    tag_rows: dict[str, list] = {}
    all_tags = sorted(
        {t for _sid, _p, gold, _n in pairs for a, b, t in gold if a != b}
    )
    for sid, pred, gold, n in pairs:
        rows = []
        if "f1" in names:
            p, r = metrics_mod.bracket_counts(
                pred, {(a, b) for a, b, _t in gold}, n=n, include_full_span=include_full_span
            )
            f1 = metrics_mod.f1_from_counts(p, r)
            rows += [("precision", p), ("recall", r), ("f1", f1)]
            precision_rows.append((sid, p))
            recall_rows.append((sid, r))
            f1_rows.append((sid, f1))
        if "tags" in names:
            for tag in all_tags:
                counts = metrics_mod.tag_accuracy(pred, gold, tag, n=n)
                if counts.total:
                    rows.append((f"tag_{tag}", counts))
                tag_rows.setdefault(tag, []).append((sid, counts))
        per_sentence.append((sid, rows))
    aggregate = []
    if "f1" in names:
        aggregate += [
            ("precision", metrics_mod.aggregate("precision", precision_rows)),
            ("recall", metrics_mod.aggregate("recall", recall_rows)),
            ("f1", metrics_mod.aggregate("f1", f1_rows)),
        ]
    if "tags" in names:
        for tag in all_tags:
            aggregate.append((f"tag_{tag}", metrics_mod.aggregate(f"tag_{tag}", tag_rows[tag])))
    return Report(aggregate=aggregate, per_sentence=per_sentence)


# ---------------------------------------------------------------------------
# input loading and alignment


def _load_matrices(path, expect_kind):
    try:
        corpus = load_corpus(path)
    except OSError as exc:
        raise DataError(f"cannot read matrices: {exc}") from exc
    except PkmError as exc:
        raise DataError(str(exc)) from exc
    if corpus.kind != expect_kind:
        raise DataError(f"{path}: expected a {expect_kind}-kind corpus, found {corpus.kind}")
    return corpus


def _load_gold(path, task):
    readers = {"dep": read_conllu, "const": read_ptb, "disc": read_scidtb}
    try:
        sentences = readers[task](path)
    except OSError as exc:
        raise DataError(f"cannot read gold corpus: {exc}") from exc
    except TreebankError as exc:
        raise DataError(str(exc)) from exc
    if not sentences:
        raise DataError(f"{path}: no sentences")
    return sentences


def _strip_gold(sentences, punct):
    if punct != "strip":
        return sentences
    try:
        return [strip_punct(s) for s in sentences]
    except TreebankError as exc:
        raise DataError(str(exc)) from exc


def _align(corpus, raw_gold, gold, record_kind="sentence"):
    """Pair matrices with (possibly punctuation-stripped) gold sentences.

    Matrices sized to the raw sentence are cut down to the retained
    positions; matrices already sized to the stripped sentence pass through.
    """
    if len(corpus) != len(gold):
        raise DataError(f"{len(corpus)} matrices vs {len(gold)} gold {record_kind}s")
    pairs = []
    for m, raw, sentence in zip(corpus, raw_gold, gold):
        if m.id != sentence.id:
            raise DataError(f"id mismatch: matrix {m.id!r} vs gold {sentence.id!r}")
        if m.n == sentence.n:
            pairs.append((m, sentence))
        elif m.n == raw.n:
            keep = sorted(set(range(1, raw.n + 1)) - set(punct_positions(raw)))
            pairs.append((m.submatrix(keep), sentence))
        else:
            raise DataError(
                f"record {m.id!r}: matrix has {m.n} units, gold sentence has "
                f"{sentence.n} (raw {raw.n}) tokens"
            )
    return pairs


def _gold_root(sentence):
    if sentence.heads is None:
        raise DataError(f"sentence {sentence.id!r} has no gold heads for gold-root decoding")
    return sentence.root


def _decode(matrix, cfg: RunConfig, root: int):
    scores = arc_scores(matrix, ScoreOptions(direction=cfg.direction, beta=cfg.beta))
    decoder = eisner if cfg.parser == "eisner" else cle
    return decoder(scores, root)


# ---------------------------------------------------------------------------
# command implementations


def _write_output(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _check_gold_heads(gold):
    for s in gold:
        if s.heads is None:
            raise DataError(f"sentence {s.id!r} has no gold heads")


def _run_induce_dep(cfg: RunConfig) -> None:
    corpus = _load_matrices(cfg.matrices, "token")
    raw_gold = _load_gold(cfg.gold, "dep")
    gold = _strip_gold(raw_gold, cfg.punct)
    _check_gold_heads(gold)
    pairs = _align(corpus, raw_gold, gold)
    decoded = []
    for m, sentence in pairs:
        root = _gold_root(sentence) if cfg.root == "gold" else infer_root(m)
        decoded.append((sentence.id, _decode(m, cfg, root), sentence))
    if cfg.export_trees:
        write_conllu(
            [(s.tokens, t) for _sid, t, s in decoded],
            cfg.export_trees,
            ids=[sid for sid, _t, _s in decoded],
        )
    report = _dep_report(
        [(sid, tree.heads, s.heads) for sid, tree, s in decoded], cfg.metric_names
    )
    _write_output(cfg, report.render(cfg.fmt))


def _run_induce_const(cfg: RunConfig) -> None:
    corpus = _load_matrices(cfg.matrices, "token")
    raw_gold = _load_gold(cfg.gold, "const")
    gold = _strip_gold(raw_gold, cfg.punct)
    for s in gold:
        if s.brackets is None:
            raise DataError(f"sentence {s.id!r} has no gold brackets")
    pairs = _align(corpus, raw_gold, gold)
    decoded = [(s.id, mart_parse(m, cfg.right_bias), s) for m, s in pairs]
    if cfg.export_trees:
        with open(cfg.export_trees, "w", encoding="utf-8") as fh:
            for _sid, tree, s in decoded:
                fh.write(to_bracket_string(tree, s.tokens) + "\n")
    report = _const_report(
        [(sid, tree.spans, s.brackets, s.n) for sid, tree, s in decoded], cfg.metric_names
    )
    _write_output(cfg, report.render(cfg.fmt))


def _run_induce_disc(cfg: RunConfig) -> None:
    corpus = _load_matrices(cfg.matrices, "span")
    gold = _load_gold(cfg.gold, "disc")
    _check_gold_heads(gold)
    pairs = _align(corpus, gold, gold, record_kind="document")
    decoded = [(s.id, _decode(m, cfg, infer_root(m)), s) for m, s in pairs]
    report = _dep_report(
        [(sid, tree.heads, s.heads) for sid, tree, s in decoded], cfg.metric_names
    )
    _write_output(cfg, report.render(cfg.fmt))


def _chain_roots(gold, direction, root_mode, task):
    """Roots for the chain baselines: gold root, or the pure-chain end."""
    roots = []
    for s in gold:
        if root_mode == "gold" and task != "disc":
            roots.append(_gold_root(s))
        else:
            roots.append(s.n if direction == "right" else 1)
    return roots


def _run_baseline_dep(cfg: RunConfig, task: str = "dep") -> None:
    raw_gold = _load_gold(cfg.gold, task)
    gold = _strip_gold(raw_gold, cfg.punct) if task == "dep" else raw_gold
    _check_gold_heads(gold)
    decoded = []
    if cfg.baseline_kind in ("right", "left"):
        roots = _chain_roots(gold, cfg.baseline_kind, cfg.root, task)
        for s, root in zip(gold, roots):
            decoded.append((s.id, chain_baseline(s.n, cfg.baseline_kind, root)))
    else:  # random-matrix baseline: record i uses splitmix64 seed (seed + i)
        for i, s in enumerate(gold):
            matrix = ImpactMatrix(
                id=s.id, units=s.tokens, values=random_values(s.n, cfg.seed + i)
            )
            if task == "disc" or cfg.root == "heuristic":
                root = infer_root(matrix)
            else:
                root = _gold_root(s)
            decoded.append((s.id, _decode(matrix, cfg, root)))
    report = _dep_report(
        [(sid, tree.heads, s.heads) for (sid, tree), s in zip(decoded, gold)],
        cfg.metric_names,
    )
    _write_output(cfg, report.render(cfg.fmt))


def _run_baseline_const(cfg: RunConfig) -> None:
    raw_gold = _load_gold(cfg.gold, "const")
    gold = _strip_gold(raw_gold, cfg.punct)
    for s in gold:
        if s.brackets is None:
            raise DataError(f"sentence {s.id!r} has no gold brackets")
    pairs = [
        (s.id, branching_baseline(s.n, cfg.baseline_kind).spans, s.brackets, s.n) for s in gold
    ]
    report = _const_report(pairs, cfg.metric_names)
    _write_output(cfg, report.render(cfg.fmt))


def _run_eval(cfg: RunConfig) -> None:
    if cfg.task == "const":
        raw_gold = _load_gold(cfg.gold, "const")
        gold = _strip_gold(raw_gold, cfg.punct)
        try:
            with open(cfg.pred, "r", encoding="utf-8") as fh:
                lines = [line.strip() for line in fh if line.strip()]
            preds = [parse_bracket_string(line) for line in lines]
        except OSError as exc:
            raise DataError(f"cannot read predictions: {exc}") from exc
        except ValueError as exc:
            raise DataError(f"{cfg.pred}: {exc}") from exc
        if len(preds) != len(gold):
            raise DataError(f"{len(preds)} predictions vs {len(gold)} gold sentences")
        pairs = []
        for (tokens, tree), s in zip(preds, gold):
            if len(tokens) != s.n:
                raise DataError(
                    f"sentence {s.id!r}: {len(tokens)} predicted tokens vs {s.n} gold"
                )
            if s.brackets is None:
                raise DataError(f"sentence {s.id!r} has no gold brackets")
            pairs.append((s.id, tree.spans, s.brackets, s.n))
        report = _const_report(pairs, cfg.metric_names)
    else:
        gold = _strip_gold(_load_gold(cfg.gold, "dep"), cfg.punct)
        pred = _strip_gold(_load_gold(cfg.pred, "dep"), cfg.punct)
        _check_gold_heads(gold)
        _check_gold_heads(pred)
        if len(pred) != len(gold):
            raise DataError(f"{len(pred)} predictions vs {len(gold)} gold sentences")
        pairs = []
        for p, g in zip(pred, gold):
            if p.n != g.n:
                raise DataError(f"sentence {g.id!r}: {p.n} predicted tokens vs {g.n} gold")
            pairs.append((g.id, p.heads, g.heads))
        report = _dep_report(pairs, cfg.metric_names)
    _write_output(cfg, report.render(cfg.fmt))


def _run_heatmap(cfg: RunConfig) -> None:
    try:
        corpus = load_corpus(cfg.matrices)
    except OSError as exc:
        raise DataError(f"cannot read matrices: {exc}") from exc
    except PkmError as exc:
        raise DataError(str(exc)) from exc
    try:
        matrix = corpus[cfg.matrix_id]
    except KeyError:
        raise DataError(f"no matrix with id {cfg.matrix_id!r} in {cfg.matrices}") from None
    _write_output(cfg, heatmap_pgm(matrix))


def _run_export_conllu(cfg: RunConfig) -> None:
    corpus = _load_matrices(cfg.matrices, "token")
    if len(corpus) == 0:
        raise DataError(f"{cfg.matrices}: no matrices to export")
    items = []
    ids = []
    for m in corpus:
        root = infer_root(m)
        items.append((list(m.units), _decode(m, cfg, root)))
        ids.append(m.id)
    write_conllu(items, cfg.out, ids=ids)


def run(cfg: RunConfig) -> int:
    """Execute one resolved configuration; raises on error, returns 0."""
    table = {
        ("induce", "dep"): _run_induce_dep,
        ("induce", "const"): _run_induce_const,
        ("induce", "disc"): _run_induce_disc,
        ("baseline", "dep"): lambda c: _run_baseline_dep(c, "dep"),
        ("baseline", "const"): _run_baseline_const,
        ("baseline", "disc"): lambda c: _run_baseline_dep(c, "disc"),
        ("eval", None): _run_eval,
        ("eval", "dep"): _run_eval,
        ("eval", "const"): _run_eval,
        ("heatmap", None): _run_heatmap,
        ("export-conllu", None): _run_export_conllu,
    }
    table[(cfg.command, cfg.task)](cfg)
    return 0


# ---------------------------------------------------------------------------
# click surface


def _metrics_option(default):
    return click.option(
        "--metrics",
        "metric_names",
        default=",".join(default),
        show_default=True,
        help="Comma-separated metric list.",
    )


def _parse_metric_names(value, allowed):
    names = tuple(v.strip() for v in value.split(",") if v.strip())
    for name in names:
        if name not in allowed:
            raise click.UsageError(f"unknown metric {name!r}; choose from {', '.join(allowed)}")
    if not names:
        raise click.UsageError("at least one metric is required")
    return names


_matrices_opt = click.option("--matrices", required=True, help="PKM matrix corpus.")
_gold_opt = click.option("--gold", required=True, help="Gold treebank file.")
_parser_opt = click.option(
    "--parser", type=click.Choice(["eisner", "cle"]), default="eisner", show_default=True
)
_direction_opt = click.option(
    "--direction",
    type=click.Choice(["h2d", "d2h", "sym"]),
    default="h2d",
    show_default=True,
    help="How matrix values map to arc scores.",
)
_beta_opt = click.option("--beta", type=float, default=0.0, show_default=True,
                         help="Distance-bias exponent (0 disables).")
_out_opt = click.option("--out", default=None, help="Report path (stdout when omitted).")
_format_opt = click.option(
    "--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv", show_default=True
)
_punct_opt = lambda default: click.option(
    "--punct", type=click.Choice(["strip", "keep"]), default=default, show_default=True
)


@click.group()
@click.version_option(package_name="impactparse")
def cli():
    """Induce syntax from impact matrices and score it against treebanks."""


@cli.group()
def induce():
    """Decode trees from a matrix corpus and evaluate them."""


@induce.command("dep")
@_matrices_opt
@_gold_opt
@_parser_opt
@_direction_opt
@_beta_opt
@click.option("--root", type=click.Choice(["gold", "heuristic"]), default="gold", show_default=True)
@_metrics_option(("uas", "uuas", "ned"))
@_punct_opt("keep")
@_out_opt
@_format_opt
@click.option("--export-trees", default=None, help="Also write decoded trees as CoNLL-U.")
def induce_dep(matrices, gold, parser, direction, beta, root, metric_names, punct, out, fmt, export_trees):
    """Dependency probe: decode each matrix and score against CoNLL-U gold."""
    if beta < 0:
        raise click.UsageError("--beta must be >= 0")
    cfg = RunConfig(
        command="induce", task="dep", matrices=matrices, gold=gold, parser=parser,
        direction=direction, beta=beta, root=root,
        metric_names=_parse_metric_names(metric_names, DEP_METRICS),
        punct=punct, out=out, fmt=fmt, export_trees=export_trees,
    )
    run(cfg)


@induce.command("const")
@_matrices_opt
@_gold_opt
@click.option("--lambda", "right_bias", type=float, default=0.0, show_default=True,
              help="Right-branching bias weight.")
@_metrics_option(("f1",))
@_punct_opt("strip")
@_out_opt
@_format_opt
@click.option("--export-trees", default=None, help="Also write bracketed trees, one per line.")
def induce_const(matrices, gold, right_bias, metric_names, punct, out, fmt, export_trees):
    """Constituency probe: top-down parse each matrix, score bracket F1."""
    if right_bias < 0:
        raise click.UsageError("--lambda must be >= 0")
    cfg = RunConfig(
        command="induce", task="const", matrices=matrices, gold=gold, right_bias=right_bias,
        metric_names=_parse_metric_names(metric_names, CONST_METRICS),
        punct=punct, out=out, fmt=fmt, export_trees=export_trees,
    )
    run(cfg)


@induce.command("disc")
@_matrices_opt
@_gold_opt
@_parser_opt
@_direction_opt
@_beta_opt
@_metrics_option(("uas", "dist"))
@_out_opt
@_format_opt
def induce_disc(matrices, gold, parser, direction, beta, metric_names, out, fmt):
    """Discourse probe over span matrices; the root is always inferred."""
    if beta < 0:
        raise click.UsageError("--beta must be >= 0")
    cfg = RunConfig(
        command="induce", task="disc", matrices=matrices, gold=gold, parser=parser,
        direction=direction, beta=beta, root="heuristic",
        metric_names=_parse_metric_names(metric_names, DEP_METRICS),
        out=out, fmt=fmt,
    )
    run(cfg)


@cli.group()
def baseline():
    """Linguistically uninformed baselines, evaluated like the probes."""


@baseline.command("dep")
@_gold_opt
@click.option("--direction", type=click.Choice(["right", "left", "random"]), required=True,
              help="Chain direction, or 'random' for the random-matrix baseline.")
@click.option("--seed", type=int, default=42, show_default=True,
              help="Random baseline: record i uses splitmix64 seed (seed + i).")
@_parser_opt
@click.option("--score-direction", type=click.Choice(["h2d", "d2h", "sym"]), default="h2d",
              show_default=True, help="Arc-score mapping for the random baseline.")
@_beta_opt
@click.option("--root", type=click.Choice(["gold", "heuristic"]), default="gold", show_default=True)
@_metrics_option(("uas", "uuas", "ned"))
@_punct_opt("keep")
@_out_opt
@_format_opt
def baseline_dep(gold, direction, seed, parser, score_direction, beta, root, metric_names, punct, out, fmt):
    """Right-/left-chain and random-matrix dependency baselines."""
    cfg = RunConfig(
        command="baseline", task="dep", gold=gold, baseline_kind=direction, seed=seed,
        parser=parser, direction=score_direction, beta=beta, root=root,
        metric_names=_parse_metric_names(metric_names, DEP_METRICS),
        punct=punct, out=out, fmt=fmt,
    )
    run(cfg)


@baseline.command("const")
@_gold_opt
@click.option("--direction", type=click.Choice(["right", "left"]), required=True)
@_metrics_option(("f1",))
@_punct_opt("strip")
@_out_opt
@_format_opt
def baseline_const(gold, direction, metric_names, punct, out, fmt):
    """Right-/left-branching constituency baselines."""
    cfg = RunConfig(
        command="baseline", task="const", gold=gold, baseline_kind=direction,
        metric_names=_parse_metric_names(metric_names, CONST_METRICS),
        punct=punct, out=out, fmt=fmt,
    )
    run(cfg)


@baseline.command("disc")
@_gold_opt
@click.option("--direction", type=click.Choice(["right", "left", "random"]), required=True)
@click.option("--seed", type=int, default=42, show_default=True)
@_parser_opt
@_beta_opt
@_metrics_option(("uas", "dist"))
@_out_opt
@_format_opt
def baseline_disc(gold, direction, seed, parser, beta, metric_names, out, fmt):
    """Discourse baselines; chains root at their own end (no gold root)."""
    cfg = RunConfig(
        command="baseline", task="disc", gold=gold, baseline_kind=direction, seed=seed,
        parser=parser, beta=beta, root="heuristic",
        metric_names=_parse_metric_names(metric_names, DEP_METRICS),
        out=out, fmt=fmt,
    )
    run(cfg)


@cli.command("eval")
@click.option("--pred", required=True, help="Predicted trees (CoNLL-U, or brackets for const).")
@_gold_opt
@click.option("--task", type=click.Choice(["dep", "const"]), default="dep", show_default=True)
@click.option("--metrics", "metric_names", default=None,
              help="Comma-separated metric list (defaults per task).")
@_punct_opt("keep")
@_out_opt
@_format_opt
def eval_cmd(pred, gold, task, metric_names, punct, out, fmt):
    """Score an existing prediction file against gold."""
    if metric_names is None:
        metric_names = "uas,uuas,ned" if task == "dep" else "f1"
    allowed = DEP_METRICS if task == "dep" else CONST_METRICS
    cfg = RunConfig(
        command="eval", task=task, pred=pred, gold=gold,
        metric_names=_parse_metric_names(metric_names, allowed),
        punct=punct, out=out, fmt=fmt,
    )
    run(cfg)


@cli.command("heatmap")
@_matrices_opt
@click.option("--id", "matrix_id", required=True, help="Matrix id to render.")
@_out_opt
def heatmap_cmd(matrices, matrix_id, out):
    """Render one impact matrix as an ASCII PGM (P2) grayscale image."""
    cfg = RunConfig(command="heatmap", matrices=matrices, matrix_id=matrix_id, out=out)
    run(cfg)


@cli.command("export-conllu")
@_matrices_opt
@_parser_opt
@_direction_opt
@click.option("--beta", type=float, default=1.0, show_default=True,
              help="Short-dependency bias; on by default for downstream export.")
@click.option("--out", required=True, help="Output CoNLL-U path.")
def export_conllu_cmd(matrices, parser, direction, beta, out):
    """Decode a token corpus into CoNLL-U with inferred roots."""
    if beta < 0:
        raise click.UsageError("--beta must be >= 0")
    cfg = RunConfig(
        command="export-conllu", matrices=matrices, parser=parser, direction=direction,
        beta=beta, root="heuristic", out=out,
    )
    run(cfg)


def main(argv=None) -> int:
    """Entry point with the documented exit codes (0 ok, 1 usage, 2 data)."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except (DataError, PkmError, TreebankError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
