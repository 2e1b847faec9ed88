"""Command line for matrix extraction.

Exit codes: 0 success, 1 usage error, 2 data/model error.
"""

from __future__ import annotations

import sys

import click

from .config import ExtractionConfig
from .corpus import extract_corpus, read_span_input, read_token_input
from .perturb import ExtractionError


@click.command()
@click.option("--model", default="stub", show_default=True,
              help="Masked-LM checkpoint id or path; 'stub' or 'stub:<dim>' for the test double.")
@click.option("--metric", type=click.Choice(["dist", "prob"]), default="dist", show_default=True)
@click.option("--kind", type=click.Choice(["token", "span"]), default="token", show_default=True)
@click.option("--layer", type=int, default=-1, show_default=True,
              help="Hidden layer for the dist metric; negative counts from the end.")
@click.option("--random-weights", is_flag=True, help="Re-initialize all weights (seeded).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--batch-size", type=int, default=32, show_default=True)
@click.option("--device", default="cpu", show_default=True)
@click.option("--max-length", type=int, default=None, help="Override the model length budget.")
@click.option("--in", "in_path", required=True,
              help="Token kind: one space-separated sentence per line. Span kind: "
                   "JSONL of {id, tokens, span_boundaries}.")
@click.option("--out", "out_path", required=True, help="Output .pkm corpus (resumable).")
def cli(model, metric, kind, layer, random_weights, seed, batch_size, device, max_length,
        in_path, out_path):
    """Extract an impact-matrix corpus from a masked language model."""
    if kind == "span" and metric != "dist":
        raise click.UsageError("span extraction supports --metric dist only")
    cfg = ExtractionConfig(
        model=model, metric=metric, kind=kind, layer=layer,
        random_weights=random_weights, seed=seed, batch_size=batch_size,
        device=device, max_length=max_length,
    )
    inputs = read_token_input(in_path) if kind == "token" else read_span_input(in_path)
    if not inputs:
        raise ExtractionError(f"{in_path}: no input records")
    computed = extract_corpus(inputs, cfg, out_path)
    click.echo(f"{out_path}: {len(inputs)} records ({computed} newly computed)")


def main(argv=None) -> int:
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
    except (ExtractionError, OSError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
