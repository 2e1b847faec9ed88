"""Corpus-level extraction: inputs in, PKM file out, resumable.

The PKM grammar (shared with the downstream probing toolkit): line one is a
header object ``{"pkm_version":"1","kind":...,"metric":...,"meta":{...}}``,
every further line one record ``{"id":...,"units":[...],"values":[[...]]}``,
UTF-8, shortest round-trip decimals, zero diagonal.

Rerunning onto an existing output recomputes nothing: records already in the
file are kept verbatim and only missing ids are extracted; the rewritten
file lists records in input order.
"""

from __future__ import annotations

import json
import os

from .config import ExtractionConfig
from .model import MaskedLM, resolve_model
from .perturb import ExtractionError, span_impact, token_impact

PKM_VERSION = "1"


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), allow_nan=False)


def header_line(cfg: ExtractionConfig) -> str:
    meta = {
        "model": cfg.model,
        "layer": cfg.layer,
        "random_weights": cfg.random_weights,
        "seed": cfg.seed,
    }
    return _dump(
        {"pkm_version": PKM_VERSION, "kind": cfg.kind, "metric": cfg.metric, "meta": meta}
    )


def record_line(record_id: str, record) -> str:
    values = [[float(v) for v in row] for row in record.values]
    return _dump({"id": record_id, "units": list(record.units), "values": values})


def read_token_input(path):
    """One pre-tokenized sentence per line, words space-separated; ids are
    1-based line numbers."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            words = line.split()
            if words:
                out.append((str(lineno), words))
    return out


def read_span_input(path):
    """JSONL of {id, tokens, span_boundaries}; boundaries are 0-based
    half-open [start, end) word ranges tiling the token list."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ExtractionError(f"{path}:{lineno}: not valid JSON: {exc.msg}") from None
            for key in ("id", "tokens", "span_boundaries"):
                if key not in obj:
                    raise ExtractionError(f"{path}:{lineno}: record missing {key!r}")
            out.append((str(obj["id"]), list(obj["tokens"]), obj["span_boundaries"]))
    return out


def _existing_records(path, expected_header):
    if not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return {}
    if lines[0] != expected_header:
        raise ExtractionError(
            f"{path}: existing header does not match this configuration; "
            "remove the file or change --out"
        )
    records = {}
    for line in lines[1:]:
        try:
            rid = json.loads(line)["id"]
        except (json.JSONDecodeError, KeyError):
            raise ExtractionError(f"{path}: unreadable record line; remove the file") from None
        records[rid] = line
    return records


def extract_corpus(inputs, cfg: ExtractionConfig, out_path, model: MaskedLM | None = None) -> int:
    """Extract every input record into a PKM corpus at *out_path*.

    inputs: (id, words) pairs for token kind, (id, tokens, boundaries) for
    span kind. Returns the number of newly computed records.
    """
    inputs = list(inputs)
    header = header_line(cfg)
    existing = _existing_records(out_path, header)
    input_ids = [item[0] for item in inputs]
    if len(set(input_ids)) != len(input_ids):
        raise ExtractionError("duplicate record ids in the input")
    stray = set(existing) - set(input_ids)
    if stray:
        raise ExtractionError(
            f"{out_path} holds records not in this input (e.g. {sorted(stray)[0]!r}); "
            "it belongs to a different run"
        )

    if model is None:
        model = resolve_model(cfg)

    computed = 0
    lines = [header]
    for item in inputs:
        rid = item[0]
        if rid in existing:
            lines.append(existing[rid])
            continue
        try:
            if cfg.kind == "token":
                record = token_impact(item[1], model, cfg)
            else:
                record = span_impact(item[1], item[2], model, cfg)
        except (ExtractionError, ValueError) as exc:
            raise ExtractionError(f"record {rid!r}: {exc}") from exc
        lines.append(record_line(rid, record))
        computed += 1

    tmp_path = f"{out_path}.tmp"
    with open(tmp_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
    os.replace(tmp_path, out_path)
    return computed
