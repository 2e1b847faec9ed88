"""Gold-treebank readers and writers: CoNLL-U, PTB brackets, SciDTB discourse.

Readers validate trees/bracketings on the way in and raise
:class:`TreebankError` with a file location on malformed input. The
punctuation helpers implement the usual evaluation conventions: strip
punctuation tokens (reattaching their dependents to the removed token's own
head) and keep only short sentences.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .dependency import DepTree
from .validation import check_heads

PTB_PUNCT_TAGS = frozenset({".", ",", ":", "``", "''", "-LRB-", "-RRB-", "#", "$"})
UD_PUNCT_TAGS = frozenset({"PUNCT"})


class TreebankError(ValueError):
    """Raised for malformed treebank files."""


@dataclass
class GoldSentence:
    """One gold sentence (or discourse document, where units are EDUs)."""

    id: str
    tokens: list[str]
    upos: list[str] | None = None
    xpos: list[str] | None = None
    heads: list[int] | None = None
    brackets: set[tuple[int, int, str]] | None = None
    relations: list[str] | None = None
    kind: str = "token"

    def __post_init__(self):
        n = len(self.tokens)
        for name in ("upos", "xpos"):
            tags = getattr(self, name)
            if tags is not None and len(tags) != n:
                raise TreebankError(f"sentence {self.id!r}: {name} length mismatch")
        if self.heads is not None:
            try:
                self.heads = list(check_heads(self.heads, n=n))
            except ValueError as exc:
                raise TreebankError(f"sentence {self.id!r}: {exc}") from exc
        if self.brackets is not None:
            for a, b, _tag in self.brackets:
                if not (1 <= a <= b <= n):
                    raise TreebankError(f"sentence {self.id!r}: bracket ({a},{b}) out of range")

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def root(self) -> int:
        if self.heads is None:
            raise TreebankError(f"sentence {self.id!r} has no gold heads")
        return self.heads.index(0) + 1

    @property
    def edus(self) -> list[str]:
        if self.kind != "span":
            raise TreebankError(f"sentence {self.id!r} is not a discourse document")
        return self.tokens


def punct_positions(sentence: GoldSentence, tags=None) -> list[int]:
    """1-based positions of punctuation tokens.

    With no explicit *tags*, UD-tagged sentences use upos ``PUNCT`` (SYM is
    kept) and PTB-tagged ones the standard PTB punctuation tag set. Explicit
    *tags* match against either tag column.
    """
    if tags is None:
        if sentence.upos is not None:
            tags, columns = UD_PUNCT_TAGS, [sentence.upos]
        elif sentence.xpos is not None:
            tags, columns = PTB_PUNCT_TAGS, [sentence.xpos]
        else:
            raise TreebankError(
                f"sentence {sentence.id!r} has no POS tags for punctuation handling"
            )
    else:
        tags = frozenset(tags)
        columns = [c for c in (sentence.upos, sentence.xpos) if c is not None]
        if not columns:
            raise TreebankError(
                f"sentence {sentence.id!r} has no POS tags for punctuation handling"
            )
    return [
        i + 1
        for i in range(sentence.n)
        if any(col[i] in tags for col in columns)
    ]


def strip_punct(sentence: GoldSentence, tags=None) -> GoldSentence:
    """Remove punctuation tokens, preserving tree and bracketing validity.

    Dependents of a removed token climb to its nearest retained ancestor
    (or the root). If the removal would leave several roots, the leftmost
    becomes the root and the others attach to it. Brackets are re-spanned
    over the retained tokens; brackets with no retained token are dropped.
    """
    removed = set(punct_positions(sentence, tags))
    if not removed:
        return sentence
    keep = [i for i in range(1, sentence.n + 1) if i not in removed]
    if not keep:
        raise TreebankError(f"sentence {sentence.id!r}: all tokens are punctuation")
    new_index = {old: new + 1 for new, old in enumerate(keep)}

    new_heads = None
    if sentence.heads is not None:
        climbed = []
        for old in keep:
            h = sentence.heads[old - 1]
            while h != 0 and h in removed:
                h = sentence.heads[h - 1]
            climbed.append(h)
        roots = [i for i, h in enumerate(climbed) if h == 0]
        first_root = roots[0]
        for i in roots[1:]:
            climbed[i] = keep[first_root]
        new_heads = [0 if h == 0 else new_index[h] for h in climbed]

    new_brackets = None
    if sentence.brackets is not None:
        new_brackets = set()
        for a, b, tag in sentence.brackets:
            inside = [new_index[i] for i in keep if a <= i <= b]
            if inside:
                new_brackets.add((min(inside), max(inside), tag))

    return GoldSentence(
        id=sentence.id,
        tokens=[sentence.tokens[i - 1] for i in keep],
        upos=[sentence.upos[i - 1] for i in keep] if sentence.upos is not None else None,
        xpos=[sentence.xpos[i - 1] for i in keep] if sentence.xpos is not None else None,
        heads=new_heads,
        brackets=new_brackets,
        relations=sentence.relations,
        kind=sentence.kind,
    )


def wsj10_filter(corpus, max_words: int = 10, tags=None):
    """Keep sentences with at most *max_words* non-punctuation tokens."""
    out = []
    for sentence in corpus:
        words = sentence.n - len(punct_positions(sentence, tags))
        if words <= max_words:
            out.append(sentence)
    return out


def read_conllu(path) -> list[GoldSentence]:
    """Parse a CoNLL-U file into gold sentences.

    Multiword-token ranges (``1-2``), empty nodes (``1.1``) and comment
    lines are skipped. ``sent_id`` comments become sentence ids; sentences
    without one are numbered from 1 in file order.
    """
    sentences = []
    rows: list[tuple[int, list[str]]] = []
    sent_id = None
    count = 0

    def flush(end_line):
        nonlocal rows, sent_id, count
        if not rows:
            sent_id = None
            return
        count += 1
        sid = sent_id if sent_id is not None else str(count)
        tokens, upos, xpos, heads = [], [], [], []
        expected = 0
        for lineno, cols in rows:
            expected += 1
            if cols[0] != str(expected):
                raise TreebankError(f"{path}:{lineno}: token id {cols[0]!r}, expected {expected}")
            tokens.append(cols[1])
            upos.append(cols[3])
            xpos.append(cols[4])
            head_str = cols[6]
            if head_str == "_":
                heads.append(None)
            else:
                try:
                    heads.append(int(head_str))
                except ValueError:
                    raise TreebankError(f"{path}:{lineno}: non-integer HEAD {head_str!r}") from None
        has_heads = all(h is not None for h in heads)
        if not has_heads and any(h is not None for h in heads):
            raise TreebankError(f"{path}: sentence {sid!r} mixes empty and filled HEAD columns")
        n = len(tokens)
        if has_heads:
            for (lineno, _), h in zip(rows, heads):
                if not 0 <= h <= n:
                    raise TreebankError(f"{path}:{lineno}: HEAD {h} out of range [0, {n}]")
        try:
            sentences.append(
                GoldSentence(
                    id=sid,
                    tokens=tokens,
                    upos=None if all(t == "_" for t in upos) else upos,
                    xpos=None if all(t == "_" for t in xpos) else xpos,
                    heads=heads if has_heads else None,
                )
            )
        except TreebankError as exc:
            raise TreebankError(f"{path}: ending line {end_line}: {exc}") from None
        rows = []
        sent_id = None

    lineno = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("sent_id") and "=" in body:
                    sent_id = body.split("=", 1)[1].strip()
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise TreebankError(f"{path}:{lineno}: expected 10 columns, got {len(cols)}")
            token_id = cols[0]
            if "-" in token_id or "." in token_id:
                continue  # multiword range or empty node
            if not token_id.isdigit():
                raise TreebankError(f"{path}:{lineno}: bad token id {token_id!r}")
            rows.append((lineno, cols))
    flush(lineno)
    return sentences


def write_conllu(trees, path, ids=None) -> None:
    """Write (tokens, DepTree) pairs as minimal CoNLL-U: ID, FORM, HEAD.

    All other columns hold ``_``. Reading the file back yields the same
    head vectors.
    """
    items = list(trees)
    if ids is not None:
        ids = list(ids)
        if len(ids) != len(items):
            raise ValueError("ids and trees differ in length")
    with open(path, "w", encoding="utf-8") as fh:
        for k, (tokens, tree) in enumerate(items):
            heads = tree.heads if isinstance(tree, DepTree) else check_heads(tree)
            if len(tokens) != len(heads):
                raise ValueError(f"record {k}: {len(tokens)} tokens vs {len(heads)} heads")
            if ids is not None:
                fh.write(f"# sent_id = {ids[k]}\n")
            for i, (form, head) in enumerate(zip(tokens, heads), start=1):
                fh.write(f"{i}\t{form}\t_\t_\t_\t_\t{head}\t_\t_\t_\n")
            fh.write("\n")


def _tokenize_sexp(text: str):
    out = []
    buf = []
    for ch in text:
        if ch in "()":
            if buf:
                out.append("".join(buf))
                buf = []
            out.append(ch)
        elif ch.isspace():
            if buf:
                out.append("".join(buf))
                buf = []
        else:
            buf.append(ch)
    if buf:
        out.append("".join(buf))
    return out


def _parse_trees(tokens, path):
    pos = 0

    def parse_node():
        nonlocal pos
        if tokens[pos] != "(":
            raise TreebankError(f"{path}: expected '(' at token {pos}")
        pos += 1
        if pos >= len(tokens):
            raise TreebankError(f"{path}: unbalanced parentheses")
        label = ""
        if tokens[pos] not in "()":
            label = tokens[pos]
            pos += 1
        children = []
        leaf = None
        while pos < len(tokens) and tokens[pos] != ")":
            if tokens[pos] == "(":
                children.append(parse_node())
            else:
                leaf = tokens[pos]
                pos += 1
        if pos >= len(tokens):
            raise TreebankError(f"{path}: unbalanced parentheses")
        pos += 1  # ')'
        if leaf is not None and children:
            raise TreebankError(f"{path}: node {label!r} mixes leaves and subtrees")
        if leaf is not None:
            return (label, leaf)
        return (label, children)

    trees = []
    while pos < len(tokens):
        if tokens[pos] == ")":
            raise TreebankError(f"{path}: unbalanced parentheses")
        trees.append(parse_node())
    return trees


def _strip_label(label: str) -> str:
    # drop PTB function tags / coindexing: NP-SBJ-1 -> NP, S=2 -> S
    for sep in ("-", "="):
        if sep in label and not label.startswith("-"):
            label = label.split(sep, 1)[0]
    return label


def read_ptb(path) -> list[GoldSentence]:
    """Parse bracketed PTB trees (one per line, or .mrg layout).

    Trace leaves (``-NONE-``) are removed along with any emptied subtrees.
    Brackets cover phrase-level nodes (preterminals excluded); labels lose
    their function tags.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    trees = _parse_trees(_tokenize_sexp(text), path)

    sentences = []
    for index, tree in enumerate(trees, start=1):
        label, content = tree
        # unwrap the conventional extra ( (S ...) ) layer
        while label == "" and isinstance(content, list) and len(content) == 1:
            label, content = content[0]

        def prune(node):
            label, content = node
            if isinstance(content, str):
                return None if label == "-NONE-" else node
            kept = [c for c in (prune(child) for child in content) if c is not None]
            return (label, kept) if kept else None

        pruned = prune((label, content))
        if pruned is None:
            continue

        tokens: list[str] = []
        xpos: list[str] = []
        brackets: set[tuple[int, int, str]] = set()

        def walk(node) -> tuple[int, int]:
            label, content = node
            if isinstance(content, str):
                tokens.append(content)
                xpos.append(label)
                k = len(tokens)
                return (k, k)
            start = len(tokens) + 1
            for child in content:
                walk(child)
            end = len(tokens)
            brackets.add((start, end, _strip_label(label)))
            return (start, end)

        walk(pruned)
        if not tokens:
            continue
        sentences.append(
            GoldSentence(
                id=str(index), tokens=tokens, xpos=xpos, brackets=brackets
            )
        )
    return sentences


def read_scidtb(path) -> list[GoldSentence]:
    """Read SciDTB-style discourse files: EDUs with dependency heads.

    *path* may be one ``.dep`` JSON file or a directory of them. Each file
    holds an object whose ``root`` array lists ``{id, parent, text,
    relation}`` entries; id 0 (the artificial root, if present) is skipped.
    """
    if os.path.isdir(path):
        names = sorted(f for f in os.listdir(path) if f.endswith((".dep", ".json")))
        docs = []
        for name in names:
            docs.extend(read_scidtb(os.path.join(path, name)))
        return docs

    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TreebankError(f"{path}: not valid JSON: {exc.msg}") from None
    if not isinstance(payload, dict) or not isinstance(payload.get("root"), list):
        raise TreebankError(f"{path}: expected an object with a 'root' array")

    entries = []
    for record in payload["root"]:
        if not isinstance(record, dict) or "id" not in record:
            raise TreebankError(f"{path}: every entry needs an 'id'")
        if int(record["id"]) == 0:
            continue
        if "parent" not in record:
            raise TreebankError(f"{path}: EDU {record['id']} missing 'parent'")
        entries.append(record)
    entries.sort(key=lambda r: int(r["id"]))
    n = len(entries)
    if n == 0:
        raise TreebankError(f"{path}: no EDUs")
    for expected, record in enumerate(entries, start=1):
        if int(record["id"]) != expected:
            raise TreebankError(f"{path}: EDU ids must be 1..{n}, found {record['id']}")
    heads = []
    for record in entries:
        parent = int(record["parent"])
        if not 0 <= parent <= n:
            raise TreebankError(f"{path}: EDU {record['id']} parent {parent} out of range [0, {n}]")
        heads.append(parent)
    roots = sum(1 for h in heads if h == 0)
    if roots != 1:
        raise TreebankError(f"{path}: expected one root EDU, found {roots}")
    doc_id = os.path.splitext(os.path.basename(path))[0]
    return [
        GoldSentence(
            id=doc_id,
            tokens=[str(r.get("text", "")) for r in entries],
            heads=heads,
            relations=[str(r.get("relation", "")) for r in entries],
            kind="span",
        )
    ]
