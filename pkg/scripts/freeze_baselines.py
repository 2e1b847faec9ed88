#!/usr/bin/env python3
"""Compute the frozen baseline oracle for the bundled fixture.

Deliberately self-contained: this script re-implements CoNLL-U parsing,
chain construction, the splitmix64 random fill, projective decoding (by
exhaustive enumeration of projective trees), and UAS/UUAS/NED counting
from scratch, without importing the package. Its output is frozen into
tests/data/frozen_baselines.json; the CLI must reproduce every value
byte-exactly.

Run from the repo root: python3 scripts/freeze_baselines.py
"""

import json
import os

RANDOM_SEED = 42

# --- minimal CoNLL-U ---------------------------------------------------------


def parse_conllu(path):
    sentences = []
    sid, heads = None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                if heads:
                    sentences.append((sid, heads))
                sid, heads = None, []
                continue
            if line.startswith("#"):
                if line[1:].strip().startswith("sent_id"):
                    sid = line.split("=", 1)[1].strip()
                continue
            cols = line.split("\t")
            if "-" in cols[0] or "." in cols[0]:
                continue
            heads.append(int(cols[6]))
    if heads:
        sentences.append((sid, heads))
    return sentences


# --- chains ------------------------------------------------------------------


def right_chain(n, root):
    heads = []
    for i in range(1, n + 1):
        if i == root:
            heads.append(0)
        elif i < n:
            heads.append(i + 1)
        else:
            heads.append(root)
    return heads


def left_chain(n, root):
    heads = []
    for i in range(1, n + 1):
        if i == root:
            heads.append(0)
        elif i > 1:
            heads.append(i - 1)
        else:
            heads.append(root)
    return heads


# --- splitmix64 random matrices ----------------------------------------------

MASK = (1 << 64) - 1


def splitmix64_doubles(seed):
    state = seed & MASK
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        z = z ^ (z >> 31)
        yield (z >> 11) * 2.0**-53


def random_impact(n, seed):
    gen = splitmix64_doubles(seed)
    values = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                values[i][j] = next(gen)
    return values


# --- projective decoding by enumeration --------------------------------------


def projective_trees(n):
    def forests(i, j):
        if i > j:
            yield (), {}
            return
        for split in range(i, j + 1):
            for r1, t1 in trees(i, split):
                for roots, rest in forests(split + 1, j):
                    yield (r1,) + roots, {**t1, **rest}

    def trees(i, j):
        for h in range(i, j + 1):
            for lr, lt in forests(i, h - 1):
                for rr, rt in forests(h + 1, j):
                    heads = {**lt, **rt}
                    for r in lr + rr:
                        heads[r] = h
                    yield h, heads

    for root, heads in trees(1, n):
        heads[root] = 0
        yield root, [heads[k] for k in range(1, n + 1)]


def best_projective(impact, root):
    """Max-score projective tree; arc h->d scored by impact[d-1][h-1] (h2d)."""
    n = len(impact)
    best, best_score = None, float("-inf")
    for tree_root, heads in projective_trees(n):
        if tree_root != root:
            continue
        score = sum(impact[d][heads[d] - 1] for d in range(n) if heads[d] != 0)
        if score > best_score:
            best_score = score
            best = heads
    return best


# --- metrics -----------------------------------------------------------------


def count_uas(pred, gold):
    return sum(1 for p, g in zip(pred, gold) if p == g), len(gold)


def count_uuas(pred, gold):
    def undirected(heads):
        return {
            (min(i, h), max(i, h))
            for i, h in enumerate(heads, start=1)
            if h != 0
        }

    ge = undirected(gold)
    return len(ge & undirected(pred)), len(ge)


def count_ned(pred, gold):
    n = len(gold)
    correct = 0
    for i in range(1, n + 1):
        p, g = pred[i - 1], gold[i - 1]
        if p == 0:
            correct += g == 0
            continue
        kids = {d for d in range(1, n + 1) if gold[d - 1] == i}
        grand = gold[g - 1] if g != 0 else 0
        if p == g or p in kids or (grand != 0 and p == grand):
            correct += 1
    return correct, n


# --- main --------------------------------------------------------------------


def evaluate(predictions, golds):
    out = {}
    for name, counter in (("uas", count_uas), ("uuas", count_uuas), ("ned", count_ned)):
        c_sum = t_sum = 0
        for pred, gold in zip(predictions, golds):
            c, t = counter(pred, gold)
            c_sum += c
            t_sum += t
        out[name] = {
            "correct": c_sum,
            "total": t_sum,
            "value": repr(100.0 * c_sum / t_sum),
        }
    return out


def main():
    here = os.path.dirname(__file__)
    data = os.path.join(here, "..", "tests", "data")
    sentences = parse_conllu(os.path.join(data, "fixture20.conllu"))
    golds = [heads for _sid, heads in sentences]
    roots = [heads.index(0) + 1 for heads in golds]

    frozen = {
        "right": evaluate(
            [right_chain(len(g), r) for g, r in zip(golds, roots)], golds
        ),
        "left": evaluate(
            [left_chain(len(g), r) for g, r in zip(golds, roots)], golds
        ),
        "random_seed42": evaluate(
            [
                best_projective(random_impact(len(g), RANDOM_SEED + i), r)
                for i, (g, r) in enumerate(zip(golds, roots))
            ],
            golds,
        ),
    }
    out_path = os.path.join(data, "frozen_baselines.json")
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(frozen, fh, indent=2)
        fh.write("\n")
    for kind, table in frozen.items():
        print(kind, {k: v["value"] for k, v in table.items()})


if __name__ == "__main__":
    main()
