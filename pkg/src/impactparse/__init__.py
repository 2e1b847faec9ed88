"""Induce syntax from impact matrices and score it against gold treebanks.

The package takes matrices of pairwise inter-unit influence (produced by
perturbing a masked language model, or synthesized for baselines), decodes
dependency trees (projective and non-projective), constituency bracketings,
and discourse structures from them, and evaluates everything against
CoNLL-U, PTB, and SciDTB gold standards.
"""

from .constituency import (
    ConstTree,
    branching_baseline,
    mart_parse,
    parse_bracket_string,
    split_gain,
    to_bracket_string,
)
from .dependency import (
    DepTree,
    ScoreOptions,
    arc_scores,
    chain_baseline,
    cle,
    eisner,
    infer_root,
    tree_score,
)
from .estimators import BranchingBaseline, ChainBaseline, DependencyParser, MartParser
from .matrix import (
    ImpactMatrix,
    MatrixCorpus,
    PkmError,
    heatmap_pgm,
    load_corpus,
    random_matrix,
    random_values,
    render_heatmap,
    save_corpus,
)
from .metrics import (
    Counts,
    EvalReport,
    accuracy_by_distance,
    aggregate,
    bracket_counts,
    f1_from_counts,
    ned,
    tag_accuracy,
    uas,
    uuas,
)
from .treebank import (
    GoldSentence,
    TreebankError,
    punct_positions,
    read_conllu,
    read_ptb,
    read_scidtb,
    strip_punct,
    write_conllu,
    wsj10_filter,
)

__version__ = "0.1.0"

__all__ = [
    "BranchingBaseline",
    "ChainBaseline",
    "ConstTree",
    "Counts",
    "DepTree",
    "DependencyParser",
    "EvalReport",
    "GoldSentence",
    "ImpactMatrix",
    "MartParser",
    "MatrixCorpus",
    "PkmError",
    "ScoreOptions",
    "TreebankError",
    "accuracy_by_distance",
    "aggregate",
    "arc_scores",
    "bracket_counts",
    "branching_baseline",
    "chain_baseline",
    "cle",
    "eisner",
    "f1_from_counts",
    "heatmap_pgm",
    "infer_root",
    "load_corpus",
    "mart_parse",
    "ned",
    "parse_bracket_string",
    "punct_positions",
    "random_matrix",
    "random_values",
    "read_conllu",
    "read_ptb",
    "read_scidtb",
    "render_heatmap",
    "save_corpus",
    "split_gain",
    "strip_punct",
    "tag_accuracy",
    "to_bracket_string",
    "tree_score",
    "uas",
    "uuas",
    "write_conllu",
    "wsj10_filter",
]
