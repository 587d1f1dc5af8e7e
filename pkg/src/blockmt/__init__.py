"""Block-based statistical machine translation toolkit.

Trains bilingual block dictionaries with translation probabilities and
correlation scores from pre-aligned parallel corpora, and decodes new
sentences by covering them with dictionary blocks under an adhesion-
corrected translation objective.
"""

from .adhesion import build_laf_table, gaf, laf_context, overlap_factor
from .blocks import (
    Block,
    Budget,
    PairBatch,
    PairGenConfig,
    PairRecord,
    count_blocks_formula,
    count_pairs_formula,
    enumerate_blocks,
    generate_pairs_all_in,
    generate_pairs_symmetric,
)
from .corpus import (
    SentencePair,
    TokenizedSentence,
    Vocabulary,
    parse_corpus,
    tokenize_sentence,
)
from .decoder import (
    DecodeParams,
    Hypothesis,
    candidates,
    correction,
    enumerate_covers,
    merge_targets,
    score_hypothesis,
    translate,
    translate_exhaustive,
)
from .modelio import load_model, save_model
from .stats import (
    CountTable,
    DictEntryTS,
    Model,
    ThresholdConfig,
    accumulate,
    build_dictionaries,
    conditionals,
    correlation,
    filter_cognates,
    grow_blocks,
    probability,
    relative_correlation,
)
from .train import train_model

__version__ = "0.1.0"

__all__ = [
    "Block",
    "Budget",
    "CountTable",
    "DecodeParams",
    "DictEntryTS",
    "Hypothesis",
    "Model",
    "PairBatch",
    "PairGenConfig",
    "PairRecord",
    "SentencePair",
    "ThresholdConfig",
    "TokenizedSentence",
    "Vocabulary",
    "accumulate",
    "build_dictionaries",
    "build_laf_table",
    "candidates",
    "conditionals",
    "correlation",
    "correction",
    "count_blocks_formula",
    "count_pairs_formula",
    "enumerate_blocks",
    "enumerate_covers",
    "filter_cognates",
    "gaf",
    "generate_pairs_all_in",
    "generate_pairs_symmetric",
    "grow_blocks",
    "laf_context",
    "load_model",
    "merge_targets",
    "overlap_factor",
    "parse_corpus",
    "probability",
    "relative_correlation",
    "save_model",
    "score_hypothesis",
    "tokenize_sentence",
    "train_model",
    "translate",
    "translate_exhaustive",
]
