"""End-to-end training: corpus -> records -> counts -> model."""

from __future__ import annotations

from typing import Sequence

from .adhesion import build_laf_table
from .blocks import Budget, PairGenConfig, iter_corpus_records
from .corpus import SentencePair, Vocabulary
from .errors import EmptyModelError
from .stats import (
    ThresholdConfig,
    Model,
    accumulate,
    build_dictionaries,
    filter_cognates,
)


def train_model(
    pairs: Sequence[SentencePair],
    src_vocab: Vocabulary,
    tgt_vocab: Vocabulary,
    gen_config: PairGenConfig | None = None,
    thresholds: ThresholdConfig | None = None,
    cognates: Sequence[tuple[str, str]] | None = None,
) -> Model:
    """Train a model over parsed sentence pairs.

    Streams training records under the configured global budget, drops
    cognate-mismatched records when a cognate table is given, tallies
    counts, threshold-filters the dictionaries, and attaches the local
    adhesion table.
    """
    if not pairs:
        raise EmptyModelError("cannot train on an empty corpus")
    gen_config = gen_config if gen_config is not None else PairGenConfig()
    thresholds = thresholds if thresholds is not None else ThresholdConfig()

    budget = Budget(gen_config.budget)
    records = iter_corpus_records(pairs, gen_config, budget)
    if cognates:
        records = filter_cognates(records, cognates, src_vocab, tgt_vocab)
    counts = accumulate(records)
    if counts.n == 0:
        raise EmptyModelError("no training records survived generation/filtering")

    model = build_dictionaries(
        counts,
        thresholds,
        src_vocab,
        tgt_vocab,
        gen_config=gen_config,
        truncated=budget.truncated,
    )
    model.laf = build_laf_table(model)
    return model
