"""Contiguous word-block enumeration and training pair generation.

A block is an ordered contiguous token-id sequence from one sentence,
represented as a plain tuple; the language side is implied by context
(which table or which half of a pair record it sits in).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .corpus import EMPTY_ID, SentencePair
from .errors import EmptySentenceError

Block = tuple[int, ...]

EMPTY_BLOCK: Block = (EMPTY_ID,)

ALL_IN = "all_in"
SYMMETRIC = "symmetric"


class PairRecord(NamedTuple):
    source_block: Block
    target_block: Block


@dataclass
class PairGenConfig:
    """Knobs for the training pair generator.

    ``alternative`` selects between pairing every source block with every
    target block of a sentence pair (``all_in``) and pairing only
    positionally matched blocks of equal-count segmentations
    (``symmetric``).  ``budget`` caps the total number of records emitted
    across a whole generation pass; ``w_max`` caps the segment count for
    the symmetric alternative.
    """

    alternative: str = ALL_IN
    l_max: int = 3
    budget: int | None = None
    emit_empty: bool = False
    w_max: int = 4

    def __post_init__(self) -> None:
        if self.alternative not in (ALL_IN, SYMMETRIC):
            raise ValueError(f"unknown alternative {self.alternative!r}")
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.w_max < 1:
            raise ValueError("w_max must be >= 1")


class Budget:
    """Mutable record countdown shared across sentence pairs.

    ``limit=None`` means unbounded.  ``truncated`` flips once a request
    could not be fully granted.
    """

    def __init__(self, limit: int | None):
        self.remaining = limit
        self.truncated = False

    def grant(self) -> bool:
        """Consume one record; False once the budget is exhausted."""
        if self.remaining is None:
            return True
        if self.remaining <= 0:
            self.truncated = True
            return False
        self.remaining -= 1
        return True


@dataclass
class PairBatch:
    """Records generated for one sentence pair plus the truncation flag."""

    records: list[PairRecord]
    truncated: bool


def enumerate_blocks(sentence: Sequence[int], l_max: int) -> list[Block]:
    """Every contiguous block of length 1..min(l_max, L), in canonical order.

    Canonical order is by start index, then by length, matching the
    left-to-right growth of blocks within a sentence.  Repeated content
    yields repeated blocks (occurrences are counted, not types).
    """
    if not sentence:
        raise EmptySentenceError("cannot enumerate blocks of an empty sentence")
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    length = len(sentence)
    longest = min(l_max, length)
    out: list[Block] = []
    for start in range(length):
        top = min(longest, length - start)
        for size in range(1, top + 1):
            out.append(tuple(sentence[start : start + size]))
    return out


def count_blocks_formula(length: int, l_max: int) -> int:
    """Closed-form count of blocks of length <= l_max in an L-token sentence.

    Equals ``l*(2L - l + 1)/2`` and reduces to ``L*(L+1)/2`` when the cap
    reaches the sentence length.
    """
    if length < 1:
        raise ValueError("sentence length must be >= 1")
    if not 1 <= l_max <= length:
        raise ValueError("block length cap must satisfy 1 <= l <= L")
    return l_max * (2 * length - l_max + 1) // 2


def count_pairs_formula(len_source: int, len_target: int, l_max: int) -> int:
    """Closed-form count of Cartesian block pairs for one sentence pair."""
    if l_max > min(len_source, len_target):
        raise ValueError("block length cap exceeds a sentence length")
    return count_blocks_formula(len_source, l_max) * count_blocks_formula(
        len_target, l_max
    )


def _iter_all_in(pair: SentencePair, cfg: PairGenConfig) -> Iterator[PairRecord]:
    blocks_s = enumerate_blocks(pair.source, cfg.l_max)
    blocks_t = enumerate_blocks(pair.target, cfg.l_max)
    for src in blocks_s:
        for tgt in blocks_t:
            yield PairRecord(src, tgt)
    if cfg.emit_empty:
        for src in blocks_s:
            yield PairRecord(src, EMPTY_BLOCK)
        for tgt in blocks_t:
            yield PairRecord(EMPTY_BLOCK, tgt)


def _compositions(total: int, parts: int, l_max: int) -> Iterator[tuple[int, ...]]:
    """Ways to split ``total`` into ``parts`` ordered pieces of size 1..l_max.

    Yielded in lexicographic order of the piece sizes, which coincides
    with lexicographic order of the split boundaries.
    """
    if parts == 1:
        if 1 <= total <= l_max:
            yield (total,)
        return
    first_top = min(l_max, total - (parts - 1))
    for first in range(1, first_top + 1):
        for rest in _compositions(total - first, parts - 1, l_max):
            yield (first,) + rest


def _split_blocks(sentence: tuple[int, ...], sizes: tuple[int, ...]) -> list[Block]:
    out = []
    pos = 0
    for size in sizes:
        out.append(sentence[pos : pos + size])
        pos += size
    return out


def _iter_symmetric(pair: SentencePair, cfg: PairGenConfig) -> Iterator[PairRecord]:
    top_w = min(len(pair.source), len(pair.target), cfg.w_max)
    for w in range(1, top_w + 1):
        for src_sizes in _compositions(len(pair.source), w, cfg.l_max):
            src_split = _split_blocks(pair.source, src_sizes)
            for tgt_sizes in _compositions(len(pair.target), w, cfg.l_max):
                tgt_split = _split_blocks(pair.target, tgt_sizes)
                for j in range(w):
                    yield PairRecord(src_split[j], tgt_split[j])


def _iter_pair(pair: SentencePair, cfg: PairGenConfig) -> Iterator[PairRecord]:
    if cfg.alternative == ALL_IN:
        return _iter_all_in(pair, cfg)
    return _iter_symmetric(pair, cfg)


def _collect(pair: SentencePair, cfg: PairGenConfig, budget: Budget | None) -> PairBatch:
    if budget is None:
        budget = Budget(cfg.budget)
    records = []
    for record in _iter_pair(pair, cfg):
        if not budget.grant():
            break
        records.append(record)
    return PairBatch(records=records, truncated=budget.truncated)


def generate_pairs_all_in(
    pair: SentencePair, cfg: PairGenConfig, budget: Budget | None = None
) -> PairBatch:
    """Cartesian product of the two sides' blocks, in canonical order.

    Canonical order iterates source blocks in the outer loop and target
    blocks in the inner loop; with ``emit_empty`` set, pairs against the
    EMPTY block are appended after the product (source side first).
    A shared ``budget`` truncates emission deterministically.
    """
    if cfg.alternative != ALL_IN:
        raise ValueError("config does not select the all_in alternative")
    return _collect(pair, cfg, budget)


def generate_pairs_symmetric(
    pair: SentencePair, cfg: PairGenConfig, budget: Budget | None = None
) -> PairBatch:
    """Positionally matched pairs over equal-count segmentations.

    For each segment count w up to ``min(L_s, L_t, w_max)``, both sides
    are split into w contiguous blocks of length <= l_max in every
    possible way; each (source split, target split) combination emits the
    w pairs matching segment j to segment j.  Order: ascending w, then
    lexicographic source split, then lexicographic target split.
    """
    if cfg.alternative != SYMMETRIC:
        raise ValueError("config does not select the symmetric alternative")
    return _collect(pair, cfg, budget)


def iter_corpus_records(
    pairs: Sequence[SentencePair], cfg: PairGenConfig, budget: Budget | None = None
) -> Iterator[PairRecord]:
    """Stream records over a whole corpus under one shared budget.

    Check ``budget.truncated`` after exhaustion to learn whether the
    pass was cut short.
    """
    if budget is None:
        budget = Budget(cfg.budget)
    for pair in pairs:
        for record in _iter_pair(pair, cfg):
            if not budget.grant():
                return
            yield record


def render_block(block: Block, vocab) -> str:
    """Space-joined surfaces; EMPTY renders as its reserved surface."""
    return " ".join(vocab.surface(i) for i in block)
