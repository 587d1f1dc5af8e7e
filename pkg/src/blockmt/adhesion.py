"""Adhesion factors reconciling overlapping blocks.

Words sharing a block, or sitting in the overlap of two blocks, are
"adhered".  The global factor corrects a block-product probability for
one doubly counted word by 1/P(word), which is exact when words combine
independently; the local factor replaces that universal form with a
per-word average estimated from stored triple/pair probabilities.
"""

from __future__ import annotations

import math
from typing import Sequence

from .blocks import Block
from .stats import LafTable, Model

MODE_LITERAL = "literal"
MODE_GAF = "gaf"
MODE_LAF = "laf"
ADHESION_MODES = (MODE_LITERAL, MODE_GAF, MODE_LAF)


def gaf(p: float) -> float:
    """Global adhesion factor 1/p for one overlap word."""
    if p <= 0.0:
        raise ValueError("global adhesion factor needs a positive probability")
    return 1.0 / p


def laf_context(p_triple: float, p_left: float, p_right: float) -> float:
    """Local adhesion factor of a middle word in one (left, right) context.

    ``p_triple / (p_left * p_right)``; under exact independence of the
    three words this reduces to 1/P(middle).
    """
    if p_triple <= 0.0 or p_left <= 0.0 or p_right <= 0.0:
        raise ValueError("local adhesion factor needs positive probabilities")
    return p_triple / (p_left * p_right)


def build_laf_table(model: Model) -> LafTable:
    """Average each word's context factors over all stored triples.

    For every 3-word block (a, w, b) whose two 2-word halves are also
    stored, the word w collects one context factor; factors are averaged
    with compensated summation so accumulation order cannot perturb the
    result.  Words with no stored context get support 0 and fall back to
    the global factor at decode time.
    """
    table = LafTable()
    for side in ("source", "target"):
        counts = model.counts_for_side(side)
        sums: dict[int, list[float]] = {}
        for block, n_triple in counts.items():
            if len(block) != 3:
                continue
            left = block[:2]
            right = block[1:]
            n_left = counts.get(left, 0)
            n_right = counts.get(right, 0)
            if n_left == 0 or n_right == 0:
                continue
            factor = (n_triple * model.n) / (n_left * n_right)
            sums.setdefault(block[1], []).append(factor)
        side_table = table.for_side(side)
        for token, factors in sums.items():
            side_table[token] = (math.fsum(factors) / len(factors), len(factors))
    return table


def overlap_length(left: Block, right: Block) -> int:
    """Length of the maximal suffix of ``left`` equal to a prefix of ``right``."""
    top = min(len(left), len(right))
    for size in range(top, 0, -1):
        if left[-size:] == right[:size]:
            return size
    return 0


def word_probability(
    model: Model, side: str, token: int, p_floor: float | None = None
) -> float:
    count = model.counts_for_side(side).get((token,), 0)
    if count == 0:
        if p_floor is not None:
            return p_floor
        raise ValueError(f"word id {token} has zero {side} probability")
    return count / model.n


def words_factor(
    words: Sequence[int],
    mode: str,
    model: Model,
    side: str = "target",
    p_floor: float | None = None,
) -> float:
    """Per-mode product over overlap words; empty input gives 1.0.

    ``literal`` multiplies the word probabilities themselves, ``gaf``
    their reciprocals, and ``laf`` the stored local factors (falling back
    to the global factor for words without context support).
    """
    if mode not in ADHESION_MODES:
        raise ValueError(f"unknown adhesion mode {mode!r}")
    factor = 1.0
    laf_side = model.laf.for_side(side)
    for token in words:
        if mode == MODE_LITERAL:
            factor *= word_probability(model, side, token, p_floor)
        elif mode == MODE_GAF:
            factor *= gaf(word_probability(model, side, token, p_floor))
        else:
            stored = laf_side.get(token)
            if stored is not None and stored[1] > 0:
                factor *= stored[0]
            else:
                factor *= gaf(word_probability(model, side, token, p_floor))
    return factor


def overlap_factor(
    left: Block,
    right: Block,
    mode: str,
    model: Model,
    side: str = "target",
    p_floor: float | None = None,
) -> float:
    """Adhesion correction for one adjacent block pair.

    The overlap is the maximal token sequence that is simultaneously a
    suffix of ``left`` and a prefix of ``right``; an empty overlap yields
    1.0 in every mode.
    """
    size = overlap_length(left, right)
    if size == 0:
        return 1.0
    return words_factor(left[len(left) - size :], mode, model, side, p_floor)
