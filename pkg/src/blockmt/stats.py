"""Counts, probabilities, correlations, and the filtered block dictionaries.

Probabilities throughout are relative frequencies in the generated pair
record stream: ``P(S) = n_s[S]/n`` etc.  Counts are the stored ground
truth; every probability is a derived view, which keeps the conditional
identity ``P(T|S) * P(S) = P(T,S) = P(S|T) * P(T)`` exact in count
arithmetic and makes persistence lossless.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .blocks import Block, PairGenConfig, PairRecord
from .corpus import Vocabulary
from .errors import EmptyModelError, ParseError


@dataclass
class CountTable:
    """Occurrence counts over one generation pass.

    ``n`` is the total number of records consumed; ``n_s``/``n_t`` are
    the per-side marginal block counts and ``n_st`` the joint pair
    counts.  Tables from shard-parallel passes merge by plain addition.
    """

    n: int = 0
    n_s: Counter = field(default_factory=Counter)
    n_t: Counter = field(default_factory=Counter)
    n_st: Counter = field(default_factory=Counter)

    def merge(self, other: "CountTable") -> "CountTable":
        self.n += other.n
        self.n_s.update(other.n_s)
        self.n_t.update(other.n_t)
        self.n_st.update(other.n_st)
        return self


def accumulate(records: Iterable[PairRecord]) -> CountTable:
    """Tally a record stream into exact multiset counts."""
    table = CountTable()
    n_s, n_t, n_st = table.n_s, table.n_t, table.n_st
    total = 0
    for src, tgt in records:
        total += 1
        n_s[src] += 1
        n_t[tgt] += 1
        n_st[(src, tgt)] += 1
    table.n = total
    return table


def probability(count: int, n: int) -> float:
    """Relative frequency count/n; n must be positive."""
    if n < 1:
        raise EmptyModelError("no records counted; probabilities undefined")
    if count < 0 or count > n:
        raise ValueError("count must lie in [0, n]")
    return count / n


def conditionals(n_st: int, n_s: int, n_t: int, n: int) -> tuple[float, float, float]:
    """(P(T|S), P(S|T), P(T,S)) from raw counts.

    The two conditionals and the joint satisfy the exact identity
    ``P(T|S)*P(S) == P(T,S) == P(S|T)*P(T)`` because all three are count
    ratios over the same n.
    """
    if n_s == 0 or n_t == 0:
        raise ValueError("conditional undefined for a zero marginal")
    if n_st > min(n_s, n_t):
        raise ValueError("joint count exceeds a marginal count")
    return n_st / n_s, n_st / n_t, probability(n_st, n)


def correlation(p_joint: float, p_a: float, p_b: float) -> float:
    """Covariance-style co-occurrence measure; zero under independence."""
    return p_joint - p_a * p_b


def relative_correlation(corr: float, p_a: float, p_b: float) -> float:
    """Correlation normalized by the chance co-occurrence probability.

    Equals ``p_joint/(p_a*p_b) - 1`` and is bounded below by -1; the
    normalization keeps rare but strongly associated blocks visible.
    """
    if p_a <= 0.0 or p_b <= 0.0:
        raise ValueError("relative correlation undefined for a zero marginal")
    return corr / (p_a * p_b)


def _rho_from_counts(n_joint: int, n_a: int, n_b: int, n: int) -> float:
    # p_joint/(p_a*p_b) - 1 computed to minimize rounding
    return (n_joint * n) / (n_a * n_b) - 1.0


@dataclass
class ThresholdConfig:
    """Relative-correlation cutoffs for dictionary inclusion.

    ``c_plus_*`` gate the positive tail (keep), ``c_minus_*`` the
    negative tail (keep, flagged prohibited); anything between is
    dropped except single-word blocks and word-to-word pairs, which
    always stay so the decoder keeps a fallback.  ``min_count`` is a
    noise floor on stored entries (1 disables it).
    """

    c_plus_s: float = 2.0
    c_minus_s: float = 0.9
    c_plus_t: float = 2.0
    c_minus_t: float = 0.9
    c_plus_ts: float = 2.0
    c_minus_ts: float = 0.9
    min_count: int = 1

    def __post_init__(self) -> None:
        for name in ("c_plus_s", "c_minus_s", "c_plus_t", "c_minus_t",
                     "c_plus_ts", "c_minus_ts"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")


@dataclass
class DictEntryTS:
    """One bilingual dictionary entry with derived probability views."""

    source_block: Block
    target_block: Block
    count: int
    p_joint: float
    p_t_given_s: float
    p_s_given_t: float
    rho: float
    prohibited: bool


@dataclass(eq=False)
class LafTable:
    """Per-side word adhesion factors: token id -> (factor, support)."""

    source: dict[int, tuple[float, int]] = field(default_factory=dict)
    target: dict[int, tuple[float, int]] = field(default_factory=dict)

    def for_side(self, side: str) -> dict[int, tuple[float, int]]:
        return self.source if side == "source" else self.target


@dataclass(eq=False)
class Model:
    """The trained artifact: dictionaries, adhesion table, and metadata.

    ``s_counts``/``t_counts`` are the monolingual dictionaries (block ->
    marginal count), ``ts_entries`` the bilingual one.  The model is
    immutable after training and safe for concurrent readers.
    """

    src_vocab: Vocabulary
    tgt_vocab: Vocabulary
    n: int
    s_counts: dict[Block, int]
    t_counts: dict[Block, int]
    ts_entries: dict[tuple[Block, Block], DictEntryTS]
    laf: LafTable = field(default_factory=LafTable)
    gen_config: PairGenConfig = field(default_factory=PairGenConfig)
    thresholds: ThresholdConfig = field(default_factory=ThresholdConfig)
    truncated: bool = False

    @cached_property
    def ts_by_source(self) -> dict[Block, list[DictEntryTS]]:
        index: dict[Block, list[DictEntryTS]] = {}
        for entry in self.ts_entries.values():
            index.setdefault(entry.source_block, []).append(entry)
        return index

    def p_source(self, block: Block) -> float:
        return probability(self.s_counts.get(block, 0), self.n)

    def p_target(self, block: Block) -> float:
        return probability(self.t_counts.get(block, 0), self.n)

    def counts_for_side(self, side: str) -> dict[Block, int]:
        return self.s_counts if side == "source" else self.t_counts


def _adjacent_splits(block: Block) -> Iterator[tuple[Block, Block]]:
    for cut in range(1, len(block)):
        yield block[:cut], block[cut:]


def _mono_keep(block: Block, counts: Counter, n: int, c_plus: float) -> bool:
    """Multi-word block retention: some adjacent split has rho above cut."""
    full = counts[block]
    for prefix, suffix in _adjacent_splits(block):
        n_pre = counts.get(prefix, 0)
        n_suf = counts.get(suffix, 0)
        if n_pre == 0 or n_suf == 0:
            continue
        if _rho_from_counts(full, n_pre, n_suf, n) > c_plus:
            return True
    return False


def build_dictionaries(
    counts: CountTable,
    thresholds: ThresholdConfig,
    src_vocab: Vocabulary,
    tgt_vocab: Vocabulary,
    gen_config: PairGenConfig | None = None,
    truncated: bool = False,
) -> Model:
    """Threshold-filter a count table into the three dictionaries.

    Multi-word monolingual blocks survive when some adjacent split shows
    relative correlation above the side's positive cutoff.  Bilingual
    entries survive the positive tail, or the negative tail flagged
    prohibited; word-to-word pairs and single-word blocks are always
    retained (decoding fallback).  Blocks referenced by surviving
    bilingual entries are pulled into the monolingual dictionaries so
    every stored pair has both marginals available.
    """
    if counts.n == 0:
        raise EmptyModelError("cannot build dictionaries from an empty count table")
    min_count = thresholds.min_count
    n = counts.n

    s_keep: dict[Block, int] = {}
    for block, count in counts.n_s.items():
        if count < min_count:
            continue
        if len(block) == 1 or _mono_keep(block, counts.n_s, n, thresholds.c_plus_s):
            s_keep[block] = count
    t_keep: dict[Block, int] = {}
    for block, count in counts.n_t.items():
        if count < min_count:
            continue
        if len(block) == 1 or _mono_keep(block, counts.n_t, n, thresholds.c_plus_t):
            t_keep[block] = count

    ts_keep: dict[tuple[Block, Block], DictEntryTS] = {}
    for (src, tgt), count in counts.n_st.items():
        if count < min_count:
            continue
        n_s = counts.n_s[src]
        n_t = counts.n_t[tgt]
        rho = _rho_from_counts(count, n_s, n_t, n)
        word_pair = len(src) == 1 and len(tgt) == 1
        if not word_pair and not (
            rho > thresholds.c_plus_ts or rho < -thresholds.c_minus_ts
        ):
            continue
        p_t_s, p_s_t, p_joint = conditionals(count, n_s, n_t, n)
        ts_keep[(src, tgt)] = DictEntryTS(
            source_block=src,
            target_block=tgt,
            count=count,
            p_joint=p_joint,
            p_t_given_s=p_t_s,
            p_s_given_t=p_s_t,
            rho=rho,
            prohibited=rho < -thresholds.c_minus_ts,
        )
        # Marginals of every stored pair must be resolvable from the model.
        s_keep.setdefault(src, n_s)
        t_keep.setdefault(tgt, n_t)

    return Model(
        src_vocab=src_vocab,
        tgt_vocab=tgt_vocab,
        n=n,
        s_counts=s_keep,
        t_counts=t_keep,
        ts_entries=ts_keep,
        gen_config=gen_config if gen_config is not None else PairGenConfig(),
        thresholds=thresholds,
        truncated=truncated,
    )


GROW_ANY_SPLIT = "any_split"
GROW_ALL_SPLITS = "all_splits"


def grow_blocks(
    sentences: Sequence[Sequence[int]],
    k: int,
    admitted: set[Block],
    mode: str = GROW_ANY_SPLIT,
) -> set[Block]:
    """Length-k blocks worth analysing, given the admitted shorter ones.

    A candidate is admitted when its (prefix, last word) or (first word,
    suffix) decomposition into previously admitted sub-blocks shows
    strictly positive correlation (``all_splits`` requires both).
    Frequencies are normalized within each block-length class so that an
    uncorrelated corpus admits candidates at roughly the chance rate.
    Applies to one language side at a time.
    """
    if k < 2:
        raise ValueError("growth starts at length 2")
    if mode not in (GROW_ANY_SPLIT, GROW_ALL_SPLITS):
        raise ValueError(f"unknown growth mode {mode!r}")

    by_len: dict[int, Counter] = {1: Counter(), k - 1: Counter(), k: Counter()}
    totals: dict[int, int] = {length: 0 for length in by_len}
    for sentence in sentences:
        seq = tuple(sentence)
        for length in by_len:
            counter = by_len[length]
            count_here = len(seq) - length + 1
            if count_here <= 0:
                continue
            for start in range(count_here):
                counter[seq[start : start + length]] += 1
            totals[length] += count_here

    def freq(block: Block) -> float:
        total = totals[len(block)]
        return by_len[len(block)][block] / total if total else 0.0

    out: set[Block] = set()
    for candidate in by_len[k]:
        splits = [(candidate[: k - 1], candidate[k - 1 :]),
                  (candidate[:1], candidate[1:])]
        verdicts = []
        for prefix, suffix in splits:
            if prefix not in admitted or suffix not in admitted:
                verdicts.append(False)
                continue
            corr = correlation(freq(candidate), freq(prefix), freq(suffix))
            verdicts.append(corr > 0.0)
        admitted_here = any(verdicts) if mode == GROW_ANY_SPLIT else all(verdicts)
        if admitted_here:
            out.add(candidate)
    return out


def seed_blocks(sentences: Sequence[Sequence[int]]) -> set[Block]:
    """All single-word blocks of a corpus side (growth pass 1)."""
    out: set[Block] = set()
    for sentence in sentences:
        for token in sentence:
            out.add((token,))
    return out


def load_cognates(lines: Iterable[str]) -> list[tuple[str, str]]:
    """Parse a cognate table: ``source-surface<TAB>target-surface`` rows."""
    pairs = []
    for number, line in enumerate(lines, start=1):
        stripped = line.rstrip("\r\n")
        if not stripped.strip() or stripped.startswith("#"):
            continue
        if stripped.count("\t") != 1:
            raise ParseError("cognate row must have exactly one tab", number)
        src, tgt = stripped.split("\t")
        src, tgt = src.strip(), tgt.strip()
        if not src or not tgt:
            raise ParseError("cognate row has an empty side", number)
        pairs.append((src, tgt))
    return pairs


def filter_cognates(
    records: Iterable[PairRecord],
    cognates: Sequence[tuple[str, str]],
    src_vocab: Vocabulary,
    tgt_vocab: Vocabulary,
) -> Iterator[PairRecord]:
    """Drop records where only one side of the pair carries a cognate.

    A record passes when cognate-listed words appear on both sides or on
    neither; it is dropped when exactly one side contains a listed word,
    since the other side then necessarily lacks the listed counterpart.
    """
    src_listed = {i for s, _ in cognates if (i := src_vocab.id_of(s)) is not None}
    tgt_listed = {i for _, t in cognates if (i := tgt_vocab.id_of(t)) is not None}
    if not src_listed and not tgt_listed:
        yield from records
        return
    for record in records:
        has_src = any(token in src_listed for token in record.source_block)
        has_tgt = any(token in tgt_listed for token in record.target_block)
        if has_src != has_tgt:
            continue
        yield record
