"""Cover-search decoder maximizing the block translation objective.

A source sentence is covered with dictionary blocks whose starts and
ends both strictly increase (overlaps allowed, containment not), each
span picks a target block from the bilingual dictionary, adjacent
target blocks are merged with duplicate exclusion, and hypotheses are
scored by the product of conditional block probabilities times the
adhesion correction over overlaps, evaluated in log domain.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .adhesion import MODE_LAF, MODE_LITERAL, ADHESION_MODES, words_factor
from .blocks import Block, EMPTY_BLOCK
from .corpus import TokenizedSentence
from .errors import EmptyInputError, OracleBoundError
from .stats import DictEntryTS, Model

Span = tuple[int, int]  # (start, end), end exclusive
SynonymPairs = set[tuple[int, int]]

DEFAULT_P_FLOOR = 1e-9


@dataclass
class DecodeParams:
    beam: int = 64
    k: int = 8
    mode: str = MODE_LITERAL
    max_covers: int = 1024
    p_floor: float = DEFAULT_P_FLOOR
    oracle_bound: int = 8

    def __post_init__(self) -> None:
        if self.beam < 1 or self.k < 1 or self.max_covers < 1:
            raise ValueError("beam, k and max_covers must be >= 1")
        if self.mode not in ADHESION_MODES:
            raise ValueError(f"unknown adhesion mode {self.mode!r}")
        if not 0.0 < self.p_floor <= 1.0:
            raise ValueError("p_floor must lie in (0, 1]")


@dataclass
class Hypothesis:
    """One translation alternative for a sentence."""

    spans: tuple[Span, ...]
    choices: tuple[DictEntryTS, ...]
    merged: tuple[int, ...]
    score: float  # log domain
    correction: float
    index: int = 0


@dataclass
class DecodeResult:
    best: Hypothesis
    ranked: list[Hypothesis]
    oov_surfaces: dict[int, str] = field(default_factory=dict)


def check_cover(spans: Sequence[Span], length: int, l_max: int) -> bool:
    """True when spans form a valid cover of ``length`` positions."""
    if not spans:
        return False
    prev_start, prev_end = -1, 0
    for start, end in spans:
        if not (0 <= start < end <= length and end - start <= l_max):
            return False
        if start <= prev_start or end <= prev_end:
            return False
        if start > prev_end:  # gap
            return False
        prev_start, prev_end = start, end
    return spans[0][0] == 0 and spans[-1][1] == length


def enumerate_covers(
    ids: Sequence[int],
    model: Model,
    l_max: int | None = None,
    max_covers: int | None = None,
) -> Iterator[tuple[Span, ...]]:
    """Yield covers of the sentence, longer blocks explored first.

    Every multi-word span must be present in the source dictionary;
    single-word spans are always allowed (decoded as copy-through when
    out of vocabulary).  At each extension point the longest admissible
    next block is tried first, so covers built from long blocks surface
    before their refinements into shorter ones.
    """
    length = len(ids)
    if length == 0:
        raise EmptyInputError("cannot cover an empty sentence")
    if l_max is None:
        l_max = model.gen_config.l_max
    emitted = 0

    def span_ok(start: int, end: int) -> bool:
        if end - start == 1:
            return True
        return tuple(ids[start:end]) in model.s_counts

    def extensions(prev: Span | None) -> list[Span]:
        if prev is None:
            starts = [0]
        else:
            starts = range(prev[0] + 1, prev[1] + 1)
        floor_end = 0 if prev is None else prev[1]
        out = []
        for start in starts:
            for end in range(max(start + 1, floor_end + 1), min(start + l_max, length) + 1):
                if span_ok(start, end):
                    out.append((start, end))
        out.sort(key=lambda span: (-(span[1] - span[0]), span[0]))
        return out

    stack: list[tuple[tuple[Span, ...], Span | None]] = [((), None)]
    while stack:
        prefix, last = stack.pop()
        if last is not None and last[1] == length:
            yield prefix
            emitted += 1
            if max_covers is not None and emitted >= max_covers:
                return
            continue
        # Reverse so the longest extension is processed first off the stack.
        for span in reversed(extensions(last)):
            stack.append((prefix + (span,), span))


def candidates(
    block: Block,
    model: Model,
    k: int,
    p_floor: float = DEFAULT_P_FLOOR,
    copy_token: int | None = None,
) -> list[DictEntryTS]:
    """Top-k usable dictionary entries for a source block.

    Prohibited entries and pairs targeting the EMPTY block are never
    offered.  Ranking is by conditional probability, then relative
    correlation, then lexicographic target block.  A single-word block
    with no usable entry falls back to a copy-through pseudo-entry
    targeting ``copy_token`` (when given) at the probability floor.
    """
    entries = [
        e
        for e in model.ts_by_source.get(block, ())
        if not e.prohibited and e.target_block != EMPTY_BLOCK
    ]
    entries.sort(key=lambda e: (-e.p_t_given_s, -e.rho, e.target_block))
    if not entries and len(block) == 1 and copy_token is not None:
        return [
            DictEntryTS(
                source_block=block,
                target_block=(copy_token,),
                count=0,
                p_joint=p_floor,
                p_t_given_s=p_floor,
                p_s_given_t=p_floor,
                rho=0.0,
                prohibited=False,
            )
        ]
    return entries[:k]


def _match(a: int, b: int, synonyms: SynonymPairs | None) -> bool:
    if a == b:
        return True
    if synonyms is None:
        return False
    return (a, b) in synonyms or (b, a) in synonyms


def _overlap_len(
    left: Sequence[int], right: Sequence[int], synonyms: SynonymPairs | None
) -> int:
    top = min(len(left), len(right))
    if synonyms is None:
        for size in range(top, 0, -1):
            if left[len(left) - size :] == right[:size]:
                return size
        return 0
    for size in range(top, 0, -1):
        if all(_match(left[len(left) - size + j], right[j], synonyms) for j in range(size)):
            return size
    return 0


def merge_targets(
    left: tuple[int, ...],
    right: tuple[int, ...],
    synonyms: SynonymPairs | None = None,
) -> tuple[int, ...]:
    """Concatenate with the maximal duplicated boundary emitted once.

    The overlap is the longest suffix of ``left`` matching a prefix of
    ``right`` token by token; with a synonym table loaded, listed
    synonym pairs also match, and the left variant is kept.
    """
    size = _overlap_len(left, right, synonyms)
    return left + right[size:]


def _adjacency_log_factor(
    prev_target: tuple[int, ...],
    new_target: tuple[int, ...],
    mode: str,
    model: Model,
    p_floor: float,
    synonyms: SynonymPairs | None,
) -> float:
    size = _overlap_len(prev_target, new_target, synonyms)
    if size == 0:
        return 0.0
    words = prev_target[len(prev_target) - size :]
    # Target-side overlaps stay on the literal factor in laf mode; the
    # per-word local factors apply to the source cover instead.
    target_mode = MODE_LITERAL if mode == MODE_LAF else mode
    return math.log(words_factor(words, target_mode, model, "target", p_floor))


def _source_overlap_log_factor(
    ids: Sequence[int],
    prev_span: Span,
    new_span: Span,
    mode: str,
    model: Model,
    p_floor: float,
) -> float:
    if mode != MODE_LAF:
        return 0.0
    start, end = new_span[0], prev_span[1]
    if start >= end:
        return 0.0
    words = tuple(ids[start:end])
    return math.log(words_factor(words, MODE_LAF, model, "source", p_floor))


def score_hypothesis(
    ids: Sequence[int],
    spans: Sequence[Span],
    choices: Sequence[DictEntryTS],
    model: Model,
    params: DecodeParams,
    synonyms: SynonymPairs | None = None,
) -> float:
    """Log-domain objective for one (cover, choices) combination.

    Sum of log conditional probabilities of the chosen entries plus the
    log adhesion factors over adjacent target overlaps (and, in laf
    mode, over source cover overlaps).  Terms accumulate in per-span
    order so the value is bit-identical to the beam search's running
    score for the same combination.
    """
    total = math.log(choices[0].p_t_given_s)
    for j in range(1, len(choices)):
        total += _source_overlap_log_factor(
            ids, spans[j - 1], spans[j], params.mode, model, params.p_floor
        )
        total += math.log(choices[j].p_t_given_s)
        total += _adjacency_log_factor(
            choices[j - 1].target_block,
            choices[j].target_block,
            params.mode,
            model,
            params.p_floor,
            synonyms,
        )
    return total


def merge_all(
    choices: Sequence[DictEntryTS], synonyms: SynonymPairs | None = None
) -> tuple[int, ...]:
    """Fold adjacent pairwise merges into the output sequence.

    Duplicate exclusion is applied between each pair of neighboring
    chosen blocks (matching the pairwise overlap the scorer sees), not
    against the whole accumulated output.
    """
    merged = choices[0].target_block
    for j in range(1, len(choices)):
        previous = choices[j - 1].target_block
        current = choices[j].target_block
        merged = merged + current[_overlap_len(previous, current, synonyms):]
    return merged


def _segmentations(total: int, l_max: int) -> Iterator[tuple[int, ...]]:
    """Part-size tuples (>= 2 parts, each part <= l_max) summing to total."""
    def rec(rest: int, acc: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            if len(acc) >= 2:
                yield acc
            return
        for size in range(1, min(l_max, rest) + 1):
            yield from rec(rest - size, acc + (size,))

    yield from rec(total, ())


def _split_rho(left: Block, right: Block, model: Model) -> float:
    """Relative correlation of two adjacent target sub-blocks, or -1."""
    counts = model.t_counts
    n_joint = counts.get(left + right, 0)
    if n_joint == 0:
        return -1.0
    n_left = counts.get(left, 0)
    n_right = counts.get(right, 0)
    if n_left == 0 or n_right == 0:
        return -1.0
    return (n_joint * model.n) / (n_left * n_right) - 1.0


def _pair_correction(
    left: Block,
    right: Block,
    model: Model,
    l_max: int,
    synonyms: SynonymPairs | None,
) -> float:
    """Strongest coherent decomposition of the merged union of two blocks.

    The union is broken into every ordered sequence of sub-blocks of
    length <= l_max; a decomposition scores the weakest relative
    correlation among its adjacent sub-block pairs (each looked up by
    concatenation in the target dictionary, -1 when missing), and the
    pair's correction is the best decomposition score.  A union too
    short to decompose scores the -1 floor.
    """
    union = merge_targets(left, right, synonyms)
    if len(union) < 2:
        return -1.0
    best = -1.0
    for sizes in _segmentations(len(union), l_max):
        worst = math.inf
        pos = 0
        parts = []
        for size in sizes:
            parts.append(union[pos : pos + size])
            pos += size
        for j in range(1, len(parts)):
            rho = _split_rho(parts[j - 1], parts[j], model)
            if rho < worst:
                worst = rho
            if worst <= best:
                break
        if worst > best:
            best = worst
    return best


def correction_value(
    choices: Sequence[DictEntryTS],
    model: Model,
    l_max: int,
    synonyms: SynonymPairs | None = None,
) -> float:
    """Minimum over adjacent pairs of the pair correction.

    A hypothesis is as coherent as its weakest adjacent target union; a
    hypothesis with no adjacent pairs at all scores +inf.
    """
    values = [
        _pair_correction(
            choices[j - 1].target_block, choices[j].target_block, model, l_max, synonyms
        )
        for j in range(1, len(choices))
    ]
    return min(values) if values else math.inf


def correction(
    alternatives: Sequence[Hypothesis],
    model: Model,
    l_max: int,
    synonyms: SynonymPairs | None = None,
) -> Hypothesis:
    """Pick the alternative whose weakest adjacent union is strongest.

    Ties on the correction value fall back to the translation score,
    then to lexicographic order of the merged output.
    """
    if not alternatives:
        raise ValueError("correction needs at least one alternative")
    scored = []
    for hyp in alternatives:
        value = correction_value(hyp.choices, model, l_max, synonyms)
        scored.append((value, hyp))
    scored.sort(key=lambda pair: (-pair[0], -pair[1].score, pair[1].merged, pair[1].spans))
    return scored[0][1]


class _OovMap:
    """Assigns decode-local target ids to copied-through surfaces."""

    def __init__(self, base: int):
        self._base = base
        self._by_surface: dict[str, int] = {}
        self.surfaces: dict[int, str] = {}

    def token_for(self, surface: str) -> int:
        token = self._by_surface.get(surface)
        if token is None:
            token = self._base + len(self._by_surface)
            self._by_surface[surface] = token
            self.surfaces[token] = surface
        return token


class _DecodeRun:
    """Per-sentence caches shared by the beam and exhaustive searches.

    Candidate lists, adjacency log factors, pairwise merges and pairwise
    correction values repeat heavily across covers; memoizing them keeps
    the search at desk-scale speed without changing any value.
    """

    def __init__(
        self,
        sentence: TokenizedSentence,
        model: Model,
        params: DecodeParams,
        synonyms: SynonymPairs | None,
    ):
        self.sentence = sentence
        self.model = model
        self.params = params
        self.synonyms = synonyms
        self.l_max = model.gen_config.l_max
        self.oov = _OovMap(len(model.tgt_vocab))
        self._cands: dict[Span, list[tuple[float, DictEntryTS]]] = {}
        # (prev target, new target) -> (overlap length, fully absorbed,
        # adjacency log factor); the fused cache keyed once per pair.
        self.pair_cache: dict[tuple[Block, Block], tuple[int, bool, float]] = {}
        self._corr: dict[tuple[Block, Block], float] = {}
        self._src: dict[tuple[Span, Span], float] = {}

    def span_candidates(self, span: Span) -> list[tuple[float, DictEntryTS]]:
        cached = self._cands.get(span)
        if cached is None:
            start, end = span
            block = tuple(self.sentence.ids[start:end])
            copy_token = None
            if end - start == 1:
                copy_token = self.oov.token_for(self.sentence.surfaces[start])
            entries = candidates(
                block, self.model, self.params.k, self.params.p_floor, copy_token
            )
            cached = [(math.log(e.p_t_given_s), e) for e in entries]
            self._cands[span] = cached
        return cached

    def pair_info(self, key: tuple[Block, Block]) -> tuple[int, bool, float]:
        """Overlap length, full-absorption flag and adjacency log factor."""
        prev_target, new_target = key
        size = _overlap_len(prev_target, new_target, self.synonyms)
        if size == 0:
            info = (0, False, 0.0)
        else:
            info = (
                size,
                size == len(new_target),
                _adjacency_log_factor(
                    prev_target, new_target, self.params.mode, self.model,
                    self.params.p_floor, self.synonyms,
                ),
            )
        self.pair_cache[key] = info
        return info

    def overlap(self, prev_target: Block, new_target: Block) -> int:
        key = (prev_target, new_target)
        info = self.pair_cache.get(key)
        if info is None:
            info = self.pair_info(key)
        return info[0]

    def extends(self, prev_target: Block, new_target: Block) -> bool:
        """True when the new block adds at least one token after the merge.

        Covers demand that every source block contribute a new word; the
        same-block-pattern assumption carries that over to the chosen
        targets, which rules out fully absorbed (zero-emission) choices.
        """
        key = (prev_target, new_target)
        info = self.pair_cache.get(key)
        if info is None:
            info = self.pair_info(key)
        return not info[1]

    def source_factor(self, prev_span: Span, span: Span) -> float:
        key = (prev_span, span)
        value = self._src.get(key)
        if value is None:
            value = _source_overlap_log_factor(
                self.sentence.ids, prev_span, span, self.params.mode,
                self.model, self.params.p_floor,
            )
            self._src[key] = value
        return value

    def merge_all(self, choices: Sequence[DictEntryTS]) -> Block:
        merged = choices[0].target_block
        for j in range(1, len(choices)):
            current = choices[j].target_block
            merged = merged + current[self.overlap(choices[j - 1].target_block, current):]
        return merged

    def pair_correction(self, left: Block, right: Block) -> float:
        key = (left, right)
        value = self._corr.get(key)
        if value is None:
            value = _pair_correction(left, right, self.model, self.l_max, self.synonyms)
            self._corr[key] = value
        return value

    def rank(self, pool: list[Hypothesis]) -> list[Hypothesis]:
        """Final selection: score-pruned beam, then correction re-rank.

        The pool is cut to the ``beam`` best-scoring hypotheses (the
        final beam); the correction value then re-ranks the survivors,
        with score, merged output and spans breaking ties.
        """
        pool.sort(key=lambda h: (-h.score, h.merged, h.spans))
        del pool[self.params.beam :]
        for hyp in pool:
            targets = [entry.target_block for entry in hyp.choices]
            if len(targets) > 1:
                hyp.correction = min(
                    self.pair_correction(targets[j - 1], targets[j])
                    for j in range(1, len(targets))
                )
            else:
                hyp.correction = math.inf
        pool.sort(key=lambda h: (-h.correction, -h.score, h.merged, h.spans))
        for position, hyp in enumerate(pool):
            hyp.index = position
        return pool


def translate(
    sentence: TokenizedSentence,
    model: Model,
    params: DecodeParams | None = None,
    synonyms: SynonymPairs | None = None,
) -> DecodeResult:
    """Beam-search decode of one sentence.

    Covers are enumerated up to ``max_covers``; within each cover the
    per-span candidate choices are expanded span by span, keeping the
    ``beam`` best-scoring partial states (ties broken lexicographically
    on the chosen targets).  Complete hypotheses from all covers are
    score-pruned to a final beam of ``beam`` entries, which the
    correction value re-ranks; the top ``k`` of that ranking are
    returned.  Deterministic for fixed inputs and params.
    """
    if params is None:
        params = DecodeParams()
    if not sentence.ids:
        raise EmptyInputError("cannot translate an empty sentence")
    run = _DecodeRun(sentence, model, params, synonyms)
    laf_mode = params.mode == MODE_LAF
    beam = params.beam

    pair_cache = run.pair_cache
    pair_info = run.pair_info

    def collect(require_extension: bool) -> list[Hypothesis]:
        pool: list[Hypothesis] = []
        for cover in enumerate_covers(sentence.ids, model, run.l_max, params.max_covers):
            # A state is (score, target-key for tie-breaking, chosen entries).
            states: list[tuple[float, tuple[Block, ...], tuple[DictEntryTS, ...]]] = []
            viable = True
            for position, span in enumerate(cover):
                cands = run.span_candidates(span)
                if not cands:
                    viable = False
                    break
                src_extra = 0.0
                if laf_mode and position > 0:
                    src_extra = run.source_factor(cover[position - 1], span)
                expanded: list[tuple[float, tuple[Block, ...], tuple[DictEntryTS, ...]]] = []
                append = expanded.append
                if position == 0:
                    for log_p, entry in cands:
                        append((log_p, (entry.target_block,), (entry,)))
                else:
                    for state_score, key, chosen in states:
                        last = chosen[-1].target_block
                        base = state_score + src_extra
                        for log_p, entry in cands:
                            target = entry.target_block
                            info = pair_cache.get((last, target))
                            if info is None:
                                info = pair_info((last, target))
                            if require_extension and info[1]:
                                continue
                            append(
                                (
                                    base + log_p + info[2],
                                    key + (target,),
                                    chosen + (entry,),
                                )
                            )
                if len(expanded) > beam:
                    expanded.sort(key=lambda st: (-st[0], st[1]))
                    del expanded[beam:]
                states = expanded
            if not viable:
                continue
            for state_score, _, chosen in states:
                pool.append(
                    Hypothesis(
                        spans=cover,
                        choices=chosen,
                        merged=run.merge_all(chosen),
                        score=state_score,
                        correction=0.0,
                    )
                )
        return pool

    pool = collect(require_extension=True)
    if not pool:
        # Degenerate sentences (e.g. immediate repetitions with a single
        # usable entry) may leave no extending path; permit absorption.
        pool = collect(require_extension=False)
    ranked = run.rank(pool)
    return DecodeResult(best=ranked[0], ranked=ranked[: params.k],
                        oov_surfaces=run.oov.surfaces)


def translate_exhaustive(
    sentence: TokenizedSentence,
    model: Model,
    params: DecodeParams | None = None,
    synonyms: SynonymPairs | None = None,
) -> DecodeResult:
    """Full enumeration over covers and candidate combinations.

    Intended as a search oracle for short sentences: every combination
    is scored directly (no incremental accumulation, no pruning) and the
    final selection applies the same ranking as :func:`translate`.
    """
    if params is None:
        params = DecodeParams()
    if not sentence.ids:
        raise EmptyInputError("cannot translate an empty sentence")
    if len(sentence.ids) > params.oracle_bound:
        raise OracleBoundError(
            f"sentence length {len(sentence.ids)} exceeds the oracle bound "
            f"{params.oracle_bound}"
        )
    run = _DecodeRun(sentence, model, params, synonyms)

    def collect(require_extension: bool) -> list[Hypothesis]:
        pool: list[Hypothesis] = []
        for cover in enumerate_covers(sentence.ids, model, run.l_max, params.max_covers):
            per_span = []
            viable = True
            for span in cover:
                cands = run.span_candidates(span)
                if not cands:
                    viable = False
                    break
                per_span.append([entry for _, entry in cands])
            if not viable:
                continue
            for combo in itertools.product(*per_span):
                if require_extension and any(
                    not run.extends(combo[j - 1].target_block, combo[j].target_block)
                    for j in range(1, len(combo))
                ):
                    continue
                pool.append(
                    Hypothesis(
                        spans=cover,
                        choices=combo,
                        merged=merge_all(combo, synonyms),
                        score=score_hypothesis(
                            sentence.ids, cover, combo, model, params, synonyms
                        ),
                        correction=0.0,
                    )
                )
        return pool

    pool = collect(require_extension=True)
    if not pool:
        pool = collect(require_extension=False)
    ranked = run.rank(pool)
    return DecodeResult(best=ranked[0], ranked=ranked[: params.k],
                        oov_surfaces=run.oov.surfaces)


def render_target(
    tokens: Sequence[int], model: Model, oov_surfaces: dict[int, str]
) -> str:
    """Surface string for a merged target sequence."""
    words = []
    for token in tokens:
        if token in oov_surfaces:
            words.append(oov_surfaces[token])
        else:
            words.append(model.tgt_vocab.surface(token))
    return " ".join(words)
