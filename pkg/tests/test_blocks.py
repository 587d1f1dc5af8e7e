import itertools
import random

import pytest

from blockmt.blocks import (
    ALL_IN,
    EMPTY_BLOCK,
    SYMMETRIC,
    Budget,
    PairGenConfig,
    PairRecord,
    count_blocks_formula,
    count_pairs_formula,
    enumerate_blocks,
    generate_pairs_all_in,
    generate_pairs_symmetric,
    iter_corpus_records,
)
from blockmt.corpus import SentencePair
from blockmt.errors import EmptySentenceError


def brute_force_blocks(sentence, l_max):
    """Independent oracle: all contiguous runs of length 1..l_max."""
    out = []
    for start in range(len(sentence)):
        for end in range(start + 1, len(sentence) + 1):
            if end - start <= l_max:
                out.append(tuple(sentence[start:end]))
    return out


def test_enumerate_blocks_small_example():
    blocks = enumerate_blocks((5, 6, 7), l_max=2)
    assert set(blocks) == {(5,), (6,), (7,), (5, 6), (6, 7)}
    assert len(blocks) == 5 == count_blocks_formula(3, 2)
    # canonical order: start index, then length
    assert blocks == [(5,), (5, 6), (6,), (6, 7), (7,)]


def test_enumerate_blocks_single_word():
    assert enumerate_blocks((9,), l_max=4) == [(9,)]


def test_enumerate_blocks_eight_words_cap_three():
    sentence = tuple(range(2, 10))
    blocks = enumerate_blocks(sentence, l_max=3)
    assert len(blocks) == 21 == count_blocks_formula(8, 3)
    assert sorted(blocks) == sorted(brute_force_blocks(sentence, 3))


def test_enumerate_blocks_rejects_empty():
    with pytest.raises(EmptySentenceError):
        enumerate_blocks((), l_max=2)


def test_count_blocks_formula_against_oracle():
    sentence = tuple(range(20))
    assert count_blocks_formula(20, 20) == len(brute_force_blocks(sentence, 20)) == 210
    assert count_blocks_formula(20, 3) == len(brute_force_blocks(sentence, 3)) == 57
    assert count_blocks_formula(1, 1) == 1


def test_count_blocks_formula_domain():
    with pytest.raises(ValueError):
        count_blocks_formula(3, 4)
    with pytest.raises(ValueError):
        count_blocks_formula(3, 0)


def test_count_pairs_formula_against_oracle():
    src = tuple(range(20))
    assert count_pairs_formula(20, 20, 3) == 57 * 57 == 3249
    assert count_pairs_formula(20, 20, 20) == 210 * 210 == 44100
    assert count_pairs_formula(1, 1, 1) == 1
    assert count_pairs_formula(20, 20, 3) == len(brute_force_blocks(src, 3)) ** 2


def test_count_pairs_formula_domain():
    with pytest.raises(ValueError):
        count_pairs_formula(3, 5, 4)


def test_block_count_matches_formula_randomized():
    rng = random.Random(11)
    for _ in range(200):
        length = rng.randint(1, 30)
        l_max = rng.randint(1, length)
        sentence = tuple(rng.randrange(50) for _ in range(length))
        assert len(enumerate_blocks(sentence, l_max)) == count_blocks_formula(length, l_max)


def test_whole_volume_ratio_below_fourteen():
    ratio = count_pairs_formula(20, 20, 20) / count_pairs_formula(20, 20, 3)
    assert ratio == pytest.approx(44100 / 3249)
    assert ratio < 14


def _pair(src, tgt):
    return SentencePair(index=0, source=tuple(src), target=tuple(tgt))


def test_all_in_is_cartesian_product():
    pair = _pair((2, 3), (4, 5))
    cfg = PairGenConfig(alternative=ALL_IN, l_max=2)
    batch = generate_pairs_all_in(pair, cfg)
    oracle = [
        PairRecord(s, t)
        for s in brute_force_blocks(pair.source, 2)
        for t in brute_force_blocks(pair.target, 2)
    ]
    assert len(batch.records) == 9
    assert sorted(batch.records) == sorted(oracle)
    assert not batch.truncated


def test_all_in_emit_empty_appends_blank_pairs():
    pair = _pair((2, 3), (4, 5))
    cfg = PairGenConfig(alternative=ALL_IN, l_max=2, emit_empty=True)
    records = generate_pairs_all_in(pair, cfg).records
    assert len(records) == 15
    assert sum(1 for r in records if r.target_block == EMPTY_BLOCK) == 3
    assert sum(1 for r in records if r.source_block == EMPTY_BLOCK) == 3


def test_all_in_budget_truncates_in_canonical_order():
    pair = _pair((2, 3), (4, 5))
    cfg = PairGenConfig(alternative=ALL_IN, l_max=2, budget=4)
    batch = generate_pairs_all_in(pair, cfg)
    full = generate_pairs_all_in(pair, PairGenConfig(alternative=ALL_IN, l_max=2))
    assert batch.truncated
    assert batch.records == full.records[:4]


def test_all_in_count_matches_formula_randomized():
    rng = random.Random(23)
    cfg = PairGenConfig(alternative=ALL_IN, l_max=3)
    for _ in range(50):
        ls = rng.randint(1, 9)
        lt = rng.randint(1, 9)
        pair = _pair([rng.randrange(9) for _ in range(ls)], [rng.randrange(9) for _ in range(lt)])
        batch = generate_pairs_all_in(pair, cfg)
        expected = count_blocks_formula(ls, min(3, ls)) * count_blocks_formula(lt, min(3, lt))
        assert len(batch.records) == expected


def symmetric_oracle(pair, l_max, w_max):
    """Exhaustive split-enumeration oracle for the symmetric alternative."""
    def splits(seq, parts):
        if parts == 1:
            return [[seq]] if 1 <= len(seq) <= l_max else []
        out = []
        for first in range(1, min(l_max, len(seq) - parts + 1) + 1):
            for rest in splits(seq[first:], parts - 1):
                out.append([seq[:first]] + rest)
        return out

    records = []
    for w in range(1, min(len(pair.source), len(pair.target), w_max) + 1):
        for ss in splits(pair.source, w):
            for ts in splits(pair.target, w):
                for j in range(w):
                    records.append(PairRecord(tuple(ss[j]), tuple(ts[j])))
    return records


def test_symmetric_two_by_two():
    pair = _pair((2, 3), (4, 5))
    cfg = PairGenConfig(alternative=SYMMETRIC, l_max=2, w_max=2)
    batch = generate_pairs_symmetric(pair, cfg)
    assert batch.records == [
        PairRecord((2, 3), (4, 5)),
        PairRecord((2,), (4,)),
        PairRecord((3,), (5,)),
    ]
    assert batch.records == symmetric_oracle(pair, 2, 2)


def test_symmetric_singletons():
    pair = _pair((2,), (4,))
    cfg = PairGenConfig(alternative=SYMMETRIC, l_max=3, w_max=4)
    assert generate_pairs_symmetric(pair, cfg).records == [PairRecord((2,), (4,))]


def test_symmetric_w_max_one_may_emit_nothing():
    pair = _pair((2, 3, 4), (4, 5))
    cfg = PairGenConfig(alternative=SYMMETRIC, l_max=2, w_max=1)
    # the 3-word source cannot form a single block of length <= 2
    assert generate_pairs_symmetric(pair, cfg).records == []


def test_symmetric_matches_oracle_randomized():
    rng = random.Random(31)
    for _ in range(30):
        ls = rng.randint(1, 6)
        lt = rng.randint(1, 6)
        pair = _pair([rng.randrange(9) for _ in range(ls)], [rng.randrange(9) for _ in range(lt)])
        cfg = PairGenConfig(alternative=SYMMETRIC, l_max=3, w_max=3)
        assert generate_pairs_symmetric(pair, cfg).records == symmetric_oracle(pair, 3, 3)


def test_symmetric_positional_matching():
    # every record's source and target occupy the same split ordinal
    pair = _pair((2, 3, 4), (5, 6))
    cfg = PairGenConfig(alternative=SYMMETRIC, l_max=3, w_max=2)
    records = generate_pairs_symmetric(pair, cfg).records
    # w=2 groups arrive in consecutive runs of two; check each run joins
    # back to the full sentences
    w2 = [r for r in records if r != PairRecord((2, 3, 4), (5, 6))]
    for i in range(0, len(w2), 2):
        first, second = w2[i], w2[i + 1]
        assert first.source_block + second.source_block == (2, 3, 4)
        assert first.target_block + second.target_block == (5, 6)


def test_budget_determinism():
    pair = _pair((2, 3, 4), (5, 6, 7))
    cfg = PairGenConfig(alternative=ALL_IN, l_max=3, budget=17)
    one = generate_pairs_all_in(pair, cfg)
    two = generate_pairs_all_in(pair, cfg)
    assert one.records == two.records
    assert one.truncated == two.truncated


def test_corpus_stream_budget_spans_pairs():
    pairs = [_pair((2, 3), (4,)), _pair((5,), (6, 7))]
    cfg = PairGenConfig(alternative=ALL_IN, l_max=2, budget=5)
    budget = Budget(cfg.budget)
    records = list(iter_corpus_records(pairs, cfg, budget))
    assert len(records) == 5
    assert budget.truncated
    # first pair contributes 3 blocks x 1 block = 3 records
    assert records[:3] == generate_pairs_all_in(
        pairs[0], PairGenConfig(alternative=ALL_IN, l_max=2)
    ).records


def test_config_validation():
    with pytest.raises(ValueError):
        PairGenConfig(alternative="both")
    with pytest.raises(ValueError):
        PairGenConfig(l_max=0)
    with pytest.raises(ValueError):
        PairGenConfig(budget=0)
    with pytest.raises(ValueError):
        PairGenConfig(w_max=0)
