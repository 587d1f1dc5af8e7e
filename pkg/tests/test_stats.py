import random
from fractions import Fraction

import pytest

from blockmt.blocks import PairGenConfig, PairRecord, iter_corpus_records
from blockmt.corpus import parse_corpus
from blockmt.errors import EmptyModelError, ParseError
from blockmt.stats import (
    CountTable,
    ThresholdConfig,
    accumulate,
    build_dictionaries,
    conditionals,
    correlation,
    filter_cognates,
    grow_blocks,
    load_cognates,
    probability,
    relative_correlation,
    seed_blocks,
)
from conftest import train_from_lines


def rec(src, tgt):
    return PairRecord(tuple(src), tuple(tgt))


def test_accumulate_small_example():
    a, b, x, y = (2,), (3,), (2,), (3,)
    table = accumulate([rec(a, x), rec(a, x), rec(a, y), rec(b, y)])
    assert table.n == 4
    assert table.n_s[a] == 3
    assert table.n_t[y] == 2
    assert table.n_st[(a, x)] == 2


def test_accumulate_empty_stream():
    table = accumulate([])
    assert table.n == 0
    assert not table.n_s and not table.n_t and not table.n_st


def test_shard_merge_equals_single_pass():
    rng = random.Random(17)
    records = [
        rec((rng.randrange(6),), (rng.randrange(6),)) for _ in range(1000)
    ]
    single = accumulate(records)
    merged = CountTable()
    for start in range(0, 1000, 250):
        merged.merge(accumulate(records[start : start + 250]))
    # independent oracle: plain dictionary tally
    oracle = {}
    for r in records:
        oracle[r] = oracle.get(r, 0) + 1
    assert merged.n == single.n == 1000
    assert dict(merged.n_st) == dict(single.n_st) == oracle
    assert dict(merged.n_s) == dict(single.n_s)
    assert dict(merged.n_t) == dict(single.n_t)


def test_probability_values():
    assert probability(4, 10) == 0.4
    assert probability(0, 10) == 0.0
    assert probability(10, 10) == 1.0
    with pytest.raises(EmptyModelError):
        probability(1, 0)
    with pytest.raises(ValueError):
        probability(11, 10)


def test_conditionals_bayes_identity():
    p_t_s, p_s_t, p_joint = conditionals(2, 5, 4, 10)
    assert (p_t_s, p_s_t, p_joint) == (0.4, 0.5, 0.2)
    assert p_t_s * (5 / 10) == p_joint == p_s_t * (4 / 10)


def test_conditionals_perfect_association():
    assert conditionals(7, 7, 7, 7) == (1.0, 1.0, 1.0)


def test_conditionals_zero_marginal_errors():
    with pytest.raises(ValueError):
        conditionals(0, 0, 4, 10)


def test_correlation_values():
    assert correlation(0.2, 0.5, 0.4) == 0.0
    assert correlation(0.3, 0.5, 0.4) == pytest.approx(0.1)
    assert correlation(0.0, 0.5, 0.4) == pytest.approx(-0.2)


def test_relative_correlation_values():
    assert relative_correlation(0.1, 0.5, 0.4) == pytest.approx(0.5)
    assert relative_correlation(0.0, 0.5, 0.4) == 0.0
    # total avoidance: p_joint = 0 means C = -p_a*p_b, so rho = -1
    assert relative_correlation(correlation(0.0, 0.5, 0.4), 0.5, 0.4) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        relative_correlation(0.1, 0.0, 0.4)


def test_bayes_identity_exact_on_trained_model(tiny_model):
    for entry in tiny_model.ts_entries.values():
        n_s = tiny_model.s_counts[entry.source_block]
        n_t = tiny_model.t_counts[entry.target_block]
        lhs = Fraction(entry.count, n_s) * Fraction(n_s, tiny_model.n)
        rhs = Fraction(entry.count, n_t) * Fraction(n_t, tiny_model.n)
        assert lhs == rhs == Fraction(entry.count, tiny_model.n)
        residual = abs(entry.p_t_given_s * (n_s / tiny_model.n) - entry.p_joint)
        assert residual <= 1e-12


def per_length_freq(sentences, block):
    """Oracle: occurrences of a block among same-length blocks."""
    k = len(block)
    hits = 0
    total = 0
    for sent in sentences:
        for start in range(len(sent) - k + 1):
            total += 1
            if tuple(sent[start : start + k]) == block:
                hits += 1
    return hits / total if total else 0.0


def test_grow_admits_constant_collocation():
    # "7 8" always adjacent; everything else varies
    rng = random.Random(3)
    sentences = []
    for _ in range(50):
        filler = [rng.randrange(2, 6) for _ in range(3)]
        sentences.append(tuple(filler[:1] + [7, 8] + filler[1:]))
    block = (7, 8)
    c = per_length_freq(sentences, block) - per_length_freq(
        sentences, (7,)
    ) * per_length_freq(sentences, (8,))
    assert c > 0
    admitted = grow_blocks(sentences, 2, seed_blocks(sentences))
    assert block in admitted


def test_grow_rejects_when_both_splits_nonpositive():
    # "9 9 9" occurs, but the pair "9 9" floods the corpus so the triple
    # is rarer than chance under both split decompositions.
    sentences = [(9, 9, 9)] + [(9, 9, 4, 9, 9)] * 30 + [(4, 4, 4, 4, 4)] * 10
    block = (9, 9, 9)
    for prefix, suffix in [((9, 9), (9,)), ((9,), (9, 9))]:
        c = per_length_freq(sentences, block) - per_length_freq(
            sentences, prefix
        ) * per_length_freq(sentences, suffix)
        assert c <= 0
    admitted2 = grow_blocks(sentences, 2, seed_blocks(sentences))
    assert (9, 9) in admitted2
    admitted3 = grow_blocks(sentences, 3, admitted2 | seed_blocks(sentences))
    assert block not in admitted3


def test_grow_chance_rate_on_independent_corpus():
    rng = random.Random(41)
    sentences = [
        tuple(rng.randrange(2, 12) for _ in range(10)) for _ in range(400)
    ]
    admitted = grow_blocks(sentences, 2, seed_blocks(sentences))
    seen = set()
    for sent in sentences:
        for i in range(len(sent) - 1):
            seen.add(sent[i : i + 2])
    rate = len(admitted) / len(seen)
    assert 0.25 < rate < 0.75
    # admitted blocks carry only small correlations on an independent corpus
    worst = max(
        abs(
            per_length_freq(sentences, b)
            - per_length_freq(sentences, b[:1]) * per_length_freq(sentences, b[1:])
        )
        for b in admitted
    )
    assert worst < 0.01


def test_grow_requires_admitted_parts():
    sentences = [(2, 3, 2, 3)] * 10
    # withhold (3,) from the admitted set: (2, 3) and (3, 2) need it
    admitted = grow_blocks(sentences, 2, {(2,)})
    assert admitted == set()


def _table(n, s_counts, t_counts, st_counts):
    table = CountTable(n=n)
    table.n_s.update(s_counts)
    table.n_t.update(t_counts)
    table.n_st.update(st_counts)
    return table


def _vocabs():
    from blockmt.corpus import SOURCE, TARGET, Vocabulary

    sv, tv = Vocabulary(SOURCE), Vocabulary(TARGET)
    for w in ("a", "b", "c", "d"):
        sv.add(w)
        tv.add(w)
    return sv, tv


def test_ts_threshold_two_sided():
    sv, tv = _vocabs()
    # rho = n*n_st/(n_s*n_t) - 1 with n=100
    s_counts = {(2, 3): 20, (4, 5): 20, (2, 4): 50, (2,): 40, (3,): 40, (4,): 40, (5,): 40}
    t_counts = {(2, 3): 25, (4, 5): 25, (2, 4): 40, (2,): 40, (3,): 40, (4,): 40, (5,): 40}
    st_counts = {
        ((2, 3), (2, 3)): 8,   # rho = 800/500 - 1 = 0.6   -> kept
        ((4, 5), (4, 5)): 7,   # rho = 0.4                 -> dropped
        ((2, 4), (2, 4)): 2,   # rho = 200/2000 - 1 = -0.9 -> kept, prohibited
    }
    table = _table(100, s_counts, t_counts, st_counts)
    th = ThresholdConfig(
        c_plus_s=0.0, c_plus_t=0.0, c_plus_ts=0.5, c_minus_ts=0.5,
    )
    model = build_dictionaries(table, th, sv, tv)
    kept = {k for k in model.ts_entries}
    assert ((2, 3), (2, 3)) in kept
    assert ((4, 5), (4, 5)) not in kept
    entry = model.ts_entries[((2, 4), (2, 4))]
    assert entry.prohibited
    assert entry.rho == pytest.approx(-0.9)


def test_single_word_pairs_bypass_rho():
    sv, tv = _vocabs()
    table = _table(
        100,
        {(2,): 50},
        {(3,): 50},
        {((2,), (3,)): 1},  # rho = 100/2500 - 1 = -0.96
    )
    th = ThresholdConfig(c_plus_ts=5.0, c_minus_ts=0.9)
    model = build_dictionaries(table, th, sv, tv)
    entry = model.ts_entries[((2,), (3,))]
    assert entry.prohibited  # negative tail still flagged
    assert (2,) in model.s_counts and (3,) in model.t_counts


def test_min_count_drops_singletons():
    lines = ["a b\tx y", "a b\tx y", "c\tz"]
    strict = train_from_lines(
        lines,
        thresholds=ThresholdConfig(c_plus_s=0.0, c_plus_t=0.0, c_plus_ts=0.0, min_count=2),
    )
    assert all(c >= 2 for c in strict.s_counts.values())
    assert all(e.count >= 2 for e in strict.ts_entries.values())


def test_threshold_monotonicity_on_fixture():
    lines = [
        "a b c\tx y z",
        "a b\tx y",
        "b c\ty z",
        "c a\tz x",
        "a c b\tx z y",
    ] * 4
    previous = None
    for cut in (0.0, 0.5, 1.0, 2.0, 4.0):
        th = ThresholdConfig(c_plus_s=cut, c_plus_t=cut, c_plus_ts=cut)
        model = train_from_lines(lines, l_max=3, thresholds=th)
        keys = (
            set(model.s_counts),
            set(model.t_counts),
            set(model.ts_entries),
        )
        if previous is not None:
            assert keys[0] <= previous[0]
            assert keys[1] <= previous[1]
            assert keys[2] <= previous[2]
        previous = keys


def test_ts_blocks_present_in_mono_dictionaries(tiny_model):
    for src, tgt in tiny_model.ts_entries:
        assert src in tiny_model.s_counts
        assert tgt in tiny_model.t_counts


def test_marginal_consistency_single_word_corpus():
    lines = ["a\tx", "a\ty", "b\tx", "a\tx"]
    model = train_from_lines(lines, l_max=1)
    total = sum(
        e.p_t_given_s
        for e in model.ts_entries.values()
        if e.source_block == (model.src_vocab.id_of("a"),)
    )
    assert total == pytest.approx(1.0)


def test_marginal_consistency_upper_bound(tiny_model):
    by_source = {}
    for e in tiny_model.ts_entries.values():
        by_source.setdefault(e.source_block, 0.0)
        by_source[e.source_block] += e.p_t_given_s
    assert all(total <= 1.0 + 1e-12 for total in by_source.values())


def test_stored_rho_above_minus_one(tiny_model):
    assert all(e.rho > -1.0 for e in tiny_model.ts_entries.values())


def test_filter_cognates_rules():
    src_vocab, tgt_vocab, pairs = parse_corpus(
        ["syntax shkola\tsintaksis shkola2"]
    )
    cognates = [("syntax", "sintaksis")]
    sid = src_vocab.id_of
    tid = tgt_vocab.id_of
    records = [
        rec((sid("syntax"),), (tid("sintaksis"),)),   # both sides listed -> pass
        rec((sid("syntax"),), (tid("shkola2"),)),     # only source listed -> drop
        rec((sid("shkola"),), (tid("sintaksis"),)),   # only target listed -> drop
        rec((sid("shkola"),), (tid("shkola2"),)),     # neither -> pass
    ]
    kept = list(filter_cognates(records, cognates, src_vocab, tgt_vocab))
    assert kept == [records[0], records[3]]


def test_filter_cognates_empty_list_is_identity():
    src_vocab, tgt_vocab, pairs = parse_corpus(["a b\tx y"])
    records = list(
        iter_corpus_records(pairs, PairGenConfig(l_max=2))
    )
    kept = list(filter_cognates(records, [], src_vocab, tgt_vocab))
    assert kept == records


def test_cognate_file_parsing():
    rows = load_cognates(["# comment", "syntax\tsintaksis", "", "a\tb"])
    assert rows == [("syntax", "sintaksis"), ("a", "b")]
    with pytest.raises(ParseError) as err:
        load_cognates(["syntax sintaksis"])
    assert err.value.line_number == 1


def test_build_dictionaries_rejects_empty_table():
    from blockmt.corpus import SOURCE, TARGET, Vocabulary

    with pytest.raises(EmptyModelError):
        build_dictionaries(
            CountTable(), ThresholdConfig(), Vocabulary(SOURCE), Vocabulary(TARGET)
        )
