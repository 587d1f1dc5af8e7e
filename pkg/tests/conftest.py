import pytest

from blockmt.blocks import PairGenConfig
from blockmt.corpus import SOURCE, TARGET, Vocabulary, parse_corpus
from blockmt.stats import DictEntryTS, Model, ThresholdConfig, conditionals
from blockmt.train import train_model

TINY_LINES = [
    "go to school\tidti v shkolu",
    "go home\tidti domoj",
    "we go\tmy idti",
    "to school\tv shkolu",
    "we go to school\tmy idti v shkolu",
]


def train_from_lines(lines, l_max=2, thresholds=None, gen_config=None, cognates=None):
    src_vocab, tgt_vocab, pairs = parse_corpus(lines)
    if gen_config is None:
        gen_config = PairGenConfig(l_max=l_max)
    if thresholds is None:
        thresholds = ThresholdConfig(c_plus_s=0.0, c_plus_t=0.0, c_plus_ts=0.0)
    model = train_model(pairs, src_vocab, tgt_vocab, gen_config, thresholds, cognates)
    return model


@pytest.fixture(scope="session")
def tiny_model():
    """Small hand-checkable model over the go/idti corpus."""
    return train_from_lines(TINY_LINES)


def make_model(
    s_counts=None,
    t_counts=None,
    ts=None,
    n=100,
    l_max=3,
    thresholds=None,
):
    """Assemble a Model directly from surface-keyed count tables.

    ``s_counts``/``t_counts`` map space-joined surface blocks to counts;
    ``ts`` maps (src text, tgt text) to a count.  Probability views for
    the bilingual entries are derived exactly as the trainer would.
    """
    src_vocab = Vocabulary(SOURCE)
    tgt_vocab = Vocabulary(TARGET)

    def block(text, vocab):
        return tuple(vocab.add(tok) for tok in text.split())

    s_table = {block(k, src_vocab): v for k, v in (s_counts or {}).items()}
    t_table = {block(k, tgt_vocab): v for k, v in (t_counts or {}).items()}
    entries = {}
    for (src_text, tgt_text), count in (ts or {}).items():
        src = block(src_text, src_vocab)
        tgt = block(tgt_text, tgt_vocab)
        p_t_s, p_s_t, p_joint = conditionals(count, s_table[src], t_table[tgt], n)
        entries[(src, tgt)] = DictEntryTS(
            source_block=src,
            target_block=tgt,
            count=count,
            p_joint=p_joint,
            p_t_given_s=p_t_s,
            p_s_given_t=p_s_t,
            rho=(count * n) / (s_table[src] * t_table[tgt]) - 1.0,
            prohibited=False,
        )
    return Model(
        src_vocab=src_vocab,
        tgt_vocab=tgt_vocab,
        n=n,
        s_counts=s_table,
        t_counts=t_table,
        ts_entries=entries,
        gen_config=PairGenConfig(l_max=l_max),
        thresholds=thresholds or ThresholdConfig(),
    )
