"""Deterministic synthetic corpora for calibration and verification.

Two generators live here: an independent pair-record sampler (a null
corpus where every source/target association is chance), and a small
Markov toy language with a bijective lexicon plus reordered two-word
collocations, used to exercise the whole train/decode loop with a known
reference translation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .blocks import PairRecord
from .corpus import SOURCE, TARGET, SentencePair, Vocabulary


def independent_records(
    n_records: int,
    source_vocab_size: int = 20,
    target_vocab_size: int = 20,
    seed: int = 0,
) -> tuple[Vocabulary, Vocabulary, list[PairRecord]]:
    """Single-word pair records with the two sides drawn independently."""
    rng = random.Random(seed)
    src_vocab = Vocabulary(SOURCE)
    tgt_vocab = Vocabulary(TARGET)
    src_ids = [src_vocab.add(f"s{i:03d}") for i in range(source_vocab_size)]
    tgt_ids = [tgt_vocab.add(f"t{i:03d}") for i in range(target_vocab_size)]
    records = [
        PairRecord((rng.choice(src_ids),), (rng.choice(tgt_ids),))
        for _ in range(n_records)
    ]
    return src_vocab, tgt_vocab, records


def independent_sentence_pairs(
    n_pairs: int,
    vocab_size: int = 8,
    length: int = 12,
    seed: int = 0,
) -> tuple[Vocabulary, Vocabulary, list[SentencePair]]:
    """Fixed-length sentence pairs with all tokens drawn iid per side."""
    rng = random.Random(seed)
    src_vocab = Vocabulary(SOURCE)
    tgt_vocab = Vocabulary(TARGET)
    src_ids = [src_vocab.add(f"s{i:03d}") for i in range(vocab_size)]
    tgt_ids = [tgt_vocab.add(f"t{i:03d}") for i in range(vocab_size)]
    pairs = []
    for index in range(n_pairs):
        source = tuple(rng.choice(src_ids) for _ in range(length))
        target = tuple(rng.choice(tgt_ids) for _ in range(length))
        pairs.append(SentencePair(index=index, source=source, target=target))
    return src_vocab, tgt_vocab, pairs


@dataclass
@dataclass
class ToyLanguage:
    """Layered Markov toy language pair with a known reference translation.

    The 50-word lexicon is bijective (source word i <-> target word i):
    a boundary-open and boundary-close marker, and 48 content words
    arranged in 8 layers; every transition moves to the next layer, so a
    sentence (at most 6 content words) never revisits a layer.  Each
    layer holds one dedicated sentence-starting word, one dedicated
    sentence-closing word, one or two free words, and collocation
    members: ten head words transition only into their fixed tail word,
    and such a pair translates as the two target words in swapped order.

    Because sentences are walks in this graph, the attested target
    patterns are exactly the images of walked transitions: dropping,
    inserting, substituting or reordering any content word produces a
    target adjacency that never occurs in training (a layer skip, a
    non-starter after the opening marker, or a non-closing word before
    the closing marker), which the decoder's correction stage can
    detect without any frequency margin.
    """

    n_layers: int = 8
    n_collocations: int = 10
    branching: int = 2
    seed: int = 7

    def __post_init__(self) -> None:
        rng = random.Random(self.seed)
        m = self.n_layers

        next_id = 0

        def take() -> int:
            nonlocal next_id
            next_id += 1
            return next_id - 1

        self.bos = take()
        self.eos = take()
        self.starter_at = [take() for _ in range(m)]
        self.stopper_at = [take() for _ in range(m)]
        n_free = 50 - 2 - 2 * m - 2 * self.n_collocations
        self.free_at: list[list[int]] = [[] for _ in range(m)]
        for i in range(n_free):
            self.free_at[i % m].append(take())
        self.heads_at: list[list[int]] = [[] for _ in range(m)]
        self.tail_of: dict[int, int] = {}
        for j in range(self.n_collocations):
            layer = j % m
            head = take()
            tail = take()
            self.heads_at[layer].append(head)
            self.tail_of[head] = tail
        self.n_words = next_id
        self.src_words = [f"s{i:02d}" for i in range(self.n_words)]
        self.tgt_words = [f"t{i:02d}" for i in range(self.n_words)]

        # Mid-sentence transitions target the next layer's free words and
        # collocation heads; heads force their tail; the stop transition
        # (into stopper_at) and the boundary markers are handled by the
        # walk itself.
        self.successors: dict[int, list[int]] = {}
        content = list(self.starter_at)
        for layer in range(m):
            content.extend(self.free_at[layer])
        content.extend(self.tail_of.values())
        layer_of: dict[int, int] = {}
        for layer in range(m):
            layer_of[self.starter_at[layer]] = layer
            layer_of[self.stopper_at[layer]] = layer
            for word in self.free_at[layer] + self.heads_at[layer]:
                layer_of[word] = layer
        for head, tail in self.tail_of.items():
            layer_of[tail] = (layer_of[head] + 1) % m
        self.layer_of = layer_of
        for word in content:
            nxt = (layer_of[word] + 1) % m
            options = self.free_at[nxt] + self.heads_at[nxt]
            succ = rng.sample(options, min(self.branching, len(options)))
            if all(w in self.tail_of for w in succ):
                succ[0] = rng.choice(self.free_at[nxt])
            self.successors[word] = succ
        for head, tail in self.tail_of.items():
            self.successors[head] = [tail]

    def _walk(self, rng: random.Random, content_len: int) -> list[int]:
        """Starter, mid-sentence words, then the layer-matched stopper."""
        layer = rng.randrange(self.n_layers)
        walk = [self.starter_at[layer]]
        while len(walk) < content_len - 1:
            options = self.successors[walk[-1]]
            nxt = rng.choice(options)
            # A head consumes two slots and may not displace the stopper.
            if nxt in self.tail_of and content_len - 1 - len(walk) < 2:
                plain = [w for w in options if w not in self.tail_of]
                nxt = rng.choice(plain)
            walk.append(nxt)
        stop_layer = (layer + content_len - 1) % self.n_layers
        walk.append(self.stopper_at[stop_layer])
        return walk

    def sample(self, rng: random.Random, min_len: int = 5, max_len: int = 8) -> list[int]:
        """A full sentence: boundary markers around 3..6 content words."""
        content_len = rng.randint(min_len, max_len) - 2
        return [self.bos] + self._walk(rng, content_len) + [self.eos]

    def reference(self, source: list[int]) -> list[int]:
        """Reference translation: bijective map with collocation swaps."""
        out = []
        i = 0
        while i < len(source):
            word = source[i]
            if (
                word in self.tail_of
                and i + 1 < len(source)
                and source[i + 1] == self.tail_of[word]
            ):
                out.append(self.tail_of[word])
                out.append(word)
                i += 2
            else:
                out.append(word)
                i += 1
        return out

    def content(self, text: str) -> str:
        """Strip the boundary markers off a rendered sentence."""
        tokens = [
            t
            for t in text.split()
            if t not in (
                self.src_words[self.bos],
                self.src_words[self.eos],
                self.tgt_words[self.bos],
                self.tgt_words[self.eos],
            )
        ]
        return " ".join(tokens)

    def _render(self, source: list[int]) -> tuple[str, str]:
        target = self.reference(source)
        return (
            " ".join(self.src_words[w] for w in source),
            " ".join(self.tgt_words[w] for w in target),
        )

    def corpus_lines(self, n_pairs: int, seed: int, min_len: int = 5, max_len: int = 8) -> list[str]:
        """Aligned corpus lines ``source<TAB>reference-translation``."""
        rng = random.Random(seed)
        lines = []
        for _ in range(n_pairs):
            src_text, tgt_text = self._render(self.sample(rng, min_len, max_len))
            lines.append(f"{src_text}\t{tgt_text}")
        return lines

    def heldout(self, n_pairs: int, seed: int, min_len: int = 5, max_len: int = 8) -> list[tuple[str, str]]:
        """(source line, reference line) pairs for evaluation."""
        rng = random.Random(seed)
        return [self._render(self.sample(rng, min_len, max_len)) for _ in range(n_pairs)]
