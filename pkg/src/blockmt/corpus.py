"""Parsing of pre-aligned parallel corpora into token-id sentence pairs.

The corpus format is one pair per line, ``source-tokens<TAB>target-tokens``,
tokens separated by single spaces, ``#``-prefixed lines treated as comments.
Input is expected to be pre-tokenized; punctuation marks are ordinary tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    EmptySentenceError,
    EncodingError,
    MalformedLineError,
    ReservedTokenError,
)

EMPTY_ID = 0
OOV_ID = 1
EMPTY_SURFACE = "<EMPTY>"
OOV_SURFACE = "<OOV>"
_RESERVED = (EMPTY_SURFACE, OOV_SURFACE)

SOURCE = "source"
TARGET = "target"


class Vocabulary:
    """Interned surface tokens for one language side.

    Id 0 is reserved for the EMPTY pseudo-token (zero-information block
    filler) and id 1 for out-of-vocabulary words seen at decode time.
    Ids are assigned in first-occurrence order, so parsing the same
    stream twice yields identical assignments.  Once parsing finishes the
    vocabulary is treated as immutable and is safe to share across
    threads.
    """

    def __init__(self, side: str):
        if side not in (SOURCE, TARGET):
            raise ValueError(f"side must be {SOURCE!r} or {TARGET!r}, got {side!r}")
        self.side = side
        self._surfaces: list[str] = list(_RESERVED)
        self._ids: dict[str, int] = {s: i for i, s in enumerate(_RESERVED)}

    def __len__(self) -> int:
        return len(self._surfaces)

    def __contains__(self, surface: str) -> bool:
        return surface in self._ids

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self.side == other.side and self._surfaces == other._surfaces

    def add(self, surface: str) -> int:
        """Intern ``surface`` and return its id (existing id if known)."""
        token_id = self._ids.get(surface)
        if token_id is None:
            token_id = len(self._surfaces)
            self._surfaces.append(surface)
            self._ids[surface] = token_id
        return token_id

    def id_of(self, surface: str) -> int | None:
        return self._ids.get(surface)

    def surface(self, token_id: int) -> str:
        return self._surfaces[token_id]

    def entries(self) -> tuple[str, ...]:
        """All surfaces in id order, reserved entries included."""
        return tuple(self._surfaces)


@dataclass(frozen=True)
class SentencePair:
    """One aligned pair; ``index`` is the ordinal in the corpus."""

    index: int
    source: tuple[int, ...]
    target: tuple[int, ...]


@dataclass(frozen=True)
class TokenizedSentence:
    """Token ids plus the raw surfaces (needed for OOV copy-through)."""

    ids: tuple[int, ...]
    surfaces: tuple[str, ...]


def _intern_tokens(
    tokens: list[str], vocab: Vocabulary, lowercase: bool, line_number: int | None
) -> tuple[int, ...]:
    ids = []
    for tok in tokens:
        if lowercase:
            tok = tok.lower()
        if tok in _RESERVED:
            raise ReservedTokenError(
                f"token {tok!r} collides with a reserved entry", line_number
            )
        ids.append(vocab.add(tok))
    return tuple(ids)


def parse_corpus(
    stream: Iterable[str],
    max_pairs: int | None = None,
    lowercase: bool = False,
) -> tuple[Vocabulary, Vocabulary, list[SentencePair]]:
    """Parse an aligned corpus into sentence pairs and two vocabularies.

    ``stream`` yields text lines (e.g. an open UTF-8 file).  Empty lines
    and ``#`` comments are skipped; parsing stops after ``max_pairs``
    pairs when given.  Raises :class:`MalformedLineError` for lines
    without exactly one tab, :class:`EmptySentenceError` when a side has
    no tokens, and :class:`EncodingError` when the stream cannot be
    decoded.
    """
    src_vocab = Vocabulary(SOURCE)
    tgt_vocab = Vocabulary(TARGET)
    pairs: list[SentencePair] = []
    line_number = 0
    lines = iter(stream)
    while True:
        if max_pairs is not None and len(pairs) >= max_pairs:
            break
        try:
            line = next(lines)
        except StopIteration:
            break
        except UnicodeDecodeError as exc:
            raise EncodingError(f"invalid UTF-8: {exc}", line_number + 1) from exc
        line_number += 1
        stripped = line.rstrip("\r\n")
        if not stripped.strip() or stripped.startswith("#"):
            continue
        if stripped.count("\t") != 1:
            raise MalformedLineError(
                f"expected exactly one tab, found {stripped.count(chr(9))}",
                line_number,
            )
        src_text, tgt_text = stripped.split("\t")
        src_tokens = src_text.split()
        tgt_tokens = tgt_text.split()
        if not src_tokens or not tgt_tokens:
            raise EmptySentenceError("empty sentence on one side", line_number)
        pairs.append(
            SentencePair(
                index=len(pairs),
                source=_intern_tokens(src_tokens, src_vocab, lowercase, line_number),
                target=_intern_tokens(tgt_tokens, tgt_vocab, lowercase, line_number),
            )
        )
    return src_vocab, tgt_vocab, pairs


def tokenize_sentence(
    raw: str,
    vocab: Vocabulary,
    frozen: bool = True,
    lowercase: bool = False,
) -> TokenizedSentence:
    """Map a whitespace-separated sentence to token ids.

    With ``frozen`` set (the decode-time default) unknown tokens map to
    the OOV id and their surfaces are kept for copy-through; otherwise
    unknown tokens are added to the vocabulary.  Empty input yields an
    empty sequence.
    """
    ids: list[int] = []
    surfaces: list[str] = []
    for tok in raw.split():
        if lowercase:
            tok = tok.lower()
        surfaces.append(tok)
        known = vocab.id_of(tok)
        if known is not None:
            ids.append(known)
        elif frozen:
            ids.append(OOV_ID)
        else:
            ids.append(vocab.add(tok))
    return TokenizedSentence(ids=tuple(ids), surfaces=tuple(surfaces))


def render_pair(pair: SentencePair, src_vocab: Vocabulary, tgt_vocab: Vocabulary) -> str:
    """Render a parsed pair back to its corpus line (single-space joins)."""
    src = " ".join(src_vocab.surface(i) for i in pair.source)
    tgt = " ".join(tgt_vocab.surface(i) for i in pair.target)
    return f"{src}\t{tgt}"


def iter_lines(path: str) -> Iterator[str]:
    """Yield lines of a UTF-8 text file (strict decoding)."""
    with open(path, "r", encoding="utf-8", errors="strict") as handle:
        yield from handle
