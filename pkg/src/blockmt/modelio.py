"""Lossless text serialization of trained models.

Layout (UTF-8, LF line endings)::

    #BLOCKMT v1
    #meta key<TAB>value            (one per metadata field)
    #S                             (source dictionary: block<TAB>count)
    #T                             (target dictionary)
    #TS                            (src<TAB>tgt<TAB>count<TAB>prohibited)
    #LAF                           (side<TAB>token<TAB>laf<TAB>support)
    #CHECKSUM <hex>                (sha256 over all preceding bytes)

Counts are stored as integers and probabilities derived on load, so a
round trip reproduces every number exactly; sections are sorted by
surface form, so re-saving a loaded model is byte-identical.
"""

from __future__ import annotations

import hashlib
from typing import Iterable

from .blocks import Block, PairGenConfig, render_block
from .corpus import SOURCE, TARGET, Vocabulary
from .errors import (
    ChecksumError,
    ModelFormatError,
    UnsupportedSectionError,
    UnsupportedVersionError,
)
from .stats import DictEntryTS, LafTable, Model, ThresholdConfig, conditionals

_HEADER = "#BLOCKMT v1"
_SECTIONS = ("#S", "#T", "#TS", "#LAF")

_FLOAT_META = {"cs_pos", "cs_neg", "ct_pos", "ct_neg", "cts_pos", "cts_neg"}
_BOOL_META = {"emit_empty", "truncated"}
_INT_META = {"n", "l_max", "w_max", "min_count"}


def _fmt_float(value: float) -> str:
    return format(value, ".17g")


def _meta_lines(model: Model) -> list[str]:
    cfg = model.gen_config
    th = model.thresholds
    pairs = [
        ("n", str(model.n)),
        ("alternative", cfg.alternative),
        ("l_max", str(cfg.l_max)),
        ("budget", "none" if cfg.budget is None else str(cfg.budget)),
        ("emit_empty", "1" if cfg.emit_empty else "0"),
        ("w_max", str(cfg.w_max)),
        ("min_count", str(th.min_count)),
        ("cs_pos", _fmt_float(th.c_plus_s)),
        ("cs_neg", _fmt_float(th.c_minus_s)),
        ("ct_pos", _fmt_float(th.c_plus_t)),
        ("ct_neg", _fmt_float(th.c_minus_t)),
        ("cts_pos", _fmt_float(th.c_plus_ts)),
        ("cts_neg", _fmt_float(th.c_minus_ts)),
        ("truncated", "1" if model.truncated else "0"),
    ]
    return [f"#meta {key}\t{value}" for key, value in pairs]


def save_model_text(model: Model) -> str:
    lines = [_HEADER]
    lines.extend(_meta_lines(model))

    lines.append("#S")
    rows = [(render_block(b, model.src_vocab), c) for b, c in model.s_counts.items()]
    for text, count in sorted(rows):
        lines.append(f"{text}\t{count}")

    lines.append("#T")
    rows = [(render_block(b, model.tgt_vocab), c) for b, c in model.t_counts.items()]
    for text, count in sorted(rows):
        lines.append(f"{text}\t{count}")

    lines.append("#TS")
    ts_rows = [
        (
            render_block(e.source_block, model.src_vocab),
            render_block(e.target_block, model.tgt_vocab),
            e.count,
            1 if e.prohibited else 0,
        )
        for e in model.ts_entries.values()
    ]
    for src, tgt, count, prohibited in sorted(ts_rows):
        lines.append(f"{src}\t{tgt}\t{count}\t{prohibited}")

    lines.append("#LAF")
    laf_rows = []
    for side, table in ((SOURCE, model.laf.source), (TARGET, model.laf.target)):
        vocab = model.src_vocab if side == SOURCE else model.tgt_vocab
        for token, (laf, support) in table.items():
            laf_rows.append((side, vocab.surface(token), _fmt_float(laf), support))
    for side, surface, laf, support in sorted(laf_rows):
        lines.append(f"{side}\t{surface}\t{laf}\t{support}")

    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return body + f"#CHECKSUM {digest}\n"


def save_model(model: Model, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(save_model_text(model))


def _verify_checksum(raw: bytes) -> list[str]:
    """Check the trailing digest and return the verified body lines.

    The digest covers every byte before the final line, so it is checked
    before anything is decoded or parsed: any single-byte corruption is
    reported as a checksum failure, not a parse failure.
    """
    stripped = raw[:-1] if raw.endswith(b"\n") else raw
    cut = stripped.rfind(b"\n")
    last_line = stripped[cut + 1 :]
    body = raw[: cut + 1]
    if not last_line.startswith(b"#CHECKSUM "):
        raise ChecksumError("missing checksum line")
    stored = last_line[len(b"#CHECKSUM ") :].decode("ascii", "replace").strip()
    digest = hashlib.sha256(body).hexdigest()
    if digest != stored:
        raise ChecksumError("model file corrupted: checksum mismatch")
    return body.decode("utf-8").splitlines()


def _block_from_text(text: str, vocab: Vocabulary) -> Block:
    tokens = text.split(" ")
    if not tokens or any(not t for t in tokens):
        raise ModelFormatError(f"malformed block field {text!r}")
    return tuple(vocab.add(t) for t in tokens)


def _parse_meta(lines: Iterable[str]) -> dict[str, str]:
    meta = {}
    for line in lines:
        payload = line[len("#meta ") :]
        if "\t" not in payload:
            raise ModelFormatError(f"malformed meta line {line!r}")
        key, value = payload.split("\t", 1)
        meta[key] = value
    return meta


def load_model_text(raw: bytes) -> Model:
    """Parse model bytes; the checksum is verified before any field."""
    lines = _verify_checksum(raw)
    if not lines or lines[0] != _HEADER:
        raise UnsupportedVersionError(
            f"unsupported model header {lines[0]!r}" if lines else "empty model file"
        )

    meta_lines = []
    sections: dict[str, list[str]] = {name: [] for name in _SECTIONS}
    current: str | None = None
    for line in lines[1:]:
        if line.startswith("#meta "):
            meta_lines.append(line)
            continue
        if line.startswith("#"):
            if line not in sections:
                raise UnsupportedSectionError(f"unsupported section {line!r}")
            current = line
            continue
        if current is None:
            raise ModelFormatError(f"data line outside any section: {line!r}")
        sections[current].append(line)

    meta = _parse_meta(meta_lines)
    try:
        n = int(meta["n"])
        gen_config = PairGenConfig(
            alternative=meta["alternative"],
            l_max=int(meta["l_max"]),
            budget=None if meta["budget"] == "none" else int(meta["budget"]),
            emit_empty=meta["emit_empty"] == "1",
            w_max=int(meta["w_max"]),
        )
        thresholds = ThresholdConfig(
            c_plus_s=float(meta["cs_pos"]),
            c_minus_s=float(meta["cs_neg"]),
            c_plus_t=float(meta["ct_pos"]),
            c_minus_t=float(meta["ct_neg"]),
            c_plus_ts=float(meta["cts_pos"]),
            c_minus_ts=float(meta["cts_neg"]),
            min_count=int(meta["min_count"]),
        )
        truncated = meta["truncated"] == "1"
    except KeyError as exc:
        raise ModelFormatError(f"missing meta key {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ModelFormatError(f"malformed meta value: {exc}") from exc

    src_vocab = Vocabulary(SOURCE)
    tgt_vocab = Vocabulary(TARGET)

    s_counts: dict[Block, int] = {}
    for line in sections["#S"]:
        try:
            text, count = line.split("\t")
            s_counts[_block_from_text(text, src_vocab)] = int(count)
        except ValueError as exc:
            raise ModelFormatError(f"malformed #S row {line!r}") from exc

    t_counts: dict[Block, int] = {}
    for line in sections["#T"]:
        try:
            text, count = line.split("\t")
            t_counts[_block_from_text(text, tgt_vocab)] = int(count)
        except ValueError as exc:
            raise ModelFormatError(f"malformed #T row {line!r}") from exc

    ts_entries: dict[tuple[Block, Block], DictEntryTS] = {}
    for line in sections["#TS"]:
        try:
            src_text, tgt_text, count_text, prohibited_text = line.split("\t")
            src = _block_from_text(src_text, src_vocab)
            tgt = _block_from_text(tgt_text, tgt_vocab)
            count = int(count_text)
            prohibited = prohibited_text == "1"
        except ValueError as exc:
            raise ModelFormatError(f"malformed #TS row {line!r}") from exc
        n_s = s_counts.get(src)
        n_t = t_counts.get(tgt)
        if n_s is None or n_t is None:
            raise ModelFormatError(
                f"pair references a block missing from its dictionary: {line!r}"
            )
        p_t_s, p_s_t, p_joint = conditionals(count, n_s, n_t, n)
        ts_entries[(src, tgt)] = DictEntryTS(
            source_block=src,
            target_block=tgt,
            count=count,
            p_joint=p_joint,
            p_t_given_s=p_t_s,
            p_s_given_t=p_s_t,
            rho=(count * n) / (n_s * n_t) - 1.0,
            prohibited=prohibited,
        )

    laf = LafTable()
    for line in sections["#LAF"]:
        try:
            side, surface, laf_text, support_text = line.split("\t")
            value = float(laf_text)
            support = int(support_text)
        except ValueError as exc:
            raise ModelFormatError(f"malformed #LAF row {line!r}") from exc
        if side not in (SOURCE, TARGET):
            raise ModelFormatError(f"unknown side in #LAF row {line!r}")
        vocab = src_vocab if side == SOURCE else tgt_vocab
        laf.for_side(side)[vocab.add(surface)] = (value, support)

    return Model(
        src_vocab=src_vocab,
        tgt_vocab=tgt_vocab,
        n=n,
        s_counts=s_counts,
        t_counts=t_counts,
        ts_entries=ts_entries,
        laf=laf,
        gen_config=gen_config,
        thresholds=thresholds,
        truncated=truncated,
    )


def load_model(path: str) -> Model:
    with open(path, "rb") as handle:
        return load_model_text(handle.read())
