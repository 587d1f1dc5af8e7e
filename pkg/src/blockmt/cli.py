"""Command-line entry points: train, translate, lookup, stats.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys

from .blocks import ALL_IN, SYMMETRIC, PairGenConfig
from .corpus import iter_lines, parse_corpus, tokenize_sentence
from .decoder import DecodeParams, render_target, translate
from .errors import BlockMtError
from .modelio import load_model, save_model
from .stats import Model, ThresholdConfig, load_cognates
from .train import train_model

_ALT = {"a": ALL_IN, "b": SYMMETRIC}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D401 - argparse hook
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="blockmt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="induce a block dictionary from a corpus")
    train.add_argument("--corpus", required=True, help="aligned corpus (src<TAB>tgt per line)")
    train.add_argument("--out", required=True, help="output model path")
    train.add_argument("--alt", choices=("a", "b"), default="a",
                       help="pair generation alternative: a=all-in, b=symmetric")
    train.add_argument("--max-block-len", type=int, default=3, metavar="N")
    train.add_argument("--min-count", type=int, default=1, metavar="N")
    train.add_argument("--cs-pos", type=float, default=2.0, metavar="FLOAT")
    train.add_argument("--cs-neg", type=float, default=0.9, metavar="FLOAT")
    train.add_argument("--ct-pos", type=float, default=2.0, metavar="FLOAT")
    train.add_argument("--ct-neg", type=float, default=0.9, metavar="FLOAT")
    train.add_argument("--cts-pos", type=float, default=2.0, metavar="FLOAT")
    train.add_argument("--cts-neg", type=float, default=0.9, metavar="FLOAT")
    train.add_argument("--budget", type=int, default=None, metavar="N",
                       help="cap on generated pair records")
    train.add_argument("--emit-empty", action="store_true",
                       help="also pair blocks against the EMPTY block")
    train.add_argument("--w-max", type=int, default=4, metavar="N",
                       help="segment-count cap for the symmetric alternative")
    train.add_argument("--cognates", metavar="PATH", default=None)
    train.add_argument("--max-pairs", type=int, default=None, metavar="N",
                       help="read at most N corpus pairs")
    train.add_argument("--lowercase", action="store_true")
    train.add_argument("--seed", type=int, default=0, metavar="N")

    trans = sub.add_parser("translate", help="translate stdin line by line")
    trans.add_argument("--model", required=True)
    trans.add_argument("--beam", type=int, default=64, metavar="N")
    trans.add_argument("--n-best", type=int, default=1, metavar="K")
    trans.add_argument("--adhesion", choices=("literal", "gaf", "laf"),
                       default="literal")
    trans.add_argument("--p-floor", type=float, default=1e-9, metavar="FLOAT")
    trans.add_argument("--synonyms", metavar="PATH", default=None)
    trans.add_argument("--lowercase", action="store_true")
    trans.add_argument("--seed", type=int, default=0, metavar="N")

    lookup = sub.add_parser("lookup", help="list dictionary entries for a block")
    lookup.add_argument("--model", required=True)
    lookup.add_argument("block", help="source block text, tokens space-separated")
    lookup.add_argument("--lowercase", action="store_true")

    stats = sub.add_parser("stats", help="write a summary table and figures")
    stats.add_argument("--model", required=True)
    stats.add_argument("--out-dir", required=True)
    return parser


def _load_synonyms(path: str | None, model: Model) -> set[tuple[int, int]] | None:
    if path is None:
        return None
    pairs = load_cognates(iter_lines(path))  # same two-column format
    ids = set()
    for a, b in pairs:
        ia = model.tgt_vocab.id_of(a)
        ib = model.tgt_vocab.id_of(b)
        if ia is not None and ib is not None:
            ids.add((ia, ib))
    return ids


def _cmd_train(args: argparse.Namespace) -> int:
    src_vocab, tgt_vocab, pairs = parse_corpus(
        iter_lines(args.corpus), max_pairs=args.max_pairs, lowercase=args.lowercase
    )
    gen_config = PairGenConfig(
        alternative=_ALT[args.alt],
        l_max=args.max_block_len,
        budget=args.budget,
        emit_empty=args.emit_empty,
        w_max=args.w_max,
    )
    thresholds = ThresholdConfig(
        c_plus_s=args.cs_pos,
        c_minus_s=args.cs_neg,
        c_plus_t=args.ct_pos,
        c_minus_t=args.ct_neg,
        c_plus_ts=args.cts_pos,
        c_minus_ts=args.cts_neg,
        min_count=args.min_count,
    )
    cognates = None
    if args.cognates:
        cognates = load_cognates(iter_lines(args.cognates))
    model = train_model(pairs, src_vocab, tgt_vocab, gen_config, thresholds, cognates)
    save_model(model, args.out)
    print(f"pairs\t{len(pairs)}")
    print(f"records\t{model.n}")
    print(f"s_entries\t{len(model.s_counts)}")
    print(f"t_entries\t{len(model.t_counts)}")
    print(f"ts_entries\t{len(model.ts_entries)}")
    print(f"truncated\t{1 if model.truncated else 0}")
    print(f"model\t{args.out}")
    return 0


def _cmd_translate(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    synonyms = _load_synonyms(args.synonyms, model)
    params = DecodeParams(
        beam=args.beam,
        k=max(args.n_best, 8),
        mode=args.adhesion,
        p_floor=args.p_floor,
    )
    for index, line in enumerate(sys.stdin):
        text = line.rstrip("\r\n")
        if not text.strip():
            print()
            continue
        sentence = tokenize_sentence(text, model.src_vocab, frozen=True,
                                     lowercase=args.lowercase)
        result = translate(sentence, model, params, synonyms)
        if args.n_best <= 1:
            print(render_target(result.best.merged, model, result.oov_surfaces))
        else:
            for hyp in result.ranked[: args.n_best]:
                rendered = render_target(hyp.merged, model, result.oov_surfaces)
                print(f"{index}\t{hyp.score:.6f}\t{rendered}")
    return 0


def _cmd_lookup(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    sentence = tokenize_sentence(args.block, model.src_vocab, frozen=True,
                                 lowercase=args.lowercase)
    block = sentence.ids
    entries = [e for e in model.ts_by_source.get(block, ())]
    entries.sort(key=lambda e: (-e.p_t_given_s, -e.rho, e.target_block))
    for entry in entries:
        tgt = " ".join(model.tgt_vocab.surface(i) for i in entry.target_block)
        fields = [
            tgt,
            str(entry.count),
            f"{entry.p_joint:.6g}",
            f"{entry.p_t_given_s:.6g}",
            f"{entry.p_s_given_t:.6g}",
            f"{entry.rho:.6g}",
        ]
        if entry.prohibited:
            fields.append("P")
        print("\t".join(fields))
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    from .report import write_report

    model = load_model(args.model)
    for path in write_report(model, args.out_dir):
        print(path)
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "translate": _cmd_translate,
    "lookup": _cmd_lookup,
    "stats": _cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except BlockMtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
