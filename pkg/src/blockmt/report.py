"""Model inspection report: summary table plus diagnostic figures."""

from __future__ import annotations

import os
from collections import Counter

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .stats import Model


def _summary_rows(model: Model) -> list[tuple[str, str]]:
    prohibited = sum(1 for e in model.ts_entries.values() if e.prohibited)
    rows = [
        ("n", str(model.n)),
        ("alternative", model.gen_config.alternative),
        ("l_max", str(model.gen_config.l_max)),
        ("truncated", "1" if model.truncated else "0"),
        ("source_vocab", str(len(model.src_vocab))),
        ("target_vocab", str(len(model.tgt_vocab))),
        ("s_entries", str(len(model.s_counts))),
        ("t_entries", str(len(model.t_counts))),
        ("ts_entries", str(len(model.ts_entries))),
        ("ts_prohibited", str(prohibited)),
        ("laf_source_words", str(len(model.laf.source))),
        ("laf_target_words", str(len(model.laf.target))),
    ]
    for length, count in sorted(Counter(len(b) for b in model.s_counts).items()):
        rows.append((f"s_blocks_len{length}", str(count)))
    for length, count in sorted(Counter(len(b) for b in model.t_counts).items()):
        rows.append((f"t_blocks_len{length}", str(count)))
    return rows


def _plot_rho_hist(model: Model, path: str) -> None:
    kept = [e.rho for e in model.ts_entries.values() if not e.prohibited]
    banned = [e.rho for e in model.ts_entries.values() if e.prohibited]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(kept, bins=50, color="#3572b0", alpha=0.8, label="kept")
    if banned:
        ax.hist(banned, bins=50, color="#c0392b", alpha=0.8, label="prohibited")
    ax.set_xlabel("relative correlation")
    ax.set_ylabel("bilingual entries")
    ax.set_title("Relative correlation of stored block pairs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_block_lengths(model: Model, path: str) -> None:
    s_by_len = Counter(len(b) for b in model.s_counts)
    t_by_len = Counter(len(b) for b in model.t_counts)
    lengths = sorted(set(s_by_len) | set(t_by_len))
    width = 0.4
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([l - width / 2 for l in lengths], [s_by_len.get(l, 0) for l in lengths],
           width=width, color="#3572b0", label="source")
    ax.bar([l + width / 2 for l in lengths], [t_by_len.get(l, 0) for l in lengths],
           width=width, color="#2c9e4b", label="target")
    ax.set_xticks(lengths)
    ax.set_xlabel("block length (words)")
    ax.set_ylabel("dictionary entries")
    ax.set_title("Dictionary size by block length")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_adhesion(model: Model, path: str) -> None:
    """Local factor sanity plot: laf * P(word) should sit near 1."""
    fig, ax = plt.subplots(figsize=(6, 4))
    plotted = False
    for side, color in (("source", "#3572b0"), ("target", "#2c9e4b")):
        table = model.laf.for_side(side)
        counts = model.counts_for_side(side)
        xs, ys = [], []
        for token, (laf, support) in table.items():
            if support == 0:
                continue
            p_word = counts.get((token,), 0) / model.n
            if p_word <= 0:
                continue
            xs.append(support)
            ys.append(laf * p_word)
        if xs:
            ax.scatter(xs, ys, s=14, alpha=0.6, color=color, label=side)
            plotted = True
    ax.axhline(1.0, color="#888888", linewidth=1, linestyle="--")
    ax.set_xlabel("contexts averaged (support)")
    ax.set_ylabel("local factor x word probability")
    ax.set_title("Local adhesion factor against the 1/P reference")
    if plotted:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(model: Model, out_dir: str) -> list[str]:
    """Write summary.tsv and the diagnostic figures; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    summary_path = os.path.join(out_dir, "summary.tsv")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as handle:
        for key, value in _summary_rows(model):
            handle.write(f"{key}\t{value}\n")
    written.append(summary_path)

    for name, plot in (
        ("rho_hist.png", _plot_rho_hist),
        ("block_lengths.png", _plot_block_lengths),
        ("adhesion_check.png", _plot_adhesion),
    ):
        path = os.path.join(out_dir, name)
        plot(model, path)
        written.append(path)
    return written
