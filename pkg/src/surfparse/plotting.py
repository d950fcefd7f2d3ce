"""Figures for the ``stats`` and ``eval`` commands."""
from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .core import Document  # noqa: E402
from .metrics import EvalReport  # noqa: E402


def plot_ambiguity(docs: Sequence[tuple[str, Document]], path: str | Path) -> None:
    """Histogram of readings per word, one bar group per document."""
    hists = [(name, Counter(len(c.readings) for c in d.cohorts() if not c.is_punct)) for name, d in docs]
    top = max((max(h, default=1) for _, h in hists), default=1)
    xs = range(1, top + 1)
    width = 0.8 / max(len(hists), 1)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for k, (name, h) in enumerate(hists):
        total = sum(h.values()) or 1
        ax.bar([x + k * width for x in xs], [h.get(x, 0) / total for x in xs], width, label=name)
    ax.set_xlabel("readings per word")
    ax.set_ylabel("share of words")
    ax.set_xticks([x + width * (len(hists) - 1) / 2 for x in xs], [str(x) for x in xs])
    if len(hists) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_report(rows: Sequence[tuple[str, EvalReport]], path: str | Path) -> None:
    """Recall and precision per system."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = range(len(rows))
    ax.bar([x - 0.2 for x in xs], [float(r.recall) * 100 for _, r in rows], 0.4, label="recall")
    ax.bar([x + 0.2 for x in xs], [float(r.precision) * 100 for _, r in rows], 0.4, label="precision")
    ax.set_xticks(list(xs), [name for name, _ in rows])
    ax.set_ylabel("%")
    low = min([float(min(r.recall, r.precision)) * 100 for _, r in rows], default=90.0)
    ax.set_ylim(max(0.0, low - 5), 100.5)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


__all__ = ["plot_ambiguity", "plot_report"]
