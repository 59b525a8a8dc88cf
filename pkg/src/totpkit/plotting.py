"""Figures written next to CLI reports."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_delay_profile(gaps: Sequence[int], budget: int, path: str | Path,
                       title: str = "") -> Path:
    """Bar chart of oracle calls spent before each output, against the delay budget.

    The last bar is the work spent discovering that the stream has ended,
    unless enumeration was cut short by a limit.
    """
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    xs = range(1, len(gaps) + 1)
    ax.bar(xs, gaps, width=0.9, color="#4c72b0", label="oracle calls in gap")
    ax.axhline(budget, color="#c44e52", linestyle="--", linewidth=1.2,
               label=f"budget 4(p+1) = {budget}")
    ax.set_xlabel("gap index")
    ax.set_ylabel("oracle calls")
    ax.set_ylim(0, max([budget, *gaps]) * 1.15 + 1)
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(loc="upper right", fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
