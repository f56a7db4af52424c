"""Figure rendering for the CLI report path.

Charts are written straight to files with the Agg backend; nothing here
opens a window.  The interval chart draws one lower-mean-upper glyph per
period, the forecast chart overlays the predicted path and flags the
recommended market day.
"""

from __future__ import annotations

import datetime as dt
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .arima import ForecastPoint
from .bootstrap import FlapSummary


def interval_chart(
    summaries: Sequence[FlapSummary],
    path: str | Path,
    title: str = "",
) -> Path:
    """Per-period mean with its confidence interval, in calendar order."""
    if not summaries:
        raise ValueError("nothing to plot")
    labels = [s.period_label for s in summaries]
    means = [s.mean for s in summaries]
    lows = [s.mean - s.ci.lower for s in summaries]
    highs = [s.ci.upper - s.mean for s in summaries]

    fig, ax = plt.subplots(figsize=(max(6.0, 0.8 * len(labels)), 4.0))
    ax.errorbar(
        range(len(labels)), means, yerr=[lows, highs],
        fmt="o", capsize=4, color="tab:blue", ecolor="tab:gray",
    )
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("price (Rs/quintal)")
    if title:
        ax.set_title(title)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def forecast_chart(
    points: Sequence[ForecastPoint],
    recommended: dt.date | None,
    path: str | Path,
    title: str = "",
) -> Path:
    """Predicted daily path with the recommended day circled."""
    if not points:
        raise ValueError("nothing to plot")
    dates = [p.date for p in points]
    values = [p.predicted for p in points]

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(dates, values, marker="o", color="tab:blue", label="predicted")
    if recommended is not None:
        rec_value = next(p.predicted for p in points if p.date == recommended)
        ax.scatter(
            [recommended], [rec_value],
            s=160, facecolors="none", edgecolors="tab:red",
            linewidths=2, label="recommended day", zorder=3,
        )
    ax.set_ylabel("price (Rs/quintal)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.autofmt_xdate(rotation=45)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
