"""Payload builders and serialization shared by the CLI and the service.

Both entry points call the same builders and the same canonical JSON
encoder, which is what makes their outputs byte-identical for the same
inputs and seed.  Canonical JSON: sorted keys, two-space indent, UTF-8,
no NaN/Infinity (non-finite FLAP serializes as null), trailing newline,
and no timestamps anywhere.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Sequence

from . import __version__
from .arima import ArimaModel, ForecastPoint
from .bootstrap import FlapSummary
from .market_data import YearExtremes
from .prim import BacktestReport, PrimReport, backtest_rows
from .ranking import Advice, Ranking


def canonical_json(payload: dict) -> str:
    return json.dumps(
        payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False
    ) + "\n"


def _finite_or_none(x: float | None) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return x


def metadata_block(seed: int | None = None, dataset_version: str | None = None, **inputs) -> dict:
    meta: dict = {"tool_version": __version__}
    if seed is not None:
        meta["seed"] = seed
    if dataset_version is not None:
        meta["dataset_version"] = dataset_version
    meta["inputs"] = {k: v for k, v in sorted(inputs.items()) if v is not None}
    return meta


def summary_dict(summary: FlapSummary) -> dict:
    return {
        "period": summary.period_label,
        "n_years": summary.n_years,
        "mean": summary.mean,
        "sd": summary.sd,
        "lower": summary.ci.lower,
        "upper": summary.ci.upper,
        "level": summary.ci.level,
        "flap": _finite_or_none(summary.flap),
    }


def intervals_payload(summaries: Sequence[FlapSummary], metadata: dict) -> dict:
    return {"intervals": [summary_dict(s) for s in summaries], "metadata": metadata}


def ranking_payload(ranking: Ranking, metadata: dict) -> dict:
    return {
        "ranking": [
            {"rank": e.rank, **summary_dict(e.summary)} for e in ranking.entries
        ],
        "dominance": [
            {"winner": edge.winner, "loser": edge.loser, "rule": edge.rule}
            for edge in ranking.dominance_edges
        ],
        "metadata": metadata,
    }


def advice_payload(advice: Advice, metadata: dict) -> dict:
    return {
        "current_period": advice.current_period,
        "current_rank": advice.current_rank,
        "stay": advice.stay,
        "better_periods": [
            {
                "period": bp.period_label,
                "rank": bp.rank,
                "calendar_distance": bp.calendar_distance,
            }
            for bp in advice.better_periods
        ],
        "metadata": metadata,
    }


def forecast_payload(
    points: Sequence[ForecastPoint],
    recommended: object,
    model: ArimaModel,
    metadata: dict,
) -> dict:
    return {
        "forecasts": [p.to_dict() for p in points],
        "recommended_date": recommended.isoformat() if recommended else None,
        "model": model.to_dict(),
        "metadata": metadata,
    }


def prim_payload(report: PrimReport, metadata: dict) -> dict:
    return {"prim": report.to_dict(), "metadata": metadata}


def backtest_payload(report: BacktestReport, metadata: dict) -> dict:
    return {"backtest": report.to_dict(), "metadata": metadata}


def extremes_payload(rows: Sequence[YearExtremes], metadata: dict) -> dict:
    return {
        "extremes": [
            {
                "year": r.year,
                "min_period": r.min_period,
                "min_price": r.min_price,
                "max_period": r.max_period,
                "max_price": r.max_price,
                "ratio": r.ratio,
            }
            for r in rows
        ],
        "metadata": metadata,
    }


# ---------------------------------------------------------------------------
# Delimited and table renderings
# ---------------------------------------------------------------------------

INTERVAL_COLUMNS = ["period", "n_years", "mean", "sd", "lower", "upper", "flap"]
RANKING_COLUMNS = ["rank", "period", "flap", "mean", "lower", "upper"]
FORECAST_COLUMNS = ["date", "predicted"]
EXTREMES_COLUMNS = ["year", "min_period", "min_price", "max_period", "max_price", "ratio"]
BACKTEST_COLUMNS = [
    "window_start", "window_end", "recommended_date",
    "predicted", "realized", "benchmark", "gain", "success",
]


def rows_to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def rows_to_table(rows: Sequence[dict], columns: Sequence[str]) -> str:
    """Plain aligned text table for terminal reading."""

    def fmt(v: object) -> str:
        if isinstance(v, float):
            return f"{v:.2f}"
        if v is None:
            return "-"
        return str(v)

    cells = [[fmt(row.get(col)) for col in columns] for row in rows]
    widths = [
        max(len(col), *(len(r[i]) for r in cells)) if cells else len(col)
        for i, col in enumerate(columns)
    ]
    lines = ["  ".join(col.ljust(widths[i]) for i, col in enumerate(columns))]
    lines.append("  ".join("-" * w for w in widths))
    for r in cells:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(columns))))
    return "\n".join(lines) + "\n"


def interval_rows(summaries: Sequence[FlapSummary]) -> list[dict]:
    return [
        {k: v for k, v in summary_dict(s).items() if k in INTERVAL_COLUMNS}
        for s in summaries
    ]


def ranking_rows(ranking: Ranking) -> list[dict]:
    rows = []
    for e in ranking.entries:
        d = summary_dict(e.summary)
        rows.append(
            {
                "rank": e.rank,
                "period": d["period"],
                "flap": d["flap"],
                "mean": d["mean"],
                "lower": d["lower"],
                "upper": d["upper"],
            }
        )
    return rows


def forecast_rows(points: Sequence[ForecastPoint]) -> list[dict]:
    return [p.to_dict() for p in points]


def extremes_rows(rows: Sequence[YearExtremes]) -> list[dict]:
    return [
        {
            "year": r.year,
            "min_period": r.min_period,
            "min_price": r.min_price,
            "max_period": r.max_period,
            "max_price": r.max_price,
            "ratio": r.ratio,
        }
        for r in rows
    ]


def backtest_table_rows(report: BacktestReport) -> list[dict]:
    return backtest_rows(report)
