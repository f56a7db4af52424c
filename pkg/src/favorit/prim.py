"""Market-day recommendation and its price-realization-improvement score.

A forecast window is turned into one recommended selling day (the argmax
of the predicted path).  The recommendation is scored against the window's
actual prices: the benchmark is the plain average over the window, the
gain is the realized price minus that benchmark, and the recommendation
counts as a success only when the gain is strictly positive.

The rolling backtest replays this decision over consecutive windows of a
daily series, skipping windows the gap rule rejects rather than aborting.
"""

from __future__ import annotations

import datetime as dt
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

from .arima import ForecastPoint, choose_differencing, forecast_h, select_order
from .errors import (
    FitError,
    GapTooLargeError,
    InsufficientHistoryError,
)
from .market_data import DailyWindow, PriceSeries, slice_recent

DEFAULT_FIT_LEN = 100
DEFAULT_HORIZON = 8
DEFAULT_STEP = 8


@dataclass(frozen=True)
class PrimReport:
    """Outcome of one recommended market day against the window's actuals."""

    window: tuple[dt.date, ...]
    recommended_date: dt.date
    predicted_at_recommendation: float | None
    realized: float
    benchmark: float
    gain: float
    success: bool

    def __post_init__(self) -> None:
        if self.recommended_date not in self.window:
            raise ValueError("recommended date must lie in the window")

    def to_dict(self) -> dict:
        return {
            "window": [d.isoformat() for d in self.window],
            "recommended_date": self.recommended_date.isoformat(),
            "predicted_at_recommendation": self.predicted_at_recommendation,
            "realized": self.realized,
            "benchmark": self.benchmark,
            "gain": self.gain,
            "success": self.success,
        }


@dataclass(frozen=True)
class SkippedWindow:
    anchor: dt.date
    reason: str

    def to_dict(self) -> dict:
        return {"anchor": self.anchor.isoformat(), "reason": self.reason}


@dataclass(frozen=True)
class BacktestReport:
    windows: tuple[PrimReport, ...]
    skipped: tuple[SkippedWindow, ...]
    fit_len: int
    horizon: int
    step: int

    @property
    def count(self) -> int:
        return len(self.windows)

    @property
    def mean_gain(self) -> float | None:
        if not self.windows:
            return None
        return statistics.fmean(w.gain for w in self.windows)

    @property
    def median_gain(self) -> float | None:
        if not self.windows:
            return None
        return statistics.median(w.gain for w in self.windows)

    @property
    def success_rate(self) -> float | None:
        if not self.windows:
            return None
        return sum(1 for w in self.windows if w.success) / len(self.windows)

    def to_dict(self) -> dict:
        return {
            "fit_len": self.fit_len,
            "horizon": self.horizon,
            "step": self.step,
            "count": self.count,
            "mean_gain": self.mean_gain,
            "median_gain": self.median_gain,
            "success_rate": self.success_rate,
            "windows": [w.to_dict() for w in self.windows],
            "skipped": [s.to_dict() for s in self.skipped],
        }


def recommend_market_day(forecasts: Sequence[ForecastPoint]) -> dt.date:
    """Date with the highest predicted price; exact ties go to the earliest day."""
    if not forecasts:
        raise ValueError("no forecasts to choose from")
    best = forecasts[0]
    for point in forecasts[1:]:
        if point.predicted > best.predicted:
            best = point
    return best.date


def _as_pairs(actuals) -> list[tuple[dt.date, float]]:
    if isinstance(actuals, DailyWindow):
        return [(d, float(v)) for d, v in zip(actuals.dates, actuals.values)]
    return [(d, float(v)) for d, v in actuals]


def evaluate_prim(
    recommended_date: dt.date,
    actuals: DailyWindow | Iterable[tuple[dt.date, float]],
    predicted: float | None = None,
) -> PrimReport:
    """Score a recommendation against the window's actual daily prices.

    The benchmark is the arithmetic mean over the whole window, standing in
    for picking a day blind.
    """
    pairs = _as_pairs(actuals)
    if not pairs:
        raise ValueError("actuals must be nonempty")
    by_date = dict(pairs)
    if recommended_date not in by_date:
        raise ValueError(
            f"recommended date {recommended_date.isoformat()} not among the actuals"
        )
    benchmark = statistics.fmean(v for _, v in pairs)
    realized = by_date[recommended_date]
    gain = realized - benchmark
    return PrimReport(
        window=tuple(d for d, _ in pairs),
        recommended_date=recommended_date,
        predicted_at_recommendation=predicted,
        realized=realized,
        benchmark=benchmark,
        gain=gain,
        success=gain > 0,
    )


def run_window(
    series: PriceSeries,
    fit_end: dt.date,
    fit_len: int = DEFAULT_FIT_LEN,
    horizon: int = DEFAULT_HORIZON,
    seed: int = 0,
) -> PrimReport:
    """Fit on the window ending at ``fit_end`` and score the next ``horizon`` days."""
    fit_window = slice_recent(series, fit_end, fit_len)
    holdout = slice_recent(series, fit_end + dt.timedelta(days=horizon), horizon)
    d = choose_differencing(fit_window.values)
    selection = select_order(fit_window.values, d=d, seed=seed)
    forecasts = forecast_h(selection.model, horizon, fit_end + dt.timedelta(days=1))
    recommended = recommend_market_day(forecasts)
    predicted = next(p.predicted for p in forecasts if p.date == recommended)
    return evaluate_prim(recommended, holdout, predicted=predicted)


def rolling_backtest(
    series: PriceSeries,
    fit_len: int = DEFAULT_FIT_LEN,
    horizon: int = DEFAULT_HORIZON,
    step: int = DEFAULT_STEP,
    seed: int = 0,
) -> BacktestReport:
    """Replay the recommendation over consecutive windows of the series.

    Window k fits on the ``fit_len`` calendar days ending at
    first_date + k*step + fit_len - 1 and is scored on the following
    ``horizon`` days.  Windows rejected by the gap rule (or whose fit
    fails) are skipped and reported, not fatal.
    """
    if fit_len < 1 or horizon < 1 or step < 1:
        raise ValueError("fit_len, horizon and step must be positive")
    dates = series.dates()
    span = (dates[-1] - dates[0]).days + 1
    if span < fit_len + horizon:
        raise InsufficientHistoryError(
            f"series spans {span} days; need at least {fit_len + horizon}"
        )

    n_windows = (span - fit_len - horizon) // step + 1
    reports: list[PrimReport] = []
    skipped: list[SkippedWindow] = []
    for k in range(n_windows):
        fit_end = dates[0] + dt.timedelta(days=k * step + fit_len - 1)
        try:
            reports.append(run_window(series, fit_end, fit_len, horizon, seed=seed))
        except (GapTooLargeError, InsufficientHistoryError, FitError) as exc:
            skipped.append(SkippedWindow(anchor=fit_end, reason=str(exc)))

    return BacktestReport(
        windows=tuple(reports),
        skipped=tuple(skipped),
        fit_len=fit_len,
        horizon=horizon,
        step=step,
    )


def backtest_rows(report: BacktestReport) -> list[dict]:
    """Flat one-row-per-window view for delimited output."""
    rows = []
    for w in report.windows:
        rows.append(
            {
                "window_start": w.window[0].isoformat(),
                "window_end": w.window[-1].isoformat(),
                "recommended_date": w.recommended_date.isoformat(),
                "predicted": w.predicted_at_recommendation,
                "realized": w.realized,
                "benchmark": w.benchmark,
                "gain": w.gain,
                "success": w.success,
            }
        )
    return rows
