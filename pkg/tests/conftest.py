"""Shared builders for the test suite."""

import datetime as dt

import pytest

from favorit.bootstrap import ConfidenceInterval, FlapSummary
from favorit.market_data import CleaningReport, PriceSeries

# Reference monthly summaries for an eleven-year tomato panel:
# label -> (mean, lower, upper, flap).  The pairwise-rule anchors and the
# rank-1 expectation in the acceptance suite all come from this set.
MONTHLY_REFERENCE = {
    "January": (945.0, 746.0, 1233.0, 2.11),
    "February": (683.0, 562.0, 898.0, 2.52),
    "March": (845.0, 680.0, 1081.0, 2.40),
    "April": (803.0, 659.0, 1037.0, 2.48),
    "May": (1449.0, 1082.0, 2212.0, 1.55),
    "June": (1411.0, 1045.0, 2245.0, 1.49),
    "July": (1519.0, 1128.0, 1944.0, 2.12),
    "August": (1198.0, 861.0, 1745.0, 1.67),
    "September": (1412.0, 1050.0, 1923.0, 1.93),
    "October": (1284.0, 978.0, 1755.0, 1.91),
    "November": (1509.0, 1067.0, 2019.0, 1.89),
    "December": (1029.0, 764.0, 1282.0, 2.39),
}

# Recorded eight-day forecast windows: (date string, predicted, actual).
SOLAPUR_WINDOW = [
    ("2021-06-28", 538.85, 700.0),
    ("2021-06-29", 443.97, 500.0),
    ("2021-06-30", 477.58, 400.0),
    ("2021-07-01", 482.97, 400.0),
    ("2021-07-02", 469.54, 300.0),
    ("2021-07-03", 471.68, 400.0),
    ("2021-07-04", 422.24, 452.0),
    ("2021-07-05", 451.98, 400.0),
]

KOLHAPUR_WINDOW = [
    ("2021-09-17", 4748.04, 5250.0),
    ("2021-09-18", 4918.73, 7000.0),
    ("2021-09-19", 4152.19, 3500.0),
    ("2021-09-20", 4375.35, 5250.0),
    ("2021-09-21", 4700.03, 6300.0),
    ("2021-09-22", 5117.38, 7700.0),
    ("2021-09-23", 4031.60, 5950.0),
    ("2021-09-24", 3187.78, 5250.0),
]


def make_series(values, start=dt.date(2021, 1, 1), market="m", commodity="c",
                dates=None) -> PriceSeries:
    """PriceSeries over consecutive days (or explicit dates) with a clean report."""
    values = [float(v) for v in values]
    if dates is None:
        dates = [start + dt.timedelta(days=i) for i in range(len(values))]
    report = CleaningReport(
        total_in=len(values), kept=len(values), other_series=0,
        nonpositive_dropped=0, duplicates_merged=0,
    )
    return PriceSeries(
        market=market, commodity=commodity,
        entries=tuple(zip(dates, values)), cleaning_report=report,
    )


def reference_summary(label: str, n_years: int = 11) -> FlapSummary:
    mean, lower, upper, flap = MONTHLY_REFERENCE[label]
    return FlapSummary(
        period_label=label, n_years=n_years, mean=mean, sd=mean / flap,
        ci=ConfidenceInterval(lower=lower, upper=upper, level=0.95),
    )


def reference_summaries() -> list[FlapSummary]:
    return [reference_summary(label) for label in MONTHLY_REFERENCE]


def window_points(window):
    from favorit.arima import ForecastPoint

    return [
        ForecastPoint(date=dt.date.fromisoformat(day), predicted=pred)
        for day, pred, _ in window
    ]


def window_actuals(window):
    return [(dt.date.fromisoformat(day), actual) for day, _, actual in window]


@pytest.fixture(scope="session")
def sample_dataset_dir():
    """Checked-in sample dataset (two series) used by CLI and service tests."""
    from pathlib import Path

    path = Path(__file__).resolve().parent.parent / "data" / "sample" / "dataset"
    if not path.exists():
        pytest.skip("sample dataset not built; run scripts/make_sample_data.py")
    return path
