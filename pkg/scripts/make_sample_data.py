"""Regenerate the synthetic sample data shipped under data/.

Two series are produced.  A monthly-texture tomato series (Satara) follows
a seasonal template with higher, more volatile monsoon prices; each month's
eleven yearly means hit the template's mean and sd exactly, via a fixed
zero-mean, unit-sample-sd year pattern.  A daily coriander series (Solapur)
is a seeded sinusoid-plus-noise path with a few short reporting gaps, long
enough for forecasting and a small rolling backtest.

Also writes the two recorded demo windows (date, predicted, actual) used by
the prim-demo subcommand and the UI fixtures.

Run from the repository root:  python3 scripts/make_sample_data.py
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
SAMPLE_DIR = ROOT / "data" / "sample"
DEMO_DIR = ROOT / "data" / "demo"

YEARS = list(range(2011, 2022))
# Zero mean, sample sd exactly 1 over 11 years.
YEAR_PATTERN = [1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 0]

# (month, mean, flap): yearly-mean level and mean/sd ratio per month.
MONTH_TEMPLATE = [
    (1, 945.0, 2.11),
    (2, 683.0, 2.52),
    (3, 845.0, 2.40),
    (4, 803.0, 2.48),
    (5, 1449.0, 1.55),
    (6, 1411.0, 1.49),
    (7, 1519.0, 2.12),
    (8, 1198.0, 1.67),
    (9, 1412.0, 1.93),
    (10, 1284.0, 1.91),
    (11, 1509.0, 1.89),
    (12, 1029.0, 2.39),
]

DAILY_START = dt.date(2021, 1, 1)
DAILY_END = dt.date(2021, 6, 27)
DAILY_GAPS = {dt.date(2021, 2, 14), dt.date(2021, 3, 21), dt.date(2021, 3, 22),
              dt.date(2021, 5, 9)}

SOLAPUR_WINDOW = [
    ("28-06-2021", 538.85, 700),
    ("29-06-2021", 443.97, 500),
    ("30-06-2021", 477.58, 400),
    ("01-07-2021", 482.97, 400),
    ("02-07-2021", 469.54, 300),
    ("03-07-2021", 471.68, 400),
    ("04-07-2021", 422.24, 452),
    ("05-07-2021", 451.98, 400),
]

KOLHAPUR_WINDOW = [
    ("17-09-2021", 4748.04, 5250),
    ("18-09-2021", 4918.73, 7000),
    ("19-09-2021", 4152.19, 3500),
    ("20-09-2021", 4375.35, 5250),
    ("21-09-2021", 4700.03, 6300),
    ("22-09-2021", 5117.38, 7700),
    ("23-09-2021", 4031.60, 5950),
    ("24-09-2021", 3187.78, 5250),
]


def monthly_rows() -> list[dict]:
    rows = []
    for year, z in zip(YEARS, YEAR_PATTERN):
        for month, mean, flap in MONTH_TEMPLATE:
            sd = mean / flap
            target = mean + sd * z
            # Two market days whose average equals the target exactly.
            for day, offset in ((5, 40.0), (20, -40.0)):
                price = round(target + offset, 2)
                rows.append(
                    {
                        "date": dt.date(year, month, day).strftime("%d-%m-%Y"),
                        "market": "Satara",
                        "commodity": "tomato",
                        "min_price": round(price * 0.8, 2),
                        "max_price": round(price * 1.25, 2),
                        "modal_price": price,
                        "arrivals": 40 + (month * 7 + day) % 25,
                    }
                )
    return rows


def daily_rows() -> list[dict]:
    rng = np.random.default_rng(20210101)
    rows = []
    day = DAILY_START
    t = 0
    while day <= DAILY_END:
        if day not in DAILY_GAPS:
            level = 450.0 + 0.15 * t
            seasonal = 60.0 * math.sin(2.0 * math.pi * t / 16.0)
            price = round(level + seasonal + rng.normal(0.0, 15.0), 2)
            rows.append(
                {
                    "date": day.strftime("%d-%m-%Y"),
                    "market": "Solapur",
                    "commodity": "coriander",
                    "min_price": round(price * 0.85, 2),
                    "max_price": round(price * 1.2, 2),
                    "modal_price": price,
                    "arrivals": 8 + t % 9,
                }
            )
        day += dt.timedelta(days=1)
        t += 1
    return rows


def dirty_rows() -> list[dict]:
    """A few malformed rows so ingest demos exercise the row-error report."""
    return [
        {"date": "31-02-2021", "market": "Satara", "commodity": "tomato",
         "min_price": 100, "max_price": 200, "modal_price": 150, "arrivals": 5},
        {"date": "11-04-2021", "market": "Satara", "commodity": "tomato",
         "min_price": 0, "max_price": 0, "modal_price": 0, "arrivals": 3},
    ]


def write_raw_csv(path: Path) -> None:
    rows = monthly_rows() + daily_rows() + dirty_rows()
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=["date", "market", "commodity", "min_price", "max_price",
                        "modal_price", "arrivals"],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(rows)


def write_window(path: Path, window) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "predicted", "actual"])
        writer.writerows(window)


def main() -> None:
    raw = SAMPLE_DIR / "raw_prices.csv"
    write_raw_csv(raw)
    write_window(DEMO_DIR / "solapur_window.csv", SOLAPUR_WINDOW)
    write_window(DEMO_DIR / "kolhapur_window.csv", KOLHAPUR_WINDOW)

    from favorit.cli import run_cli

    code = run_cli(
        [
            "ingest",
            "--input", str(raw),
            "--dataset", str(SAMPLE_DIR / "dataset"),
            "--source", "synthetic sample data (scripts/make_sample_data.py)",
        ]
    )
    if code != 0:
        raise SystemExit(code)


if __name__ == "__main__":
    main()
