"""Record service responses as JSON fixtures for the advisor UI.

Every fixture is a byte-for-byte response body of the API served over
data/sample/dataset (errors included), except the recorded-window
market-day fixture and the flat-forecast fixture, which are built with
the same library payload builders the service uses.  Rerun after
changing the sample data or any payload shape:

    python3 scripts/record_ui_fixtures.py
"""

import csv
import datetime as dt
import sys
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from favorit import reports
from favorit.arima import ArimaOrder, ForecastPoint, fit_arima, forecast_h
from favorit.dataset import Dataset, load_dataset
from favorit.prim import evaluate_prim, recommend_market_day
from favorit.reports import canonical_json, metadata_block
from favorit.service import create_app

FIXTURE_DIR = ROOT / "frontend" / "public" / "fixtures"
DATASET_DIR = ROOT / "data" / "sample" / "dataset"
WINDOW_CSV = ROOT / "data" / "demo" / "solapur_window.csv"
SEED = 0
B = 10_000


def write(name: str, body: bytes) -> None:
    path = FIXTURE_DIR / name
    path.write_bytes(body)
    print(f"wrote {path.relative_to(ROOT)} ({len(body)} bytes)")


def record_service() -> None:
    dataset = load_dataset(DATASET_DIR)
    client = TestClient(create_app(dataset, seed=SEED, b=B))

    write("markets.json", client.get("/v1/markets").content)
    write(
        "commodities_satara.json",
        client.get("/v1/commodities", params={"market": "Satara"}).content,
    )

    seasonal = {"market": "Satara", "commodity": "tomato"}
    write("intervals_satara_tomato.json", client.get("/v1/intervals", params=seasonal).content)
    write("ranking_satara_tomato.json", client.get("/v1/ranking", params=seasonal).content)
    write(
        "advise_july.json",
        client.post("/v1/advise", json={**seasonal, "current_period": "July"}).content,
    )
    write(
        "advise_june.json",
        client.post("/v1/advise", json={**seasonal, "current_period": "June"}).content,
    )

    write(
        "forecast_solapur.json",
        client.get("/v1/forecast", params={
            "market": "Solapur", "commodity": "coriander", "end": "2021-06-27",
        }).content,
    )
    write(
        "intervals_solapur_coriander.json",
        client.get("/v1/intervals", params={
            "market": "Solapur", "commodity": "coriander",
        }).content,
    )
    write(
        "error_insufficient_years.json",
        client.get("/v1/ranking", params={
            "market": "Solapur", "commodity": "coriander",
        }).content,
    )
    write(
        "error_not_found.json",
        client.get("/v1/commodities", params={"market": "Atlantis"}).content,
    )

    # A series with a 6-day hole right after the fitting anchor.
    from favorit.market_data import CleaningReport, PriceSeries

    dates = [dt.date(2021, 1, 1) + dt.timedelta(days=i) for i in range(120)]
    hole = set(range(100, 106))
    entries = tuple((d, 100.0 + i) for i, d in enumerate(dates) if i not in hole)
    series = PriceSeries(
        market="Gappy", commodity="onion", entries=entries,
        cleaning_report=CleaningReport(
            total_in=len(entries), kept=len(entries), other_series=0,
            nonpositive_dropped=0, duplicates_merged=0,
        ),
    )
    gap_client = TestClient(create_app(Dataset({("Gappy", "onion"): series}), seed=SEED, b=B))
    write(
        "error_gap.json",
        gap_client.get("/v1/forecast", params={
            "market": "Gappy", "commodity": "onion", "fit_len": 100,
        }).content,
    )


def record_market_day_window() -> None:
    """Recorded predicted/actual window scored by the library."""
    rows = []
    with open(WINDOW_CSV, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            day = dt.datetime.strptime(row["date"], "%d-%m-%Y").date()
            rows.append((day, float(row["predicted"]), float(row["actual"])))

    points = [ForecastPoint(date=d, predicted=p) for d, p, _ in rows]
    recommended = recommend_market_day(points)
    predicted = next(p.predicted for p in points if p.date == recommended)
    report = evaluate_prim(recommended, [(d, a) for d, _, a in rows], predicted=predicted)

    payload = {
        "forecasts": [p.to_dict() for p in points],
        "recommended_date": recommended.isoformat(),
        "actuals": [{"date": d.isoformat(), "actual": a} for d, _, a in rows],
        "prim": report.to_dict(),
        "metadata": metadata_block(seed=SEED, window=str(WINDOW_CSV.relative_to(ROOT))),
    }
    write("market_day_solapur.json", canonical_json(payload).encode("utf-8"))


def record_flat_forecast() -> None:
    """Pure random walk: the one-step model forecasts flat at the last level."""
    walk = np.cumsum(np.random.default_rng(3).normal(0.0, 5.0, 120)) + 450.0
    model = fit_arima(walk, ArimaOrder(0, 1, 0))
    points = forecast_h(model, 8, dt.date(2021, 6, 28))
    payload = reports.forecast_payload(
        points, recommend_market_day(points), model, metadata_block(seed=SEED)
    )
    write("forecast_flat.json", canonical_json(payload).encode("utf-8"))


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    record_service()
    record_market_day_window()
    record_flat_forecast()


if __name__ == "__main__":
    main()
