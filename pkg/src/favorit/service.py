"""Read-only HTTP JSON API over one immutable dataset snapshot.

Every endpoint recomputes through the same library calls and the same
payload builders as the CLI, then serializes with the same canonical JSON
encoder, so a response body is byte-identical to the equivalent library
result.  The bootstrap seed and replicate count are fixed per server
instance; the only mutable state is a forecast cache keyed by the request
parameters that influence the numbers.

Error bodies all share one shape:
``{"error": {"status": ..., "code": ..., "message": ...}}``.
"""

from __future__ import annotations

import datetime as dt
import threading
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import reports
from .arima import forecast_h, select_order
from .bootstrap import DEFAULT_B, DEFAULT_LEVEL, summarize_panel
from .dataset import Dataset, load_dataset
from .errors import (
    DataError,
    EmptySeriesError,
    FitError,
    GapTooLargeError,
    InsufficientHistoryError,
    InsufficientYearsError,
    UnknownPeriodError,
    UnknownSeriesError,
)
from .market_data import WindowSpec, aggregate_panel, slice_recent
from .prim import (
    DEFAULT_FIT_LEN,
    DEFAULT_HORIZON,
    DEFAULT_STEP,
    recommend_market_day,
    rolling_backtest,
)
from .ranking import advise_shift, rank_periods
from .reports import canonical_json, metadata_block

_ERROR_STATUS: list[tuple[type, int, str]] = [
    (UnknownSeriesError, 404, "not_found"),
    (UnknownPeriodError, 404, "not_found"),
    (EmptySeriesError, 404, "not_found"),
    (GapTooLargeError, 409, "gap_too_large"),
    (InsufficientHistoryError, 409, "insufficient_history"),
    (InsufficientYearsError, 409, "insufficient_years"),
    (FitError, 409, "fit_failed"),
    (DataError, 409, "insufficient_data"),
]


class AdviseRequest(BaseModel):
    market: str
    commodity: str
    current_period: str
    granularity: str = "month"
    window_start: str | None = None
    weeks: int | None = None
    max_distance: int | None = None


class BacktestRequest(BaseModel):
    market: str
    commodity: str
    fit_len: int = DEFAULT_FIT_LEN
    horizon: int = DEFAULT_HORIZON
    step: int = DEFAULT_STEP


def _error_response(status: int, code: str, message: str) -> Response:
    body = {"error": {"status": status, "code": code, "message": message}}
    return Response(
        content=canonical_json(body), status_code=status, media_type="application/json"
    )


def _json(payload: dict) -> Response:
    return Response(content=canonical_json(payload), media_type="application/json")


def create_app(
    dataset: Dataset | str | Path,
    seed: int = 0,
    b: int = DEFAULT_B,
    level: float = DEFAULT_LEVEL,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the API over a dataset directory or an in-memory dataset."""
    if not isinstance(dataset, Dataset):
        dataset = load_dataset(dataset)
    data: Dataset = dataset

    app = FastAPI(title="favorit", docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    forecast_cache: dict[tuple, bytes] = {}
    cache_lock = threading.Lock()

    def _meta(**inputs) -> dict:
        return metadata_block(seed=seed, dataset_version=data.version, B=b, **inputs)

    @app.exception_handler(DataError)
    async def _data_error(_request: Request, exc: DataError) -> Response:
        for klass, status, code in _ERROR_STATUS:
            if isinstance(exc, klass):
                return _error_response(status, code, str(exc))
        return _error_response(409, "insufficient_data", str(exc))

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError) -> Response:
        return _error_response(422, "invalid_parameter", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError) -> Response:
        first = exc.errors()[0] if exc.errors() else {}
        location = ".".join(str(part) for part in first.get("loc", ()))
        message = f"{location}: {first.get('msg', 'invalid request')}"
        return _error_response(422, "invalid_parameter", message)

    def _window_spec(granularity: str, window_start: str | None, weeks: int | None):
        if granularity == "month":
            return None
        if granularity != "week":
            raise ValueError(f"granularity must be month or week, got {granularity!r}")
        if not window_start or not weeks:
            raise ValueError("week granularity requires window_start and weeks")
        return WindowSpec.parse(window_start, weeks)

    def _summaries(market, commodity, granularity, window_start, weeks, required=False):
        series = data.get(market, commodity)
        spec = _window_spec(granularity, window_start, weeks)
        panel = aggregate_panel(series, granularity, spec)
        summaries = summarize_panel(panel, b=b, seed=seed, level=level)
        if required and not summaries:
            raise InsufficientYearsError(
                f"{market}/{commodity}: no period has two or more years with data"
            )
        return summaries

    @app.get("/v1/markets")
    def markets() -> Response:
        return _json({"markets": data.markets(), "metadata": _meta()})

    @app.get("/v1/commodities")
    def commodities(market: str = Query(...)) -> Response:
        return _json(
            {
                "commodities": data.commodities(market),
                "market": market,
                "metadata": _meta(market=market),
            }
        )

    @app.get("/v1/intervals")
    def intervals(
        market: str = Query(...),
        commodity: str = Query(...),
        granularity: str = "month",
        window_start: str | None = None,
        weeks: int | None = None,
    ) -> Response:
        summaries = _summaries(market, commodity, granularity, window_start, weeks)
        meta = _meta(
            market=market, commodity=commodity, granularity=granularity,
            window_start=window_start, weeks=weeks,
        )
        return _json(reports.intervals_payload(summaries, meta))

    @app.get("/v1/ranking")
    def ranking(
        market: str = Query(...),
        commodity: str = Query(...),
        granularity: str = "month",
        window_start: str | None = None,
        weeks: int | None = None,
    ) -> Response:
        summaries = _summaries(
            market, commodity, granularity, window_start, weeks, required=True
        )
        ranked = rank_periods(summaries)
        meta = _meta(
            market=market, commodity=commodity, granularity=granularity,
            window_start=window_start, weeks=weeks,
        )
        return _json(reports.ranking_payload(ranked, meta))

    @app.post("/v1/advise")
    def advise(body: AdviseRequest) -> Response:
        summaries = _summaries(
            body.market, body.commodity, body.granularity, body.window_start,
            body.weeks, required=True,
        )
        ranked = rank_periods(summaries)
        advice = advise_shift(ranked, body.current_period, body.max_distance)
        meta = _meta(
            market=body.market, commodity=body.commodity, granularity=body.granularity,
            window_start=body.window_start, weeks=body.weeks,
            current=body.current_period, max_distance=body.max_distance,
        )
        return _json(reports.advice_payload(advice, meta))

    @app.get("/v1/forecast")
    def forecast(
        market: str = Query(...),
        commodity: str = Query(...),
        end: str | None = None,
        h: int = DEFAULT_HORIZON,
        fit_len: int = DEFAULT_FIT_LEN,
    ) -> Response:
        if h < 1 or fit_len < 1:
            raise ValueError("h and fit_len must be >= 1")
        series = data.get(market, commodity)
        if end is None:
            end_date = series.end_date
        else:
            try:
                end_date = dt.date.fromisoformat(end)
            except ValueError:
                raise ValueError(f"end must be YYYY-MM-DD, got {end!r}")

        key = (market, commodity, end_date.isoformat(), h, fit_len, seed)
        with cache_lock:
            cached = forecast_cache.get(key)
        if cached is not None:
            return Response(content=cached, media_type="application/json")

        window = slice_recent(series, end_date, fit_len)
        selection = select_order(window.values, seed=seed)
        points = forecast_h(selection.model, h, end_date + dt.timedelta(days=1))
        recommended = recommend_market_day(points)
        cache_key = "|".join(str(part) for part in key)
        meta = _meta(
            market=market, commodity=commodity, end=end_date.isoformat(),
            h=h, fit_len=fit_len, cache_key=cache_key,
        )
        body = canonical_json(
            reports.forecast_payload(points, recommended, selection.model, meta)
        ).encode("utf-8")
        with cache_lock:
            body = forecast_cache.setdefault(key, body)
        return Response(content=body, media_type="application/json")

    @app.post("/v1/backtest")
    def backtest(body: BacktestRequest) -> Response:
        if body.fit_len < 1 or body.horizon < 1 or body.step < 1:
            raise ValueError("fit_len, horizon and step must be >= 1")
        series = data.get(body.market, body.commodity)
        report = rolling_backtest(
            series, fit_len=body.fit_len, horizon=body.horizon, step=body.step, seed=seed
        )
        meta = _meta(
            market=body.market, commodity=body.commodity,
            fit_len=body.fit_len, horizon=body.horizon, step=body.step,
        )
        return _json(reports.backtest_payload(report, meta))

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
