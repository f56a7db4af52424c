"""Payload builders and the delimited/table/JSON renderings."""

import datetime as dt
import json
import math

import numpy as np
import pytest

from favorit import arima
from favorit.bootstrap import summarize_period
from favorit.prim import BacktestReport, evaluate_prim
from favorit.ranking import advise_shift, rank_periods
from favorit.market_data import YearExtremes
from favorit.reports import (
    BACKTEST_COLUMNS,
    EXTREMES_COLUMNS,
    FORECAST_COLUMNS,
    INTERVAL_COLUMNS,
    RANKING_COLUMNS,
    advice_payload,
    backtest_payload,
    canonical_json,
    extremes_payload,
    extremes_rows,
    forecast_payload,
    forecast_rows,
    interval_rows,
    intervals_payload,
    metadata_block,
    prim_payload,
    ranking_payload,
    ranking_rows,
    rows_to_csv,
    rows_to_table,
    summary_dict,
)

from conftest import SOLAPUR_WINDOW, reference_summaries, window_actuals


class TestCanonicalJson:
    def test_sorted_keys_and_trailing_newline(self):
        text = canonical_json({"b": 1, "a": 2})
        assert text == '{\n  "a": 2,\n  "b": 1\n}\n'

    def test_insertion_order_irrelevant(self):
        one = canonical_json({"x": 1, "y": {"b": 2, "a": 3}})
        two = canonical_json({"y": {"a": 3, "b": 2}, "x": 1})
        assert one == two

    def test_round_trips_through_json(self):
        payload = {"n": 12, "values": [1.5, None, "text"], "nested": {"k": True}}
        assert json.loads(canonical_json(payload)) == payload

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            canonical_json({"x": float("nan")})
        with pytest.raises(ValueError):
            canonical_json({"x": float("inf")})

    def test_unicode_kept_verbatim(self):
        assert '"Solapur"' in canonical_json({"market": "Solapur"})


class TestMetadataBlock:
    def test_minimal(self):
        meta = metadata_block()
        assert set(meta) == {"tool_version", "inputs"}
        assert meta["inputs"] == {}

    def test_inputs_sorted_and_none_dropped(self):
        meta = metadata_block(seed=3, dataset_version="abc", zeta=1, alpha=2, skip=None)
        assert meta["seed"] == 3
        assert meta["dataset_version"] == "abc"
        assert list(meta["inputs"]) == ["alpha", "zeta"]
        assert "skip" not in meta["inputs"]


class TestSummaryDict:
    def test_fields(self):
        d = summary_dict(summarize_period("July", [10.0, 12.0, 14.0], b=500, seed=0))
        assert set(d) == {"period", "n_years", "mean", "sd", "lower", "upper", "level", "flap"}
        assert d["period"] == "July" and d["n_years"] == 3
        assert d["flap"] == pytest.approx(d["mean"] / d["sd"])

    def test_infinite_flap_serialized_as_null(self):
        d = summary_dict(summarize_period("May", [7.0, 7.0, 7.0], b=500, seed=0))
        assert d["sd"] == 0.0
        assert d["flap"] is None
        # The payload stays encodable.
        canonical_json({"intervals": [d]})


class TestPayloadShapes:
    def test_intervals(self):
        summaries = reference_summaries()
        payload = intervals_payload(summaries, metadata_block(seed=0))
        assert set(payload) == {"intervals", "metadata"}
        assert len(payload["intervals"]) == 12
        canonical_json(payload)

    def test_ranking(self):
        ranking = rank_periods(reference_summaries())
        payload = ranking_payload(ranking, metadata_block(seed=0))
        assert set(payload) == {"ranking", "dominance", "metadata"}
        assert payload["ranking"][0]["rank"] == 1
        assert payload["ranking"][0]["period"] == "July"
        rules = {edge["rule"] for edge in payload["dominance"]}
        assert rules <= {1, 2, 3}
        canonical_json(payload)

    def test_advice(self):
        ranking = rank_periods(reference_summaries())
        advice = advise_shift(ranking, "June")
        payload = advice_payload(advice, metadata_block())
        assert payload["current_period"] == "June"
        assert payload["stay"] is False
        first = payload["better_periods"][0]
        assert set(first) == {"period", "rank", "calendar_distance"}
        canonical_json(payload)

    def test_forecast(self):
        values = np.cumsum(np.random.default_rng(3).normal(0.0, 1.0, 80)) + 100.0
        model = arima.fit_arima(values, arima.ArimaOrder(0, 1, 0))
        points = arima.forecast_h(model, 4, dt.date(2021, 6, 28))
        payload = forecast_payload(points, points[0].date, model, metadata_block(seed=0))
        assert set(payload) == {"forecasts", "recommended_date", "model", "metadata"}
        assert payload["recommended_date"] == "2021-06-28"
        assert len(payload["forecasts"]) == 4
        assert payload["model"]["order"] == {"p": 0, "d": 1, "q": 0}
        canonical_json(payload)

    def test_forecast_without_recommendation(self):
        values = np.cumsum(np.random.default_rng(3).normal(0.0, 1.0, 80)) + 100.0
        model = arima.fit_arima(values, arima.ArimaOrder(0, 1, 0))
        payload = forecast_payload([], None, model, metadata_block())
        assert payload["recommended_date"] is None

    def test_prim_and_backtest(self):
        report = evaluate_prim(dt.date(2021, 6, 28), window_actuals(SOLAPUR_WINDOW))
        payload = prim_payload(report, metadata_block())
        assert set(payload) == {"prim", "metadata"}
        assert payload["prim"]["gain"] == pytest.approx(256.0, abs=0.5)

        empty = BacktestReport(windows=(), skipped=(), fit_len=100, horizon=8, step=8)
        bt = backtest_payload(empty, metadata_block())
        assert set(bt) == {"backtest", "metadata"}
        canonical_json(bt)

    def test_extremes(self):
        rows = [
            YearExtremes(year=2011, min_period="February", min_price=80.0,
                         max_period="July", max_price=240.0)
        ]
        payload = extremes_payload(rows, metadata_block())
        assert payload["extremes"][0]["ratio"] == 3.0
        assert extremes_rows(rows)[0]["year"] == 2011
        canonical_json(payload)


class TestDelimitedOutput:
    ROWS = [
        {"period": "July", "flap": 2.12, "extra": "dropped"},
        {"period": "May", "flap": 1.55},
    ]

    def test_header_and_rows(self):
        text = rows_to_csv(self.ROWS, ["period", "flap"])
        assert text == "period,flap\nJuly,2.12\nMay,1.55\n"

    def test_extra_keys_ignored_missing_blank(self):
        text = rows_to_csv([{"a": 1}], ["a", "b"])
        assert text == "a,b\n1,\n"

    def test_empty_rows_still_emit_header(self):
        assert rows_to_csv([], ["x", "y"]) == "x,y\n"

    def test_interval_rows_match_columns(self):
        rows = interval_rows(reference_summaries())
        assert list(rows[0]) == INTERVAL_COLUMNS
        text = rows_to_csv(rows, INTERVAL_COLUMNS)
        assert text.splitlines()[0] == ",".join(INTERVAL_COLUMNS)

    def test_ranking_rows_match_columns(self):
        rows = ranking_rows(rank_periods(reference_summaries()))
        assert list(rows[0]) == RANKING_COLUMNS
        assert rows[0]["rank"] == 1 and rows[0]["period"] == "July"

    def test_forecast_rows(self):
        values = np.cumsum(np.random.default_rng(3).normal(0.0, 1.0, 80)) + 100.0
        model = arima.fit_arima(values, arima.ArimaOrder(0, 1, 0))
        points = arima.forecast_h(model, 2, dt.date(2021, 6, 28))
        rows = forecast_rows(points)
        assert list(rows[0]) == FORECAST_COLUMNS
        assert rows[0]["date"] == "2021-06-28"


class TestTableOutput:
    def test_alignment_and_float_format(self):
        text = rows_to_table(
            [{"period": "July", "flap": 2.123456}, {"period": "May", "flap": None}],
            ["period", "flap"],
        )
        lines = text.splitlines()
        assert lines[0].split() == ["period", "flap"]
        assert set(lines[1]) <= {"-", " "}
        assert "2.12" in lines[2]
        assert lines[3].split() == ["May", "-"]
        assert text.endswith("\n")

    def test_empty_rows(self):
        text = rows_to_table([], ["alpha", "b"])
        lines = text.splitlines()
        assert lines[0].startswith("alpha")
        assert len(lines) == 2

    def test_wide_value_widens_column(self):
        text = rows_to_table([{"a": "longvalue", "b": 1}], ["a", "b"])
        header, dashes, row = text.splitlines()
        assert header.index("b") == row.index("1")

    def test_backtest_columns_render(self):
        report = BacktestReport(windows=(), skipped=(), fit_len=100, horizon=8, step=8)
        from favorit.reports import backtest_table_rows

        text = rows_to_table(backtest_table_rows(report), BACKTEST_COLUMNS)
        assert "recommended_date" in text.splitlines()[0]
