"""Command-line entry point.

Subcommands wire ingestion, interval summaries, ranking, shift advice,
forecasting, and backtesting into scriptable outputs.  JSON output is
canonical (sorted keys, no timestamps), so a fixed config and seed give
byte-identical bytes; `report` additionally renders charts to files next
to the delimited output.

Exit codes: 0 success, 1 usage error, 2 data or fit error.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .arima import forecast_h, select_order
from .bootstrap import DEFAULT_B, summarize_panel
from .dataset import Dataset, load_dataset, save_dataset
from .errors import FavoritError
from .market_data import (
    CsvSchema,
    Granularity,
    WindowSpec,
    aggregate_panel,
    clean_series,
    extremes_by_year,
    parse_price_csv,
    slice_recent,
)
from .prim import (
    DEFAULT_FIT_LEN,
    DEFAULT_HORIZON,
    DEFAULT_STEP,
    evaluate_prim,
    recommend_market_day,
    rolling_backtest,
)
from .ranking import advise_shift, rank_periods
from . import reports
from .reports import canonical_json, metadata_block

DATA_DIR_ENV = "FAVORIT_DATA_DIR"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this program reserves 2 for data errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    """Resolved inputs of one invocation, echoed in output metadata."""

    dataset: str | None = None
    market: str | None = None
    commodity: str | None = None
    granularity: str | None = None
    window_start: str | None = None
    weeks: int | None = None
    b: int | None = None
    seed: int = 0
    fit_len: int | None = None
    horizon: int | None = None
    step: int | None = None
    end: str | None = None
    current: str | None = None
    max_distance: int | None = None

    def metadata(self, dataset_version: str | None = None) -> dict:
        return metadata_block(
            seed=self.seed,
            dataset_version=dataset_version,
            dataset=self.dataset,
            market=self.market,
            commodity=self.commodity,
            granularity=self.granularity,
            window_start=self.window_start,
            weeks=self.weeks,
            B=self.b,
            fit_len=self.fit_len,
            horizon=self.horizon,
            step=self.step,
            end=self.end,
            current=self.current,
            max_distance=self.max_distance,
        )


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {raw!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {raw!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _date_arg(raw: str) -> dt.date:
    try:
        return dt.date.fromisoformat(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a YYYY-MM-DD date: {raw!r}")


def _window_start_arg(raw: str) -> str:
    try:
        WindowSpec.parse(raw, weeks=1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return raw


def _dataset_flag(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument(
        "--dataset",
        default=os.environ.get(DATA_DIR_ENV),
        help=f"dataset directory (default: ${DATA_DIR_ENV})",
        metavar="PATH",
        required=required and DATA_DIR_ENV not in os.environ,
    )


def _series_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--market", required=True)
    p.add_argument("--commodity", required=True)


def _panel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--granularity", choices=["month", "week"], default="month")
    p.add_argument("--window-start", type=_window_start_arg, metavar="MM-DD",
                   help="first day of week 1 (week granularity)")
    p.add_argument("--weeks", type=_positive_int, default=None,
                   help="window length in weeks (week granularity)")
    p.add_argument("--B", type=_positive_int, default=DEFAULT_B,
                   help=f"bootstrap replicates (default {DEFAULT_B})")


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv", "table"], default="table")
    p.add_argument("--out", metavar="PATH", help="write output to a file instead of stdout")
    p.add_argument("--seed", type=_nonnegative_int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="favorit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"favorit {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("ingest", help="clean a raw price CSV into a dataset directory")
    p.add_argument("--input", required=True, metavar="CSV")
    p.add_argument("--dataset", required=True, metavar="PATH", help="output dataset directory")
    p.add_argument("--market", help="keep only this market")
    p.add_argument("--commodity", help="keep only this commodity")
    p.add_argument("--source", default="", help="free-form provenance note for the manifest")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("intervals", help="per-period mean and bootstrap interval")
    _dataset_flag(p); _series_flags(p); _panel_flags(p); _output_flags(p)
    p.set_defaults(func=cmd_intervals)

    p = sub.add_parser("rank", help="rank periods by dominance rules and FLAP")
    _dataset_flag(p); _series_flags(p); _panel_flags(p); _output_flags(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("advise", help="suggest better-ranked periods near the current plan")
    _dataset_flag(p); _series_flags(p); _panel_flags(p); _output_flags(p)
    p.add_argument("--current", required=True, metavar="PERIOD",
                   help="currently planned period, e.g. July or W3")
    p.add_argument("--max-distance", type=_nonnegative_int, default=None,
                   help="ignore suggestions farther than this many periods")
    p.set_defaults(func=cmd_advise)

    p = sub.add_parser("extremes", help="per-year cheapest and dearest months")
    _dataset_flag(p); _series_flags(p); _output_flags(p)
    p.set_defaults(func=cmd_extremes)

    p = sub.add_parser("forecast", help="short-horizon daily forecast and market day")
    _dataset_flag(p); _series_flags(p); _output_flags(p)
    p.add_argument("--end", type=_date_arg, default=None,
                   help="last history day YYYY-MM-DD (default: series end)")
    p.add_argument("--fit-len", type=_positive_int, default=DEFAULT_FIT_LEN)
    p.add_argument("--horizon", type=_positive_int, default=DEFAULT_HORIZON)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("backtest", help="rolling fit-forecast-evaluate over the series")
    _dataset_flag(p); _series_flags(p); _output_flags(p)
    p.add_argument("--fit-len", type=_positive_int, default=DEFAULT_FIT_LEN)
    p.add_argument("--horizon", type=_positive_int, default=DEFAULT_HORIZON)
    p.add_argument("--step", type=_positive_int, default=DEFAULT_STEP)
    p.set_defaults(func=cmd_backtest)

    p = sub.add_parser("prim-demo", help="score a recorded predicted/actual window")
    p.add_argument("--window", required=True, metavar="CSV",
                   help="CSV with columns date,predicted,actual (dates DD-MM-YYYY)")
    _output_flags(p)
    p.set_defaults(func=cmd_prim_demo)

    p = sub.add_parser("report", help="write interval chart, ranking CSV, and optional forecast chart")
    _dataset_flag(p); _series_flags(p); _panel_flags(p)
    p.add_argument("--seed", type=_nonnegative_int, default=0)
    p.add_argument("--end", type=_date_arg, default=None,
                   help="also render a forecast anchored at this date")
    p.add_argument("--fit-len", type=_positive_int, default=DEFAULT_FIT_LEN)
    p.add_argument("--horizon", type=_positive_int, default=DEFAULT_HORIZON)
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP API")
    _dataset_flag(p)
    p.add_argument("--config", default=None, metavar="JSON",
                   help="JSON file with listen/seed/B/static defaults; flags win")
    p.add_argument("--listen", default=None, metavar="HOST:PORT")
    p.add_argument("--seed", type=_nonnegative_int, default=None)
    p.add_argument("--B", type=_positive_int, default=None)
    p.add_argument("--static", default=None, metavar="DIR",
                   help="also serve this directory at / (built UI)")
    p.set_defaults(func=cmd_serve)

    return parser


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------


def _emit(args, payload: dict, rows: list[dict], columns: list[str], extra: str = "") -> int:
    if args.format == "json":
        text = canonical_json(payload)
    elif args.format == "csv":
        text = reports.rows_to_csv(rows, columns)
    else:
        text = reports.rows_to_table(rows, columns)
        if extra:
            text += extra
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _load(args) -> Dataset:
    return load_dataset(args.dataset)


def _window_spec(args) -> WindowSpec | None:
    if args.granularity != "week":
        return None
    if not args.window_start or not args.weeks:
        raise argparse.ArgumentTypeError(
            "week granularity requires --window-start and --weeks"
        )
    return WindowSpec.parse(args.window_start, args.weeks)


def _panel_summaries(args, dataset: Dataset):
    series = dataset.get(args.market, args.commodity)
    panel = aggregate_panel(series, args.granularity, _window_spec(args))
    return summarize_panel(panel, b=args.B, seed=args.seed)


def _config(args, **overrides) -> RunConfig:
    fields = {}
    for name in RunConfig.__dataclass_fields__:
        arg_name = {"b": "B"}.get(name, name)
        if hasattr(args, arg_name):
            value = getattr(args, arg_name)
            if isinstance(value, dt.date):
                value = value.isoformat()
            fields[name] = value
    fields.update(overrides)
    if "seed" not in fields or fields["seed"] is None:
        fields["seed"] = 0
    return RunConfig(**fields)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_ingest(args) -> int:
    with open(args.input, "rb") as fh:
        records, row_errors = parse_price_csv(fh, CsvSchema())

    pairs = sorted({(r.market, r.commodity) for r in records})
    if args.market:
        pairs = [(m, c) for m, c in pairs if m == args.market]
    if args.commodity:
        pairs = [(m, c) for m, c in pairs if c == args.commodity]
    series = {
        (m, c): clean_series(records, m, c)
        for m, c in pairs
    }
    if not series:
        raise FavoritError("no rows matched the requested market/commodity")

    dataset = Dataset(series, source=args.source)
    save_dataset(dataset, args.dataset)

    payload = {
        "dataset": str(args.dataset),
        "series": {
            f"{m}/{c}": s.cleaning_report.to_dict() for (m, c), s in sorted(series.items())
        },
        "row_errors": [{"line": e.line, "reason": e.reason} for e in row_errors],
        "metadata": metadata_block(seed=0, input=str(args.input)),
    }
    sys.stdout.write(canonical_json(payload))
    return 0


def cmd_intervals(args) -> int:
    dataset = _load(args)
    summaries = _panel_summaries(args, dataset)
    payload = reports.intervals_payload(
        summaries, _config(args).metadata(dataset.version)
    )
    return _emit(args, payload, reports.interval_rows(summaries), reports.INTERVAL_COLUMNS)


def cmd_rank(args) -> int:
    dataset = _load(args)
    summaries = _panel_summaries(args, dataset)
    ranking = rank_periods(summaries)
    payload = reports.ranking_payload(ranking, _config(args).metadata(dataset.version))
    return _emit(args, payload, reports.ranking_rows(ranking), reports.RANKING_COLUMNS)


def cmd_advise(args) -> int:
    dataset = _load(args)
    summaries = _panel_summaries(args, dataset)
    ranking = rank_periods(summaries)
    advice = advise_shift(ranking, args.current, args.max_distance)
    payload = reports.advice_payload(advice, _config(args).metadata(dataset.version))
    rows = [
        {"period": bp.period_label, "rank": bp.rank, "calendar_distance": bp.calendar_distance}
        for bp in advice.better_periods
    ]
    extra = (
        f"stay: current period {advice.current_period} is rank {advice.current_rank}\n"
        if advice.stay
        else f"current period {advice.current_period} is rank {advice.current_rank}\n"
    )
    return _emit(args, payload, rows, ["period", "rank", "calendar_distance"], extra)


def cmd_extremes(args) -> int:
    dataset = _load(args)
    series = dataset.get(args.market, args.commodity)
    panel = aggregate_panel(series, Granularity.MONTH)
    rows = extremes_by_year(panel)
    payload = reports.extremes_payload(rows, _config(args).metadata(dataset.version))
    return _emit(args, payload, reports.extremes_rows(rows), reports.EXTREMES_COLUMNS)


def cmd_forecast(args) -> int:
    dataset = _load(args)
    series = dataset.get(args.market, args.commodity)
    end = args.end or series.end_date
    window = slice_recent(series, end, args.fit_len)
    selection = select_order(window.values, seed=args.seed)
    points = forecast_h(selection.model, args.horizon, end + dt.timedelta(days=1))
    recommended = recommend_market_day(points)
    payload = reports.forecast_payload(
        points, recommended, selection.model,
        _config(args, end=end.isoformat()).metadata(dataset.version),
    )
    extra = f"recommended market day: {recommended.isoformat()}\n"
    return _emit(args, payload, reports.forecast_rows(points), reports.FORECAST_COLUMNS, extra)


def cmd_backtest(args) -> int:
    dataset = _load(args)
    series = dataset.get(args.market, args.commodity)
    report = rolling_backtest(
        series, fit_len=args.fit_len, horizon=args.horizon, step=args.step, seed=args.seed
    )
    payload = reports.backtest_payload(report, _config(args).metadata(dataset.version))
    extra = (
        f"windows: {report.count}  skipped: {len(report.skipped)}  "
        f"mean gain: {report.mean_gain}  success rate: {report.success_rate}\n"
    )
    return _emit(args, payload, reports.backtest_table_rows(report), reports.BACKTEST_COLUMNS, extra)


def _read_window_csv(path: str) -> list[tuple[dt.date, float, float]]:
    import csv as _csv

    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = _csv.DictReader(fh)
        if reader.fieldnames is None or not {"date", "predicted", "actual"} <= set(
            name.strip().lower() for name in reader.fieldnames
        ):
            raise FavoritError("demo CSV needs columns: date, predicted, actual")
        for row in reader:
            row = {k.strip().lower(): v for k, v in row.items() if k}
            try:
                day = dt.datetime.strptime(row["date"].strip(), "%d-%m-%Y").date()
                rows.append((day, float(row["predicted"]), float(row["actual"])))
            except (KeyError, ValueError, AttributeError) as exc:
                raise FavoritError(f"bad demo row {row!r}: {exc}") from exc
    if not rows:
        raise FavoritError("demo CSV has no data rows")
    return rows


def cmd_prim_demo(args) -> int:
    from .arima import ForecastPoint

    rows = _read_window_csv(args.window)
    points = [ForecastPoint(date=d, predicted=p) for d, p, _ in rows]
    recommended = recommend_market_day(points)
    predicted = next(p.predicted for p in points if p.date == recommended)
    report = evaluate_prim(recommended, [(d, a) for d, _, a in rows], predicted=predicted)
    payload = reports.prim_payload(
        report, metadata_block(seed=args.seed, window=str(args.window))
    )
    table_rows = [
        {"date": d.isoformat(), "predicted": p, "actual": a} for d, p, a in rows
    ]
    extra = (
        f"recommended {report.recommended_date.isoformat()}: realized {report.realized:.2f}, "
        f"benchmark {report.benchmark:.2f}, gain {report.gain:+.2f} "
        f"({'success' if report.success else 'no gain'})\n"
    )
    return _emit(args, payload, table_rows, ["date", "predicted", "actual"], extra)


def cmd_report(args) -> int:
    from . import figures

    dataset = _load(args)
    series = dataset.get(args.market, args.commodity)
    summaries = _panel_summaries(args, dataset)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    title = f"{args.commodity} at {args.market}"

    written = {}
    skipped = {}
    if summaries:
        ranking = rank_periods(summaries)
        intervals_csv = out_dir / "intervals.csv"
        intervals_csv.write_text(
            reports.rows_to_csv(reports.interval_rows(summaries), reports.INTERVAL_COLUMNS),
            encoding="utf-8",
        )
        written["intervals_csv"] = str(intervals_csv)

        ranking_csv = out_dir / "ranking.csv"
        ranking_csv.write_text(
            reports.rows_to_csv(reports.ranking_rows(ranking), reports.RANKING_COLUMNS),
            encoding="utf-8",
        )
        written["ranking_csv"] = str(ranking_csv)

        chart = figures.interval_chart(summaries, out_dir / "intervals.png", title=title)
        written["intervals_png"] = str(chart)
    else:
        skipped["seasonal"] = "no period has two or more years with data"

    if args.end is not None:
        window = slice_recent(series, args.end, args.fit_len)
        selection = select_order(window.values, seed=args.seed)
        points = forecast_h(selection.model, args.horizon, args.end + dt.timedelta(days=1))
        recommended = recommend_market_day(points)
        forecast_csv = out_dir / "forecast.csv"
        forecast_csv.write_text(
            reports.rows_to_csv(reports.forecast_rows(points), reports.FORECAST_COLUMNS),
            encoding="utf-8",
        )
        written["forecast_csv"] = str(forecast_csv)
        chart = figures.forecast_chart(
            points, recommended, out_dir / "forecast.png", title=title
        )
        written["forecast_png"] = str(chart)

    payload = {"written": written, "metadata": _config(args).metadata(dataset.version)}
    if skipped:
        payload["skipped"] = skipped
    sys.stdout.write(canonical_json(payload))
    return 0


def serve_settings(args) -> dict:
    """Merge serve defaults, optional JSON config file, and explicit flags."""
    settings = {"listen": "127.0.0.1:8000", "seed": 0, "B": DEFAULT_B, "static": None}
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except json.JSONDecodeError as exc:
            raise argparse.ArgumentTypeError(f"bad config file {args.config}: {exc}")
        if not isinstance(loaded, dict):
            raise argparse.ArgumentTypeError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(settings))
        if unknown:
            raise argparse.ArgumentTypeError(f"unknown config keys: {', '.join(unknown)}")
        settings.update(loaded)
    for key in ("listen", "seed", "B", "static"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    if not isinstance(settings["seed"], int) or settings["seed"] < 0:
        raise argparse.ArgumentTypeError("seed must be a nonnegative integer")
    if not isinstance(settings["B"], int) or settings["B"] <= 0:
        raise argparse.ArgumentTypeError("B must be a positive integer")
    host, _, port = str(settings["listen"]).rpartition(":")
    if not host or not port.isdigit():
        raise argparse.ArgumentTypeError(
            f"listen address must be HOST:PORT, got {settings['listen']!r}"
        )
    settings["host"] = host
    settings["port"] = int(port)
    return settings


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    settings = serve_settings(args)
    app = create_app(
        args.dataset,
        seed=settings["seed"],
        b=settings["B"],
        static_dir=settings["static"],
    )
    uvicorn.run(app, host=settings["host"], port=settings["port"], log_level="info")
    return 0


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        print(f"favorit: error: {exc}", file=sys.stderr)
        return 1
    except (FavoritError, ValueError) as exc:
        print(f"favorit: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"favorit: error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
