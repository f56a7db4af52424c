"""Ingestion, cleaning, and aggregation of daily wholesale price records.

The canonical flow is ``parse_price_csv`` -> ``clean_series`` ->
``aggregate_panel`` / ``slice_recent``.  Everything downstream (bootstrap
intervals, ranking, forecasting) consumes the containers defined here and
never touches raw CSV rows again.
"""

from __future__ import annotations

import calendar
import csv
import io
from dataclasses import dataclass, field
from datetime import date, timedelta
from enum import Enum

import numpy as np

from .errors import (
    EmptySeriesError,
    GapTooLargeError,
    InsufficientHistoryError,
    SchemaError,
)

MONTH_LABELS = tuple(calendar.month_name[1:])  # "January" .. "December"

#: Columns of the input CSV contract.  The first four of MANDATORY_COLUMNS
#: must be present in the header; the remaining ones may be absent or empty.
ALL_COLUMNS = ("date", "market", "commodity", "min_price", "max_price", "modal_price", "arrivals")
MANDATORY_COLUMNS = ("date", "market", "commodity", "modal_price")

#: Longest run of missing calendar days that ``slice_recent`` forward-fills.
MAX_FILL_GAP_DAYS = 3


@dataclass(frozen=True)
class CsvSchema:
    """Declares how the input CSV is to be read.

    ``date_format`` is a ``strptime`` pattern; the default matches the
    DD-MM-YYYY convention of agmarknet-style exports.
    """

    date_format: str = "%d-%m-%Y"
    delimiter: str = ","


@dataclass(frozen=True)
class PriceRecord:
    """One market/commodity/day observation, prices in Rs per quintal."""

    market: str
    commodity: str
    date: date
    modal_price: float
    min_price: float | None = None
    max_price: float | None = None
    arrivals: float | None = None

    def __post_init__(self) -> None:
        if not self.modal_price > 0:
            raise ValueError("modal_price must be positive")
        if self.min_price is not None and self.min_price > self.modal_price:
            raise ValueError("min_price exceeds modal_price")
        if self.max_price is not None and self.max_price < self.modal_price:
            raise ValueError("max_price below modal_price")


@dataclass(frozen=True)
class RowError:
    """A rejected CSV row: 1-based line number plus the reason."""

    line: int
    reason: str


@dataclass(frozen=True)
class CleaningReport:
    """Accounting of what ``clean_series`` did with its input records.

    Invariant: ``kept + other_series + nonpositive_dropped + duplicates_merged
    == total_in`` (every record is counted exactly once).
    """

    total_in: int
    kept: int
    other_series: int
    nonpositive_dropped: int
    duplicates_merged: int

    def to_dict(self) -> dict:
        return {
            "total_in": self.total_in,
            "kept": self.kept,
            "other_series": self.other_series,
            "nonpositive_dropped": self.nonpositive_dropped,
            "duplicates_merged": self.duplicates_merged,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CleaningReport":
        return cls(
            total_in=int(d["total_in"]),
            kept=int(d["kept"]),
            other_series=int(d["other_series"]),
            nonpositive_dropped=int(d["nonpositive_dropped"]),
            duplicates_merged=int(d["duplicates_merged"]),
        )


@dataclass(frozen=True)
class PriceSeries:
    """Cleaned daily price history for one (market, commodity) pair.

    ``entries`` is strictly increasing in date with all prices positive;
    construction enforces both.
    """

    market: str
    commodity: str
    entries: tuple[tuple[date, float], ...]
    cleaning_report: CleaningReport

    def __post_init__(self) -> None:
        last = None
        for d, price in self.entries:
            if last is not None and d <= last:
                raise ValueError(f"entries not strictly increasing at {d}")
            if not price > 0:
                raise ValueError(f"nonpositive price at {d}")
            last = d

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def start_date(self) -> date:
        return self.entries[0][0]

    @property
    def end_date(self) -> date:
        return self.entries[-1][0]

    def dates(self) -> list[date]:
        return [d for d, _ in self.entries]

    def prices(self) -> np.ndarray:
        return np.array([p for _, p in self.entries], dtype=float)


class Granularity(str, Enum):
    MONTH = "month"
    WEEK = "week"


@dataclass(frozen=True)
class WindowSpec:
    """Start of a recurring within-year window plus its length in weeks.

    Week k of year y covers the 7-day block starting at
    ``date(y, start_month, start_day) + 7*(k-1)`` days; windows may run past
    Dec 31, in which case the cell is labelled with the start year.
    """

    start_month: int
    start_day: int
    weeks: int

    def __post_init__(self) -> None:
        if not 1 <= self.start_month <= 12:
            raise ValueError("start_month out of range")
        if self.start_month == 2 and self.start_day == 29:
            raise ValueError("window cannot start on Feb 29 (absent in most years)")
        days_in_month = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]
        if not 1 <= self.start_day <= days_in_month[self.start_month - 1]:
            raise ValueError("start_day out of range")
        if self.weeks < 1:
            raise ValueError("weeks must be >= 1")

    def start_in(self, year: int) -> date:
        return date(year, self.start_month, self.start_day)

    @classmethod
    def parse(cls, mm_dd: str, weeks: int) -> "WindowSpec":
        """Build from an ``MM-DD`` string, e.g. ``"09-01"``."""
        parts = mm_dd.split("-")
        if len(parts) != 2:
            raise ValueError(f"window start must be MM-DD, got {mm_dd!r}")
        return cls(start_month=int(parts[0]), start_day=int(parts[1]), weeks=weeks)


def week_label(k: int) -> str:
    return f"W{k}"


@dataclass(frozen=True)
class PanelCell:
    mean: float
    count: int


@dataclass(frozen=True)
class SeasonalPanel:
    """(period, year) -> mean daily price, at month or week granularity.

    Cells exist only where at least one observation fell in the period; a
    missing cell means "no data", never "zero price".
    """

    granularity: Granularity
    cells: dict[tuple[str, int], PanelCell]
    window_spec: WindowSpec | None = None

    def __post_init__(self) -> None:
        labels = self._valid_labels()
        for (label, _year), cell in self.cells.items():
            if label not in labels:
                raise ValueError(f"period label {label!r} not valid for {self.granularity.value}")
            if cell.count < 1:
                raise ValueError("cell with zero observations")

    def _valid_labels(self) -> frozenset[str]:
        if self.granularity is Granularity.MONTH:
            return frozenset(MONTH_LABELS)
        assert self.window_spec is not None
        return frozenset(week_label(k) for k in range(1, self.window_spec.weeks + 1))

    def period_labels(self) -> list[str]:
        """All labels of this granularity in calendar order (populated or not)."""
        if self.granularity is Granularity.MONTH:
            return list(MONTH_LABELS)
        assert self.window_spec is not None
        return [week_label(k) for k in range(1, self.window_spec.weeks + 1)]

    def years(self) -> list[int]:
        return sorted({year for (_label, year) in self.cells})

    def values_for(self, label: str) -> list[float]:
        """Yearly mean prices for one period, ordered by year."""
        pairs = sorted((year, cell.mean) for (lab, year), cell in self.cells.items() if lab == label)
        return [mean for _year, mean in pairs]


@dataclass(frozen=True)
class YearExtremes:
    year: int
    min_period: str
    min_price: float
    max_period: str
    max_price: float

    @property
    def ratio(self) -> float:
        return self.max_price / self.min_price


@dataclass(frozen=True)
class DailyWindow:
    """Calendar-regularized daily price vector ending at ``end_date``."""

    dates: tuple[date, ...]
    values: np.ndarray
    filled: int  # days that were forward-filled rather than observed

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def end_date(self) -> date:
        return self.dates[-1]


# ---------------------------------------------------------------------------
# Parsing and cleaning
# ---------------------------------------------------------------------------


def _parse_price_field(raw: str | None, *, optional: bool) -> tuple[float | None, str | None]:
    """Returns (value, error). Empty optional fields yield (None, None)."""
    text = (raw or "").strip()
    if not text:
        if optional:
            return None, None
        return None, "missing value"
    try:
        value = float(text)
    except ValueError:
        return None, "bad number"
    if not np.isfinite(value):
        return None, "bad number"
    return value, None


def parse_price_csv(
    stream, schema: CsvSchema | None = None
) -> tuple[list[PriceRecord], list[RowError]]:
    """Parse an agmarknet-style price CSV into records plus row-level errors.

    ``stream`` may be a text or binary file object (binary is decoded as
    UTF-8).  Well-formed rows become :class:`PriceRecord`; malformed rows are
    reported with their 1-based line number and a short reason, never silently
    dropped.  Raises :class:`SchemaError` for an unreadable stream or a header
    missing mandatory columns.
    """
    schema = schema or CsvSchema()
    try:
        raw = stream.read()
    except (OSError, ValueError) as exc:
        raise SchemaError(f"unreadable stream: {exc}") from exc
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError("stream is not valid UTF-8 text") from exc

    reader = csv.DictReader(io.StringIO(raw), delimiter=schema.delimiter)
    if reader.fieldnames is None:
        raise SchemaError("empty input: no header row")
    header = [name.strip().lower() for name in reader.fieldnames]
    missing = [col for col in MANDATORY_COLUMNS if col not in header]
    if missing:
        raise SchemaError(f"missing mandatory columns: {', '.join(missing)}")

    records: list[PriceRecord] = []
    errors: list[RowError] = []
    for line_no, row in enumerate(reader, start=2):  # line 1 is the header
        row = {(k or "").strip().lower(): v for k, v in row.items() if k is not None}

        market = (row.get("market") or "").strip()
        commodity = (row.get("commodity") or "").strip()
        if not market or not commodity:
            errors.append(RowError(line_no, "missing market or commodity"))
            continue

        raw_date = (row.get("date") or "").strip()
        try:
            from datetime import datetime

            parsed_date = datetime.strptime(raw_date, schema.date_format).date()
        except ValueError:
            errors.append(RowError(line_no, "date format"))
            continue

        modal, err = _parse_price_field(row.get("modal_price"), optional=False)
        if err:
            errors.append(RowError(line_no, f"modal_price: {err}"))
            continue
        assert modal is not None
        if modal <= 0:
            errors.append(RowError(line_no, "nonpositive price"))
            continue

        bad = False
        optional_values: dict[str, float | None] = {}
        for col in ("min_price", "max_price", "arrivals"):
            value, err = _parse_price_field(row.get(col), optional=True)
            if err:
                errors.append(RowError(line_no, f"{col}: {err}"))
                bad = True
                break
            optional_values[col] = value
        if bad:
            continue

        min_price = optional_values["min_price"]
        max_price = optional_values["max_price"]
        if min_price is not None and min_price > modal:
            errors.append(RowError(line_no, "min_price exceeds modal_price"))
            continue
        if max_price is not None and max_price < modal:
            errors.append(RowError(line_no, "max_price below modal_price"))
            continue

        records.append(
            PriceRecord(
                market=market,
                commodity=commodity,
                date=parsed_date,
                modal_price=modal,
                min_price=min_price,
                max_price=max_price,
                arrivals=optional_values["arrivals"],
            )
        )
    return records, errors


def serialize_records(records: list[PriceRecord], schema: CsvSchema | None = None) -> str:
    """Inverse of :func:`parse_price_csv`: records back to CSV text.

    Floats are written with ``repr`` so parse(serialize(x)) == x exactly.
    """
    schema = schema or CsvSchema()
    out = io.StringIO()
    writer = csv.writer(out, delimiter=schema.delimiter, lineterminator="\n")
    writer.writerow(ALL_COLUMNS)

    def fmt(value: float | None) -> str:
        return "" if value is None else repr(value)

    for rec in records:
        writer.writerow(
            [
                rec.date.strftime(schema.date_format),
                rec.market,
                rec.commodity,
                fmt(rec.min_price),
                fmt(rec.max_price),
                repr(rec.modal_price),
                fmt(rec.arrivals),
            ]
        )
    return out.getvalue()


def clean_series(records: list[PriceRecord], market: str, commodity: str) -> PriceSeries:
    """Filter records to one (market, commodity) and build a clean series.

    Nonpositive prices are dropped (possible when records are constructed
    programmatically), same-date duplicates are merged by arithmetic mean, and
    entries are sorted ascending.  Raises :class:`EmptySeriesError` when
    nothing survives.
    """
    total_in = len(records)
    mine = [r for r in records if r.market == market and r.commodity == commodity]
    other = total_in - len(mine)

    positive = [r for r in mine if r.modal_price > 0]
    nonpositive = len(mine) - len(positive)

    by_date: dict[date, list[float]] = {}
    for rec in positive:
        by_date.setdefault(rec.date, []).append(rec.modal_price)

    merged = sum(len(prices) - 1 for prices in by_date.values())
    entries = tuple((d, float(np.mean(by_date[d]))) for d in sorted(by_date))

    report = CleaningReport(
        total_in=total_in,
        kept=len(entries),
        other_series=other,
        nonpositive_dropped=nonpositive,
        duplicates_merged=merged,
    )
    if not entries:
        raise EmptySeriesError(f"empty series for market={market!r} commodity={commodity!r}")
    return PriceSeries(market=market, commodity=commodity, entries=entries, cleaning_report=report)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


def _week_of(day: date, spec: WindowSpec) -> tuple[str, int] | None:
    """Map a date to its (week label, window year), or None if outside."""
    for year in (day.year, day.year - 1):
        start = spec.start_in(year)
        offset = (day - start).days
        if 0 <= offset < 7 * spec.weeks:
            return week_label(offset // 7 + 1), year
    return None


def aggregate_panel(
    series: PriceSeries,
    granularity: Granularity | str,
    window_spec: WindowSpec | None = None,
) -> SeasonalPanel:
    """Average daily prices into (period, year) cells.

    Month cells are keyed by calendar month of each observation; week cells
    by consecutive 7-day blocks from ``window_spec`` within each year.  Days
    outside the weekly window are ignored.  An empty panel is allowed.
    """
    granularity = Granularity(granularity)
    if granularity is Granularity.WEEK and window_spec is None:
        raise ValueError("week granularity requires a window_spec")

    sums: dict[tuple[str, int], float] = {}
    counts: dict[tuple[str, int], int] = {}
    for d, price in series.entries:
        if granularity is Granularity.MONTH:
            key = (MONTH_LABELS[d.month - 1], d.year)
        else:
            assert window_spec is not None
            hit = _week_of(d, window_spec)
            if hit is None:
                continue
            key = hit
        sums[key] = sums.get(key, 0.0) + price
        counts[key] = counts.get(key, 0) + 1

    cells = {key: PanelCell(mean=sums[key] / counts[key], count=counts[key]) for key in sums}
    return SeasonalPanel(granularity=granularity, cells=cells, window_spec=window_spec)


def extremes_by_year(panel: SeasonalPanel) -> list[YearExtremes]:
    """Per-year min/max month cells with the max/min price ratio.

    Ties on price are broken by the earlier calendar period.  Requires a
    month-granularity panel.
    """
    if panel.granularity is not Granularity.MONTH:
        raise ValueError("extremes_by_year requires a month-granularity panel")

    order = {label: i for i, label in enumerate(panel.period_labels())}
    out: list[YearExtremes] = []
    for year in panel.years():
        cells = [(label, cell.mean) for (label, y), cell in panel.cells.items() if y == year]
        cells.sort(key=lambda lc: order[lc[0]])
        min_label, min_price = min(cells, key=lambda lc: (lc[1], order[lc[0]]))
        max_label, max_price = max(cells, key=lambda lc: (lc[1], -order[lc[0]]))
        out.append(
            YearExtremes(
                year=year,
                min_period=min_label,
                min_price=min_price,
                max_period=max_label,
                max_price=max_price,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Daily windows
# ---------------------------------------------------------------------------


def slice_recent(series: PriceSeries, end_date: date, length_days: int = 100) -> DailyWindow:
    """Calendar-regularized daily vector of the last ``length_days`` days.

    Each day takes the last observed price on or before it; runs of missing
    days longer than ``MAX_FILL_GAP_DAYS`` raise :class:`GapTooLargeError`,
    and a window reaching before the first observation (beyond the fill
    limit) raises :class:`InsufficientHistoryError`.
    """
    if length_days < 1:
        raise ValueError("length_days must be >= 1")
    start = end_date - timedelta(days=length_days - 1)

    dates = series.dates()
    values = series.prices()
    if not dates:
        raise InsufficientHistoryError("series is empty")

    # Index of the last observation <= day, walked forward over the window.
    idx = int(np.searchsorted(np.array([d.toordinal() for d in dates]), start.toordinal(), side="right")) - 1

    out_dates: list[date] = []
    out_values: list[float] = []
    filled = 0
    day = start
    while day <= end_date:
        while idx + 1 < len(dates) and dates[idx + 1] <= day:
            idx += 1
        if idx < 0:
            raise InsufficientHistoryError(
                f"no observation on or before {day.isoformat()} (series starts {dates[0].isoformat()})"
            )
        gap = (day - dates[idx]).days
        if gap > MAX_FILL_GAP_DAYS:
            raise GapTooLargeError(
                f"gap too large: {gap} days without data at {day.isoformat()} "
                f"(limit {MAX_FILL_GAP_DAYS})"
            )
        if gap > 0:
            filled += 1
        out_dates.append(day)
        out_values.append(float(values[idx]))
        day += timedelta(days=1)

    return DailyWindow(dates=tuple(out_dates), values=np.array(out_values), filled=filled)
