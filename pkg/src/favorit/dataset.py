"""Persistence of cleaned price series collections.

A dataset is a directory holding ``prices.csv`` (the same schema as raw
input, one row per cleaned entry) and ``manifest.json`` with the format
version, source note, and per-series cleaning reports.  Round-trips are
lossless: floats are written with ``repr``.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import DatasetFormatError, UnknownSeriesError
from .market_data import (
    CleaningReport,
    CsvSchema,
    PriceSeries,
    parse_price_csv,
    serialize_records,
    PriceRecord,
)

FORMAT_VERSION = 1
PRICES_FILE = "prices.csv"
MANIFEST_FILE = "manifest.json"


class Dataset:
    """Immutable collection of :class:`PriceSeries` keyed by (market, commodity)."""

    def __init__(self, series: dict[tuple[str, str], PriceSeries], source: str = "", version: str = ""):
        self._series = dict(series)
        self.source = source
        #: Content fingerprint, set when loaded from disk ("" for in-memory).
        self.version = version

    def __len__(self) -> int:
        return len(self._series)

    def markets(self) -> list[str]:
        return sorted({market for market, _ in self._series})

    def commodities(self, market: str) -> list[str]:
        found = sorted({c for m, c in self._series if m == market})
        if not found:
            raise UnknownSeriesError(f"no data for market {market!r}")
        return found

    def get(self, market: str, commodity: str) -> PriceSeries:
        try:
            return self._series[(market, commodity)]
        except KeyError:
            raise UnknownSeriesError(
                f"no data for market {market!r} commodity {commodity!r}"
            ) from None

    def items(self):
        return sorted(self._series.items())


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset directory (created if needed) at ``path``."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)

    records = []
    reports = {}
    for (market, commodity), series in dataset.items():
        reports[f"{market}/{commodity}"] = series.cleaning_report.to_dict()
        for d, price in series.entries:
            records.append(
                PriceRecord(market=market, commodity=commodity, date=d, modal_price=price)
            )
    (root / PRICES_FILE).write_text(serialize_records(records), encoding="utf-8")

    manifest = {
        "format_version": FORMAT_VERSION,
        "source": dataset.source,
        "cleaning_report": reports,
    }
    (root / MANIFEST_FILE).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_dataset(path: str | Path) -> Dataset:
    """Load a dataset directory written by :func:`save_dataset`.

    Raises :class:`DatasetFormatError` for a missing/corrupt directory or an
    unsupported ``format_version``.
    """
    root = Path(path)
    manifest_path = root / MANIFEST_FILE
    prices_path = root / PRICES_FILE
    if not manifest_path.is_file() or not prices_path.is_file():
        raise DatasetFormatError(f"not a dataset directory: {root}")

    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DatasetFormatError(f"corrupt manifest: {exc}") from exc
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise DatasetFormatError(f"unsupported version: {version!r} (expected {FORMAT_VERSION})")

    csv_bytes = prices_path.read_bytes()
    with prices_path.open("rb") as fh:
        records, errors = parse_price_csv(fh, CsvSchema())
    if errors:
        first = errors[0]
        raise DatasetFormatError(f"corrupt prices file: line {first.line}: {first.reason}")

    reports = manifest.get("cleaning_report", {})
    by_series: dict[tuple[str, str], list] = {}
    for rec in records:
        by_series.setdefault((rec.market, rec.commodity), []).append(rec)

    series = {}
    for (market, commodity), recs in by_series.items():
        entries = tuple(sorted((r.date, r.modal_price) for r in recs))
        key = f"{market}/{commodity}"
        if key in reports:
            report = CleaningReport.from_dict(reports[key])
        else:
            report = CleaningReport(
                total_in=len(entries), kept=len(entries), other_series=0,
                nonpositive_dropped=0, duplicates_merged=0,
            )
        series[(market, commodity)] = PriceSeries(
            market=market, commodity=commodity, entries=entries, cleaning_report=report
        )

    fingerprint = hashlib.sha256(csv_bytes).hexdigest()[:12]
    return Dataset(series, source=str(manifest.get("source", "")), version=fingerprint)
