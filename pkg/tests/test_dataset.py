"""Dataset persistence and lookup."""

import json

import pytest

from favorit.dataset import Dataset, load_dataset, save_dataset
from favorit.errors import DatasetFormatError, UnknownSeriesError

from conftest import make_series


def build_dataset():
    a = make_series([10.0, 11.0, 12.5], market="Satara", commodity="tomato")
    b = make_series([5.0, 6.0], market="Pune", commodity="onion")
    return Dataset({("Satara", "tomato"): a, ("Pune", "onion"): b}, source="unit test")


class TestDataset:
    def test_lookup(self):
        data = build_dataset()
        assert data.get("Satara", "tomato").prices().tolist() == [10.0, 11.0, 12.5]
        assert data.markets() == ["Pune", "Satara"]
        assert data.commodities("Satara") == ["tomato"]

    def test_unknown_series(self):
        data = build_dataset()
        with pytest.raises(UnknownSeriesError):
            data.get("Nashik", "tomato")
        with pytest.raises(UnknownSeriesError):
            data.commodities("Nashik")

    def test_roundtrip(self, tmp_path):
        data = build_dataset()
        save_dataset(data, tmp_path / "ds")
        loaded = load_dataset(tmp_path / "ds")
        assert loaded.markets() == data.markets()
        for (market, commodity), series in data.items():
            clone = loaded.get(market, commodity)
            assert clone.entries == series.entries
            assert clone.cleaning_report == series.cleaning_report
        assert loaded.source == data.source

    def test_version_tracks_content(self, tmp_path):
        data = build_dataset()
        save_dataset(data, tmp_path / "a")
        save_dataset(data, tmp_path / "b")
        va = load_dataset(tmp_path / "a").version
        vb = load_dataset(tmp_path / "b").version
        assert va == vb and len(va) == 12

        other = Dataset(
            {("Satara", "tomato"): make_series([99.0, 98.0], market="Satara", commodity="tomato")}
        )
        save_dataset(other, tmp_path / "c")
        assert load_dataset(tmp_path / "c").version != va

    def test_missing_directory(self, tmp_path):
        with pytest.raises(DatasetFormatError):
            load_dataset(tmp_path / "absent")

    def test_corrupt_manifest(self, tmp_path):
        data = build_dataset()
        save_dataset(data, tmp_path / "ds")
        manifest = tmp_path / "ds" / "manifest.json"
        manifest.write_text("{not json", encoding="utf-8")
        with pytest.raises(DatasetFormatError):
            load_dataset(tmp_path / "ds")

    def test_future_format_version_rejected(self, tmp_path):
        data = build_dataset()
        save_dataset(data, tmp_path / "ds")
        manifest = tmp_path / "ds" / "manifest.json"
        blob = json.loads(manifest.read_text(encoding="utf-8"))
        blob["format_version"] = 99
        manifest.write_text(json.dumps(blob), encoding="utf-8")
        with pytest.raises(DatasetFormatError):
            load_dataset(tmp_path / "ds")
