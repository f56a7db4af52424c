"""Exception hierarchy shared by all favorit modules.

``DataError`` subclasses describe problems with the data itself (the CLI maps
them to exit code 2); plain ``ValueError``/``TypeError`` remain for caller
bugs such as out-of-range arguments.
"""

from __future__ import annotations


class FavoritError(Exception):
    """Base class for all favorit-specific errors."""


class DataError(FavoritError):
    """The supplied data cannot support the requested computation."""


class SchemaError(DataError):
    """Input file is unreadable or missing mandatory columns."""


class EmptySeriesError(DataError):
    """No usable records survived cleaning."""


class UnknownSeriesError(DataError):
    """Requested (market, commodity) pair is not in the dataset."""


class UnknownPeriodError(DataError):
    """Requested period label is not present in a ranking or panel."""


class GapTooLargeError(DataError):
    """A daily window contains a run of missing days longer than the fill limit."""


class InsufficientHistoryError(DataError):
    """The series does not cover the requested window."""


class InsufficientYearsError(DataError):
    """Fewer than two yearly observations for a period."""


class DatasetFormatError(DataError):
    """Persisted dataset is corrupt or has an unsupported format version."""


class FitError(DataError):
    """A model cannot be fitted to the given series (too short, non-finite)."""
