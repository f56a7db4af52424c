"""Favorit: pick when to sell and which day to go to market.

The library ranks calendar periods (months, or weeks of a sowing window)
of a commodity's price history by bootstrap confidence intervals and the
FLAP index, and recommends a market day within a short horizon from an
ARIMA price forecast scored by the PRIM criterion.
"""

from .arima import (
    ArimaModel,
    ArimaOrder,
    ForecastPoint,
    choose_differencing,
    fit_arima,
    forecast_h,
    select_order,
)
from .bootstrap import (
    ConfidenceInterval,
    FlapSummary,
    bootstrap_mean_distribution,
    percentile_ci,
    summarize_panel,
    summarize_period,
)
from .dataset import Dataset, load_dataset, save_dataset
from .errors import (
    DataError,
    DatasetFormatError,
    EmptySeriesError,
    FavoritError,
    FitError,
    GapTooLargeError,
    InsufficientHistoryError,
    InsufficientYearsError,
    SchemaError,
    UnknownPeriodError,
    UnknownSeriesError,
)
from .market_data import (
    DailyWindow,
    Granularity,
    PriceRecord,
    PriceSeries,
    SeasonalPanel,
    WindowSpec,
    aggregate_panel,
    clean_series,
    extremes_by_year,
    parse_price_csv,
    slice_recent,
)
from .prim import (
    BacktestReport,
    PrimReport,
    evaluate_prim,
    recommend_market_day,
    rolling_backtest,
)
from .ranking import (
    Advice,
    Comparison,
    Ranking,
    advise_shift,
    compare_periods,
    flap_index,
    rank_periods,
)

__version__ = "0.1.0"

__all__ = [
    "Advice",
    "ArimaModel",
    "ArimaOrder",
    "BacktestReport",
    "Comparison",
    "ConfidenceInterval",
    "DailyWindow",
    "DataError",
    "Dataset",
    "DatasetFormatError",
    "EmptySeriesError",
    "FavoritError",
    "FitError",
    "FlapSummary",
    "ForecastPoint",
    "GapTooLargeError",
    "Granularity",
    "InsufficientHistoryError",
    "InsufficientYearsError",
    "PriceRecord",
    "PriceSeries",
    "PrimReport",
    "Ranking",
    "SchemaError",
    "SeasonalPanel",
    "UnknownPeriodError",
    "UnknownSeriesError",
    "WindowSpec",
    "advise_shift",
    "aggregate_panel",
    "bootstrap_mean_distribution",
    "choose_differencing",
    "clean_series",
    "compare_periods",
    "evaluate_prim",
    "extremes_by_year",
    "fit_arima",
    "flap_index",
    "forecast_h",
    "load_dataset",
    "parse_price_csv",
    "percentile_ci",
    "rank_periods",
    "recommend_market_day",
    "rolling_backtest",
    "save_dataset",
    "select_order",
    "slice_recent",
    "summarize_panel",
    "summarize_period",
    "__version__",
]
