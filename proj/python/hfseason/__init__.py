"""High-frequency crypto seasonality toolkit.

Thin Python surface over the C++ core: OHLCV grid alignment, return and
volatility construction, distributional statistics, kernel densities, and
penalized-spline GAM seasonality fits with GCV smoothing selection.
"""

from hfseason._core import (
    Bar,
    GridSeries,
    ConfigError,
    DataError,
    NumericError,
    abs_volatility,
    acf_lag1,
    aggregate_bars,
    build_grid,
    density_curve,
    encode_covariates,
    fit_gam,
    fit_seasonality,
    format_utc,
    jarque_bera,
    log_returns,
    moments,
    parse_timestamp,
    simple_returns,
    __version__,
)

__all__ = [
    "Bar",
    "GridSeries",
    "ConfigError",
    "DataError",
    "NumericError",
    "abs_volatility",
    "acf_lag1",
    "aggregate_bars",
    "build_grid",
    "density_curve",
    "encode_covariates",
    "fit_gam",
    "fit_seasonality",
    "format_utc",
    "jarque_bera",
    "log_returns",
    "moments",
    "parse_timestamp",
    "simple_returns",
    "__version__",
]
