"""Price series loading, synthesis and return statistics.

Returns are simple (arithmetic) per-period returns; the covariance uses the
sample (T - 1) denominator.
"""
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..config import SAMPLE_TICKERS, config
from ..models.market import AssetStatistics, PriceSeries

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# 17 significant digits: prices survive a write/read cycle unchanged
PRICE_FORMAT = '%.17g'
SAMPLE_PATH = Path(__file__).resolve().parent.parent / 'data' / 'prices_sample.csv'


def load_prices(path: PathLike, tickers: Optional[Sequence[str]] = None) -> PriceSeries:
    """
    Load a ``date,TICKER1,...`` CSV of close prices.

    Args:
        path: CSV file with a ``date`` column and one numeric column per ticker.
        tickers: Optional subset (and order) of ticker columns to keep.

    Returns:
        PriceSeries with rows sorted by date.

    Raises:
        ValueError: unknown ticker, malformed price or insufficient history.
        OSError: the file cannot be read.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"price file not found: {path}")

    frame = pd.read_csv(path, dtype=str, skipinitialspace=True)
    frame.columns = [c.strip() for c in frame.columns]
    if 'date' not in frame.columns:
        raise ValueError(f"malformed price: {path} has no 'date' column")

    available = [c for c in frame.columns if c != 'date']
    wanted = list(tickers) if tickers else available
    missing = [t for t in wanted if t not in available]
    if missing:
        raise ValueError(f"unknown ticker: {', '.join(missing)}")
    if not wanted:
        raise ValueError(f"malformed price: {path} has no ticker columns")

    values = frame[wanted].apply(lambda col: pd.to_numeric(col.str.strip(), errors='coerce'))
    bad = values.isna() | (values <= 0)
    if bad.to_numpy().any():
        row, col = np.argwhere(bad.to_numpy())[0]
        raise ValueError(
            f"malformed price: {wanted[col]} on row {row + 2} is "
            f"{frame[wanted[col]].iloc[row]!r}"
        )
    if len(frame) < 2:
        raise ValueError(f"insufficient history: {len(frame)} rows, need at least 2")

    dates = pd.to_datetime(frame['date'].str.strip(), errors='coerce')
    if dates.isna().any():
        raise ValueError(f"malformed price: unparseable date in {path}")
    order = np.argsort(dates.to_numpy(), kind='stable')
    dates = dates.iloc[order]
    if dates.duplicated().any():
        raise ValueError(f"malformed price: duplicate dates in {path}")

    series = PriceSeries(
        tickers=wanted,
        dates=[d.strftime('%Y-%m-%d') for d in dates],
        prices=values.to_numpy(dtype=float)[order],
    )
    logger.info("Loaded %d days x %d assets from %s", series.n_days, series.n_assets, path)
    return series


def save_prices(series: PriceSeries, path: PathLike) -> Path:
    """Write ``series`` in the CSV price format. Identical input gives identical bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(series.prices, columns=series.tickers)
    frame.insert(0, 'date', series.dates)
    frame.to_csv(path, index=False, float_format=PRICE_FORMAT, lineterminator='\n')
    logger.info("Wrote %d days x %d assets to %s", series.n_days, series.n_assets, path)
    return path


def compute_returns(series: PriceSeries) -> np.ndarray:
    """Simple returns ``(p[t+1] - p[t]) / p[t]``, shape ``(T - 1, n)``."""
    prices = series.prices
    return (prices[1:] - prices[:-1]) / prices[:-1]


def estimate_statistics(returns: np.ndarray) -> AssetStatistics:
    """Column means and symmetrized sample covariance of a return matrix."""
    returns = np.asarray(returns, dtype=float)
    if returns.ndim == 1:
        returns = returns.reshape(-1, 1)
    if returns.shape[0] < 2:
        raise ValueError(
            f"insufficient data for covariance: {returns.shape[0]} return row(s)"
        )

    mu = returns.mean(axis=0)
    sigma = np.atleast_2d(np.cov(returns, rowvar=False, ddof=1))
    sigma = (sigma + sigma.T) / 2
    return AssetStatistics(mu=mu, sigma=sigma)


def _synthetic_tickers(n_assets: int) -> List[str]:
    tickers = list(config.get('data.tickers', SAMPLE_TICKERS))[:n_assets]
    tickers += [f"ASSET{i}" for i in range(len(tickers), n_assets)]
    return tickers


def generate_synthetic(
    n_assets: int = 8,
    n_days: int = 126,
    seed: int = 42,
    drift: float = 0.0005,
    vol: float = 0.02,
    initial_price: float = 100.0,
    start_date: str = '2016-07-01',
    tickers: Optional[Sequence[str]] = None,
) -> PriceSeries:
    """
    Geometric random walk ``p[t+1] = p[t] * (1 + drift + vol * g)``.

    ``g`` is standard normal from ``numpy.random.default_rng(seed)``; the result is
    a pure function of the arguments. Dates are consecutive business days.
    """
    if n_assets < 1:
        raise ValueError(f"n_assets must be >= 1, got {n_assets}")
    if n_days < 2:
        raise ValueError(f"insufficient history: n_days must be >= 2, got {n_days}")
    if vol < 0:
        raise ValueError(f"negative volatility: {vol}")
    if initial_price <= 0:
        raise ValueError(f"malformed price: initial price {initial_price}")

    rng = np.random.default_rng(seed)
    shocks = rng.standard_normal((n_days - 1, n_assets))
    growth = 1.0 + drift + vol * shocks
    if np.any(growth <= 0):
        raise ValueError("malformed price: random walk left the positive domain; lower vol")

    prices = np.empty((n_days, n_assets))
    prices[0] = initial_price
    prices[1:] = initial_price * np.cumprod(growth, axis=0)

    dates = pd.bdate_range(start=start_date, periods=n_days)
    names = list(tickers) if tickers else _synthetic_tickers(n_assets)
    if len(names) != n_assets:
        raise ValueError(f"dimension mismatch: {len(names)} tickers for {n_assets} assets")

    return PriceSeries(
        tickers=names,
        dates=[d.strftime('%Y-%m-%d') for d in dates],
        prices=prices,
    )


def sample_prices() -> PriceSeries:
    """
    The bundled 8-asset, 126-day series standing in for the 2016 dataset.

    It is a frozen random walk (drift 0.0005, vol 0.02, from 100 on 2016-07-01)
    shipped as package data, so it does not change with the numpy version.
    """
    return load_prices(SAMPLE_PATH)


def write_sample_prices(path: PathLike) -> Path:
    """Copy the bundled sample CSV to ``path`` byte for byte."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(SAMPLE_PATH.read_bytes())
    logger.info("Wrote sample prices to %s", path)
    return path
