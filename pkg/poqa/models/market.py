"""Market data models."""
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np


@dataclass
class PriceSeries:
    """Dated close-price matrix for a set of tickers.

    ``prices`` has one row per trading day and one column per ticker.
    """
    tickers: List[str]
    dates: List[str]
    prices: np.ndarray

    def __post_init__(self):
        self.tickers = list(self.tickers)
        self.dates = [str(d) for d in self.dates]
        self.prices = np.asarray(self.prices, dtype=float)

        if self.prices.ndim != 2:
            raise ValueError("malformed price: prices must be a T x n matrix")
        rows, cols = self.prices.shape
        if cols != len(self.tickers):
            raise ValueError(
                f"malformed price: {cols} price columns for {len(self.tickers)} tickers"
            )
        if rows != len(self.dates):
            raise ValueError(f"malformed price: {rows} price rows for {len(self.dates)} dates")
        if rows < 2:
            raise ValueError(f"insufficient history: {rows} rows, need at least 2")
        if not np.all(np.isfinite(self.prices)) or np.any(self.prices <= 0):
            raise ValueError("malformed price: prices must be finite and strictly positive")
        if any(a >= b for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("malformed price: dates must be strictly increasing")

    @property
    def n_assets(self) -> int:
        return len(self.tickers)

    @property
    def n_days(self) -> int:
        return len(self.dates)

    def select(self, tickers: List[str]) -> 'PriceSeries':
        """Restrict the series to ``tickers``, in the order given."""
        missing = [t for t in tickers if t not in self.tickers]
        if missing:
            raise ValueError(f"unknown ticker: {', '.join(missing)}")
        columns = [self.tickers.index(t) for t in tickers]
        return PriceSeries(list(tickers), self.dates, self.prices[:, columns])

    def to_dict(self) -> Dict[str, Any]:
        """Convert the series to a dictionary."""
        return {
            'tickers': self.tickers,
            'dates': self.dates,
            'prices': self.prices.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PriceSeries':
        """Create a series from a dictionary."""
        return cls(
            tickers=data['tickers'],
            dates=data['dates'],
            prices=np.asarray(data['prices'], dtype=float),
        )


@dataclass
class AssetStatistics:
    """Per-period expected returns ``mu`` and covariance ``sigma`` of the assets."""
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float).reshape(-1)
        self.sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))

        n = self.mu.shape[0]
        if self.sigma.shape != (n, n):
            raise ValueError(
                f"dimension mismatch: mu has {n} entries, sigma is {self.sigma.shape}"
            )
        if not np.allclose(self.sigma, self.sigma.T, rtol=0.0, atol=1e-12):
            raise ValueError("sigma must be symmetric")
        if n and np.linalg.eigvalsh(self.sigma).min() < -1e-10:
            raise ValueError("sigma must be positive semidefinite")

    @property
    def n_assets(self) -> int:
        return int(self.mu.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        return {'mu': self.mu.tolist(), 'sigma': self.sigma.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AssetStatistics':
        return cls(mu=data['mu'], sigma=data['sigma'])
