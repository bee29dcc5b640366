"""Correlation-matrix estimation from monthly price series.

Pipeline: load a prices CSV (one ``date`` column plus one column per ticker),
take monthly log returns, aggregate tickers into factor-group baskets by
equal-weight averaging, estimate the Pearson correlation matrix, and repair
it to positive semidefinite if sampling noise pushed an eigenvalue negative.

Sector groups map to a single ETF ticker; geography and founder-type groups
map to baskets of one or more tickers.  The output feeds the labeled CSV +
kind-map format consumed by the factor model.
"""
from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    InsufficientData,
    MissingTicker,
    NonPositivePrice,
    ParseError,
    ValidationError,
    ZeroVariance,
)
from .universe import FactorUniverse, Group, GroupKind

#: Eigenvalues are clipped at this floor during PSD repair.
DEFAULT_PSD_EPS = 1e-10


@dataclass(frozen=True)
class PriceTable:
    """Aligned month-end price series, one per ticker."""

    dates: tuple[dt.date, ...]
    series: dict[str, np.ndarray]

    def __post_init__(self):
        n = len(self.dates)
        if any(self.dates[i] >= self.dates[i + 1] for i in range(n - 1)):
            raise ValidationError("dates must be strictly increasing")
        for ticker, prices in self.series.items():
            if prices.shape != (n,):
                raise ValidationError(
                    f"ticker {ticker}: {prices.shape[0]} prices for {n} dates"
                )
            if np.any(prices <= 0.0):
                raise NonPositivePrice(f"ticker {ticker} has a non-positive price")


@dataclass(frozen=True)
class BasketSpec:
    """Which tickers proxy one factor group."""

    label: str
    kind: GroupKind
    tickers: tuple[str, ...]

    def __post_init__(self):
        if not self.tickers:
            raise ValidationError(f"basket {self.label!r} has no tickers")
        if self.kind == GroupKind.SECTOR and len(self.tickers) != 1:
            raise ValidationError(
                f"sector basket {self.label!r} must map to a single ETF ticker"
            )


@dataclass(frozen=True)
class ReturnsTable:
    """Per-group monthly log-return sequences, aligned."""

    groups: tuple[Group, ...]
    returns: np.ndarray  # shape (n_periods, n_groups)


def load_prices(path) -> PriceTable:
    """Parse and validate a prices CSV; rows are sorted by date."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: file is empty; expected a 'date' column")
        if not header or header[0] != "date":
            raise ParseError(f"{path}: first column must be 'date', got {header[:1]}")
        tickers = header[1:]
        if not tickers:
            raise ParseError(f"{path}: no ticker columns after 'date'")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                date = dt.date.fromisoformat(row[0])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad date {row[0]!r}")
            values = []
            for col, raw in zip(tickers, row[1:]):
                try:
                    value = float(raw)
                except ValueError:
                    raise ParseError(
                        f"{path}:{lineno}: column {col}: bad price {raw!r}"
                    )
                if value <= 0.0:
                    raise NonPositivePrice(
                        f"{path}:{lineno}: column {col}: price {value} must be > 0"
                    )
                values.append(value)
            rows.append((date, values))
    if not rows:
        raise ParseError(f"{path}: no data rows")
    rows.sort(key=lambda item: item[0])
    dates = tuple(date for date, _ in rows)
    if len(set(dates)) != len(dates):
        raise ParseError(f"{path}: duplicate dates")
    matrix = np.array([values for _, values in rows], dtype=float)
    series = {ticker: matrix[:, i].copy() for i, ticker in enumerate(tickers)}
    return PriceTable(dates=dates, series=series)


def log_returns(prices: PriceTable) -> dict[str, np.ndarray]:
    """Monthly log returns per ticker: r_t = ln(P_t / P_{t-1})."""
    if len(prices.dates) < 2:
        raise InsufficientData("need at least 2 dates to form one return")
    return {
        ticker: np.diff(np.log(values)) for ticker, values in prices.series.items()
    }


def aggregate_baskets(
    returns: Mapping[str, np.ndarray], baskets: Sequence[BasketSpec]
) -> ReturnsTable:
    """Equal-weight mean of member log returns per group, aligned in time."""
    columns = []
    for basket in baskets:
        members = []
        for ticker in basket.tickers:
            if ticker not in returns:
                raise MissingTicker(
                    f"basket {basket.label!r} references unknown ticker {ticker!r}"
                )
            members.append(returns[ticker])
        columns.append(np.mean(members, axis=0))
    groups = tuple(Group(label=b.label, kind=b.kind) for b in baskets)
    return ReturnsTable(groups=groups, returns=np.column_stack(columns))


def estimate_correlation(table: ReturnsTable) -> np.ndarray:
    """Sample Pearson correlation matrix of the group returns."""
    data = table.returns
    if data.shape[0] < 3:
        raise InsufficientData(
            f"need at least 3 aligned observations, got {data.shape[0]}"
        )
    stds = data.std(axis=0)
    for group, std in zip(table.groups, stds):
        if std <= 1e-300:
            raise ZeroVariance(f"group {group.label!r} has constant returns")
    corr = np.corrcoef(data, rowvar=False)
    corr = (corr + corr.T) / 2.0
    np.fill_diagonal(corr, 1.0)
    return corr


@dataclass(frozen=True)
class PsdRepair:
    """What ensure_psd did to the matrix."""

    changed: bool
    min_eigenvalue_before: float
    max_abs_change: float


def ensure_psd(sigma: np.ndarray, eps: float = DEFAULT_PSD_EPS, return_report: bool = False):
    """Clip eigenvalues at ``eps`` and rescale to a unit diagonal.

    ``eps`` acts symmetrically: matrices whose smallest eigenvalue is at
    least ``-eps`` pass through unchanged (exactly-singular inputs such as
    duplicated groups keep their perfect correlations; the factorization
    handles zero eigenvalues), while genuinely indefinite inputs have their
    eigenvalues clipped at ``+eps`` and the diagonal rescaled back to one.
    Adequate for matrices of this size, without the full
    alternating-projections machinery.
    """
    sigma = np.asarray(sigma, dtype=float)
    eigenvalues, eigenvectors = np.linalg.eigh(sigma)
    min_eig = float(eigenvalues.min())
    if min_eig >= -eps:
        repaired = sigma.copy()
        report = PsdRepair(changed=False, min_eigenvalue_before=min_eig, max_abs_change=0.0)
    else:
        clipped = np.maximum(eigenvalues, eps)
        rebuilt = (eigenvectors * clipped) @ eigenvectors.T
        scale = 1.0 / np.sqrt(np.diag(rebuilt))
        repaired = rebuilt * scale[:, None] * scale[None, :]
        repaired = (repaired + repaired.T) / 2.0
        np.fill_diagonal(repaired, 1.0)
        report = PsdRepair(
            changed=True,
            min_eigenvalue_before=min_eig,
            max_abs_change=float(np.abs(repaired - sigma).max()),
        )
    if return_report:
        return repaired, report
    return repaired


def load_baskets(path) -> list[BasketSpec]:
    """Basket manifest JSON: ordered map of group label -> {kind, tickers}."""
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict) or not doc:
        raise ParseError(f"{path}: expected a non-empty JSON object")
    baskets = []
    for label, entry in doc.items():
        try:
            kind = GroupKind(entry["kind"])
            tickers = tuple(entry["tickers"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: group {label!r}: {exc}")
        baskets.append(BasketSpec(label=label, kind=kind, tickers=tickers))
    return baskets


def estimate_universe(
    prices: PriceTable, baskets: Sequence[BasketSpec], eps: float = DEFAULT_PSD_EPS
) -> tuple[FactorUniverse, PsdRepair]:
    """Full pipeline: returns -> baskets -> correlation -> PSD repair."""
    table = aggregate_baskets(log_returns(prices), baskets)
    sigma = estimate_correlation(table)
    repaired, report = ensure_psd(sigma, eps, return_report=True)
    universe = FactorUniverse(groups=table.groups, sigma=repaired)
    return universe, report
