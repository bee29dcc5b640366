#!/usr/bin/env python3
"""Regenerate the shipped data fixtures.

Produces, under src/unicornsim/data/:

* fixture_sigma.csv / fixture_sigma_kinds.json — the 11-group synthetic
  correlation matrix used by scenario tests and demos.  Values are a
  handcrafted target (tech sectors co-move, healthcare nearly decoupled,
  founder types strongly coupled, AI and California strongly coupled);
  they are fixtures, not estimates.
* fixture_prices.csv — 72 months of synthetic prices whose basket log
  returns have *exactly* the target sample correlation (the iid draws are
  whitened to an identity sample covariance and recolored with the target's
  Cholesky factor), so the estimation pipeline reproduces fixture_sigma.csv
  byte for byte.
* baskets.json — the basket manifest mapping groups to fixture tickers.

Run from the repository root:  python tools/make_fixtures.py
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from unicornsim.corr_estimator import estimate_universe, load_baskets, load_prices
from unicornsim.universe import FactorUniverse, Group, GroupKind, write_universe

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "unicornsim" / "data"

LABELS = [
    "AI", "FinTech", "Healthcare", "Consumer", "SaaS",
    "CA", "NY", "MA", "OtherUS",
    "FirstTime", "Repeat",
]
KINDS = (
    [GroupKind.SECTOR] * 5 + [GroupKind.GEOGRAPHY] * 4 + [GroupKind.FOUNDER_TYPE] * 2
)

# Upper triangle of the target matrix, row by row.
TARGET_UPPER = [
    # AI:        FinTech HC    Cons  SaaS  CA    NY    MA    Other First Repeat
    [0.58, 0.06, 0.52, 0.66, 0.74, 0.44, 0.46, 0.42, 0.50, 0.54],
    # FinTech:          HC    Cons  SaaS  CA    NY    MA    Other First Repeat
    [0.05, 0.55, 0.60, 0.48, 0.56, 0.42, 0.44, 0.48, 0.50],
    # Healthcare:             Cons  SaaS  CA    NY    MA    Other First Repeat
    [0.08, 0.07, 0.05, 0.06, 0.09, 0.07, 0.06, 0.07],
    # Consumer:                     SaaS  CA    NY    MA    Other First Repeat
    [0.54, 0.50, 0.52, 0.44, 0.50, 0.52, 0.50],
    # SaaS:                               CA    NY    MA    Other First Repeat
    [0.62, 0.50, 0.48, 0.46, 0.50, 0.52],
    # CA:                                       NY    MA    Other First Repeat
    [0.62, 0.58, 0.60, 0.56, 0.58],
    # NY:                                             MA    Other First Repeat
    [0.55, 0.57, 0.52, 0.53],
    # MA:                                                   Other First Repeat
    [0.52, 0.47, 0.48],
    # OtherUS:                                                    First Repeat
    [0.55, 0.54],
    # FirstTime:                                                        Repeat
    [0.86],
]

TICKERS = {
    "AI": ["AIQX"],
    "FinTech": ["FINX"],
    "Healthcare": ["HLCX"],
    "Consumer": ["CNSX"],
    "SaaS": ["SAAX"],
    "CA": ["CALA", "CALB", "CALC"],
    "NY": ["NYCA", "NYCB"],
    "MA": ["MASA", "MASB"],
    "OtherUS": ["USOA", "USOB", "USOC"],
    "FirstTime": ["FTFA", "FTFB"],
    "Repeat": ["RPTA", "RPTB"],
}

MONTHS = 72          # January 2020 .. December 2025
MONTHLY_VOL = 0.05   # scales returns; correlation is scale-invariant
SEED = 20260809


def target_matrix() -> np.ndarray:
    k = len(LABELS)
    sigma = np.eye(k)
    for i, row in enumerate(TARGET_UPPER):
        for offset, value in enumerate(row, start=1):
            sigma[i, i + offset] = sigma[i + offset, i] = value
    return sigma


def month_ends(n: int) -> list[str]:
    dates = []
    year, month = 2020, 1
    for _ in range(n + 1):  # one extra month so n returns exist
        if month == 12:
            nxt_y, nxt_m = year + 1, 1
        else:
            nxt_y, nxt_m = year, month + 1
        import datetime as dt

        last_day = dt.date(nxt_y, nxt_m, 1) - dt.timedelta(days=1)
        dates.append(last_day.isoformat())
        year, month = nxt_y, nxt_m
    return dates


def exact_correlation_returns(sigma: np.ndarray, n_periods: int, rng) -> np.ndarray:
    """Gaussian draws reshaped to have exactly the target sample correlation."""
    k = sigma.shape[0]
    raw = rng.standard_normal((n_periods, k))
    raw -= raw.mean(axis=0)
    cov = raw.T @ raw / n_periods
    white = raw @ np.linalg.inv(np.linalg.cholesky(cov)).T
    colored = white @ np.linalg.cholesky(sigma).T
    return colored * MONTHLY_VOL


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    sigma = target_matrix()
    eigenvalues = np.linalg.eigvalsh(sigma)
    print(f"target eigenvalues: min={eigenvalues.min():.6f} max={eigenvalues.max():.6f}")
    assert eigenvalues.min() > 1e-4, "target matrix must be comfortably PSD"

    rng = np.random.default_rng(SEED)
    group_returns = exact_correlation_returns(sigma, MONTHS, rng)

    # Expand groups into member tickers whose perturbations cancel in the
    # equal-weight basket mean, so basket returns equal group returns exactly.
    ticker_names: list[str] = []
    ticker_returns: list[np.ndarray] = []
    for gi, label in enumerate(LABELS):
        members = TICKERS[label]
        ticker_names.extend(members)
        if len(members) == 1:
            ticker_returns.append(group_returns[:, gi])
            continue
        noise = rng.standard_normal((MONTHS, len(members))) * (MONTHLY_VOL / 4)
        noise -= noise.mean(axis=1, keepdims=True)  # zero-sum across members
        for mi in range(len(members)):
            ticker_returns.append(group_returns[:, gi] + noise[:, mi])

    prices = np.empty((MONTHS + 1, len(ticker_names)))
    prices[0] = 100.0
    for t in range(MONTHS):
        prices[t + 1] = prices[t] * np.exp([r[t] for r in ticker_returns])

    dates = month_ends(MONTHS)
    prices_path = DATA_DIR / "fixture_prices.csv"
    with open(prices_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", *ticker_names])
        for t, date in enumerate(dates):
            writer.writerow([date, *[format(p, ".12f") for p in prices[t]]])
    print(f"wrote {prices_path}")

    baskets_path = DATA_DIR / "baskets.json"
    manifest = {
        label: {"kind": KINDS[i].value, "tickers": TICKERS[label]}
        for i, label in enumerate(LABELS)
    }
    baskets_path.write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {baskets_path}")

    # The shipped sigma is whatever the pipeline estimates from the fixture
    # prices; it must match the handcrafted target to near machine precision.
    universe, report = estimate_universe(
        load_prices(prices_path), load_baskets(baskets_path)
    )
    deviation = np.abs(universe.sigma - sigma).max()
    print(f"pipeline vs target max deviation: {deviation:.3e} (repair: {report.changed})")
    assert deviation < 1e-10, "pipeline must recover the handcrafted target"
    assert not report.changed

    sigma_path = DATA_DIR / "fixture_sigma.csv"
    kinds_path = DATA_DIR / "fixture_sigma_kinds.json"
    write_universe(universe, sigma_path, kinds_path)
    print(f"wrote {sigma_path} and {kinds_path}")


if __name__ == "__main__":
    main()
