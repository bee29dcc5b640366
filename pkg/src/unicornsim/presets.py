"""Shipped portfolio compositions used by demos, the CLI, and the service.

Four baseline 40-deal portfolios:

* A — industry average: mostly first-time founders, broad sector and
  geography spread.
* B — fully concentrated: all AI, all California, all repeat founders.
* C — fully diverse: even across founder types, sectors, and geographies.
* D — selective but diversified: repeat founders only, growth sectors,
  two geographies.

Plus the sector-reallocation variants sharing D's founder/geography base:

* E — even across four sectors.
* F — overweight AI (the most correlated sector).
* G — overweight healthcare (the least correlated sector).
"""
from __future__ import annotations

from .scenario_lib import Composition


def baseline_compositions(size: int = 40) -> list[Composition]:
    return [
        Composition(
            label="A",
            size=size,
            founder_mix={"Repeat": 0.30, "FirstTime": 0.70},
            sector_mix={
                "AI": 0.30,
                "FinTech": 0.15,
                "Healthcare": 0.15,
                "Consumer": 0.15,
                "SaaS": 0.25,
            },
            geography_mix={"CA": 0.40, "NY": 0.20, "MA": 0.10, "OtherUS": 0.30},
        ),
        Composition(
            label="B",
            size=size,
            founder_mix={"Repeat": 1.0},
            sector_mix={"AI": 1.0},
            geography_mix={"CA": 1.0},
        ),
        Composition(
            label="C",
            size=size,
            founder_mix={"Repeat": 0.50, "FirstTime": 0.50},
            sector_mix={
                "AI": 0.20,
                "FinTech": 0.20,
                "Healthcare": 0.20,
                "Consumer": 0.20,
                "SaaS": 0.20,
            },
            geography_mix={"CA": 0.25, "NY": 0.25, "MA": 0.25, "OtherUS": 0.25},
        ),
        Composition(
            label="D",
            size=size,
            founder_mix={"Repeat": 1.0},
            sector_mix={"AI": 0.35, "FinTech": 0.325, "SaaS": 0.325},
            geography_mix={"CA": 0.50, "NY": 0.50},
        ),
    ]


def diversification_compositions(size: int = 40) -> list[Composition]:
    base_founder = {"Repeat": 1.0}
    base_geo = {"CA": 0.50, "NY": 0.50}
    return [
        Composition(
            label="E",
            size=size,
            founder_mix=dict(base_founder),
            sector_mix={"AI": 0.25, "FinTech": 0.25, "Healthcare": 0.25, "SaaS": 0.25},
            geography_mix=dict(base_geo),
        ),
        Composition(
            label="F",
            size=size,
            founder_mix=dict(base_founder),
            sector_mix={"AI": 0.40, "FinTech": 0.20, "Healthcare": 0.20, "SaaS": 0.20},
            geography_mix=dict(base_geo),
        ),
        Composition(
            label="G",
            size=size,
            founder_mix=dict(base_founder),
            sector_mix={"AI": 0.20, "FinTech": 0.20, "Healthcare": 0.40, "SaaS": 0.20},
            geography_mix=dict(base_geo),
        ),
    ]


def all_preset_compositions(size: int = 40) -> list[Composition]:
    return baseline_compositions(size) + diversification_compositions(size)
