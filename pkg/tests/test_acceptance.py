"""Acceptance suite: every release gate runs here at its stated tolerance.

Each criterion prints one ``[PASS]``/``[FAIL]`` line (visible with ``pytest
-v -s`` or in the captured output of a failing run).  The heavy shared
simulations live in module fixtures so the suite stays within a few minutes.
"""
import math
import time

import numpy as np
import pytest

from unicornsim.analytic_oracles import (
    poisson_binomial_cdf,
    single_factor_homogeneous,
)
from unicornsim.factor_model import LoadingSet, build_loadings
from unicornsim.mc_engine import (
    ModelMode,
    SimConfig,
    distribution_stats,
    simulate,
)
from unicornsim.presets import baseline_compositions
from unicornsim.prob_assigner import assign_probabilities, default_rules
from unicornsim.reports import ScenarioDocument, canonical_json_bytes, simulate_report
from unicornsim.scenario_lib import (
    build_portfolio,
    run_diversification_limit,
    run_size_sweep,
)
from unicornsim.universe import (
    DEFAULT_KIND_WEIGHTS,
    SECTOR_ONLY_WEIGHTS,
    Affiliation,
    Deal,
    FactorUniverse,
    Group,
    GroupKind,
    Portfolio,
)

SEED = 20260809
M_FULL = 1_000_000
P_GRID = (0.02, 0.04, 0.08, 0.16)
WORKERS = 2


def criterion(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def concentrated_portfolio(p: float, n: int = 40) -> Portfolio:
    deals = tuple(Deal(f"c{i}", p, "AI", "CA", "Repeat") for i in range(n))
    return Portfolio(label=f"conc-{p:g}", deals=deals)


def diversified_portfolio(p: float, universe, n: int = 40) -> Portfolio:
    sectors = universe.labels_of_kind(GroupKind.SECTOR)
    deals = tuple(
        Deal(f"v{i}", p, sectors[i % len(sectors)], "CA", "Repeat") for i in range(n)
    )
    return Portfolio(label=f"div-{p:g}", deals=deals)


def histogram_mean_se(dist):
    support = np.arange(dist.counts.size, dtype=float)
    pmf = dist.pmf()
    mean = float(support @ pmf)
    var = float(((support - mean) ** 2) @ pmf)
    return mean, math.sqrt(var / dist.iterations)


def tail_prob_se(value: float, m: int) -> float:
    return math.sqrt(max(value * (1.0 - value), 1e-12) / m)


def conditional_mean_se(dist, k: int):
    counts = dist.counts
    tail = int(counts[k:].sum())
    if tail == 0:
        return None, None
    support = np.arange(counts.size, dtype=float)[k:]
    pmf = counts[k:] / tail
    mean = float(support @ pmf)
    var = float(((support - mean) ** 2) @ pmf)
    return mean, math.sqrt(var / tail)


@pytest.fixture(scope="module")
def concentrated_runs(fixture_universe):
    """(p, mode) -> OutcomeDistribution at M=1e6 for the 40-deal homogeneous
    same-sector portfolio; shared by several criteria."""
    runs = {}
    loadings_by_mode = {
        ModelMode.SINGLE_FACTOR_SECTOR: build_loadings(
            concentrated_portfolio(0.5).deals, fixture_universe, SECTOR_ONLY_WEIGHTS
        ),
        ModelMode.MULTI_FACTOR: build_loadings(
            concentrated_portfolio(0.5).deals, fixture_universe, DEFAULT_KIND_WEIGHTS
        ),
    }
    for p in P_GRID:
        portfolio = concentrated_portfolio(p)
        for mode in ModelMode:
            loadings = loadings_by_mode.get(mode)
            config = SimConfig(iterations=M_FULL, seed=SEED, model_mode=mode, workers=WORKERS)
            runs[(p, mode)] = simulate(portfolio, loadings, fixture_universe, config)
    return runs


def test_c01_table1_uncorrelated_column(fixture_universe):
    portfolio = concentrated_portfolio(0.04)
    config = SimConfig(
        iterations=M_FULL, seed=SEED, model_mode=ModelMode.UNCORRELATED, workers=WORKERS
    )
    start = time.perf_counter()
    dist = simulate(portfolio, None, None, config)
    elapsed = time.perf_counter() - start
    cdf = dist.cdf()
    exact = poisson_binomial_cdf([0.04] * 40)
    gaps = [abs(cdf[k] - exact[k]) for k in (0, 1, 2)]
    ok = max(gaps) < 0.002 and elapsed < 10.0
    criterion(
        "C01 uncorrelated Table-1 column",
        ok,
        f"P0/P<=1/P<=2 gaps to exact binomial = "
        f"{', '.join(f'{g*100:.3f}pp' for g in gaps)} (tol 0.2pp); "
        f"runtime {elapsed:.2f}s (limit 10s)",
    )


def test_c02_uncorrelated_probability_sensitivity(concentrated_runs):
    worst = 0.0
    for p in P_GRID:
        cdf = concentrated_runs[(p, ModelMode.UNCORRELATED)].cdf()
        exact = poisson_binomial_cdf([p] * 40)
        worst = max(worst, max(abs(cdf[k] - exact[k]) for k in (0, 1, 2)))
    criterion(
        "C02 uncorrelated sensitivity (2/4/8/16%)",
        worst < 0.002,
        f"max tail-probability gap to closed form = {worst*100:.3f}pp (tol 0.2pp)",
    )


def test_c03_expected_count_invariance(concentrated_runs):
    worst_z = 0.0
    for p in P_GRID:
        target = 40 * p
        for mode in ModelMode:
            mean, se = histogram_mean_se(concentrated_runs[(p, mode)])
            worst_z = max(worst_z, abs(mean - target) / se)
    criterion(
        "C03 E[U] invariance across modes",
        worst_z < 3.0,
        f"max |E[U] - N*p| = {worst_z:.2f} MC standard errors (limit 3)",
    )


def test_c04_quadrature_oracle_equivalence():
    universe = FactorUniverse(
        groups=(
            Group("S1", GroupKind.SECTOR),
            Group("G1", GroupKind.GEOGRAPHY),
            Group("F1", GroupKind.FOUNDER_TYPE),
        ),
        sigma=np.eye(3),
    )
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for case in range(20):
        p = float(rng.uniform(0.01, 0.2))
        rho = float(rng.uniform(0.0, 0.5))
        n = int(rng.integers(10, 61))
        deals = tuple(Deal(f"q{i}", p, "S1", "G1", "F1") for i in range(n))
        portfolio = Portfolio(label=f"case{case}", deals=deals)
        b = np.zeros((n, 3))
        b[:, 0] = 1.0
        loadings = LoadingSet(b=b, w0=math.sqrt(rho), rho_bar_prime=1.0)
        config = SimConfig(
            iterations=M_FULL,
            seed=SEED + case,
            model_mode=ModelMode.SINGLE_FACTOR_SECTOR,
            workers=WORKERS,
        )
        cdf = simulate(portfolio, loadings, universe, config).cdf()
        for k in (0, 1, 2):
            oracle = single_factor_homogeneous(p, rho, n, k)
            worst = max(worst, abs(cdf[k] - oracle))
    criterion(
        "C04 MC vs quadrature oracle (20 randomized cases)",
        worst < 0.003,
        f"max tail-probability gap = {worst*100:.3f}pp (tol 0.3pp)",
    )


def test_c05_poisson_binomial_equivalence(fixture_universe):
    affiliations = [
        Affiliation(
            sector=["AI", "FinTech", "Healthcare", "Consumer", "SaaS"][i % 5],
            geography=["CA", "NY", "MA", "OtherUS"][i % 4],
            founder=["FirstTime", "Repeat"][i % 2],
        )
        for i in range(40)
    ]
    deals = assign_probabilities(
        affiliations, default_rules(), np.random.default_rng(SEED)
    )
    portfolio = Portfolio(label="hetero", deals=tuple(deals))
    loadings = build_loadings(
        portfolio.deals, fixture_universe, DEFAULT_KIND_WEIGHTS, target_rho=0.0
    )
    assert loadings.w0 == 0.0
    config = SimConfig(
        iterations=M_FULL, seed=SEED, model_mode=ModelMode.MULTI_FACTOR, workers=WORKERS
    )
    dist = simulate(portfolio, loadings, fixture_universe, config)
    exact = poisson_binomial_cdf(portfolio.probabilities)
    sup = float(np.abs(dist.cdf() - exact).max())
    criterion(
        "C05 Poisson-binomial equivalence at w0=0",
        sup < 0.002,
        f"CDF sup-distance = {sup:.5f} (tol 0.002)",
    )


def test_c06_correlation_direction(fixture_universe, concentrated_runs):
    p = 0.04
    unc = concentrated_runs[(p, ModelMode.UNCORRELATED)].cdf()[0]
    sfs_conc = concentrated_runs[(p, ModelMode.SINGLE_FACTOR_SECTOR)].cdf()[0]
    div = diversified_portfolio(p, fixture_universe)
    p0 = {}
    for mode, weights in (
        (ModelMode.SINGLE_FACTOR_SECTOR, SECTOR_ONLY_WEIGHTS),
        (ModelMode.MULTI_FACTOR, DEFAULT_KIND_WEIGHTS),
    ):
        loadings = build_loadings(div.deals, fixture_universe, weights)
        config = SimConfig(iterations=M_FULL, seed=SEED, model_mode=mode, workers=WORKERS)
        p0[mode] = simulate(div, loadings, fixture_universe, config).cdf()[0]
    ok = (
        unc < sfs_conc
        and p0[ModelMode.SINGLE_FACTOR_SECTOR] < sfs_conc
        and p0[ModelMode.MULTI_FACTOR] > p0[ModelMode.SINGLE_FACTOR_SECTOR]
    )
    criterion(
        "C06 correlation direction orderings",
        ok,
        f"P0: uncorrelated {unc:.4f} < single-factor concentrated {sfs_conc:.4f}; "
        f"single-factor diversified {p0[ModelMode.SINGLE_FACTOR_SECTOR]:.4f} < concentrated; "
        f"multi-factor diversified {p0[ModelMode.MULTI_FACTOR]:.4f} > single-factor diversified",
    )


def _margin_status(name: str, margin: float, se: float, notes: list) -> bool:
    """Margin must be positive beyond 3 SE, or it is flagged as within noise."""
    if margin > 3.0 * se:
        notes.append(f"{name} margin {margin:+.4f} ({margin/se:.1f} se)")
        return True
    if margin >= -3.0 * se:
        notes.append(f"{name} within noise ({margin:+.4f}, {abs(margin)/se:.1f} se) [flagged]")
        return True
    notes.append(f"{name} VIOLATED ({margin:+.4f}, {margin/se:.1f} se)")
    return False


def test_c07_baseline_comparison_orderings(fixture_universe):
    runs = {}
    for comp in baseline_compositions():
        portfolio = build_portfolio(comp, default_rules(), SEED)
        loadings = build_loadings(portfolio.deals, fixture_universe, DEFAULT_KIND_WEIGHTS)
        config = SimConfig(
            iterations=M_FULL, seed=SEED, model_mode=ModelMode.MULTI_FACTOR, workers=WORKERS
        )
        runs[comp.label] = simulate(portfolio, loadings, fixture_universe, config)

    p0 = {label: dist.cdf()[0] for label, dist in runs.items()}
    p0_se = {label: tail_prob_se(p0[label], M_FULL) for label in runs}
    cond1, cond1_se = {}, {}
    for label, dist in runs.items():
        cond1[label], cond1_se[label] = conditional_mean_se(dist, 1)

    notes: list = []
    ok = True
    # concentrated/selective group beats the broad group on downside
    margin = min(p0["A"], p0["C"]) - max(p0["B"], p0["D"])
    se = math.sqrt(max(p0_se.values()) ** 2 * 2)
    ok &= _margin_status("P0 {B,D} < {A,C}", margin, se, notes)
    # and on conditional upside
    margin = min(cond1["B"], cond1["D"]) - max(cond1["A"], cond1["C"])
    se = math.sqrt(max(cond1_se.values()) ** 2 * 2)
    ok &= _margin_status("E[U|U>=1] {B,D} > {A,C}", margin, se, notes)
    # diversification lowers joint failure: D <= B on P0
    margin = p0["B"] - p0["D"]
    se = math.sqrt(p0_se["B"] ** 2 + p0_se["D"] ** 2)
    ok &= _margin_status("P0 D <= B", margin, se, notes)
    # concentration clusters success: B >= D on all conditional means
    for k in (1, 2, 3):
        mean_b, se_b = conditional_mean_se(runs["B"], k)
        mean_d, se_d = conditional_mean_se(runs["D"], k)
        margin = mean_b - mean_d
        se = math.sqrt(se_b**2 + se_d**2)
        ok &= _margin_status(f"E[U|U>={k}] B >= D", margin, se, notes)
    criterion("C07 baseline-comparison orderings", ok, "; ".join(notes))


def test_c08_diversification_limit_ordering(fixture_universe):
    m = 10_000_000
    results = run_diversification_limit(fixture_universe, m, seed=SEED, workers=WORKERS)
    p0 = {r.label: r.mode_stats[ModelMode.MULTI_FACTOR].p_u_eq_0 for r in results}
    se = max(tail_prob_se(v, m) for v in p0.values())
    pair_se = se * math.sqrt(2.0)
    ok = p0["G"] < p0["E"] < p0["F"]
    criterion(
        "C08 diversification-limit ordering at M=1e7",
        ok,
        f"P0: G {p0['G']:.5f} < E {p0['E']:.5f} < F {p0['F']:.5f}; "
        f"achieved per-estimate se {se:.6f}, pairwise se {pair_se:.6f}; "
        f"margins E-G {p0['E']-p0['G']:+.5f} ({(p0['E']-p0['G'])/pair_se:.1f} se), "
        f"F-E {p0['F']-p0['E']:+.5f} ({(p0['F']-p0['E'])/pair_se:.1f} se)",
    )


def test_c09_size_sweep_shapes(fixture_universe):
    comps = [baseline_compositions()[0], baseline_compositions()[3]]
    sizes = [5, 10, 15, 20, 25, 30, 35, 40]
    series = run_size_sweep(
        comps,
        sizes,
        fixture_universe,
        20_000,
        seed=SEED,
        workers=WORKERS,
        assignment_replicates=144,
    )
    notes = []
    ok = True

    # expected count grows ~linearly for both portfolios
    for label in ("A", "D"):
        values = np.array([pt["expected_u"] for pt in series[label]])
        x = np.array(sizes, dtype=float)
        coeffs = np.polyfit(x, values, 1)
        residuals = values - np.polyval(coeffs, x)
        r_squared = 1.0 - float((residuals**2).sum() / ((values - values.mean()) ** 2).sum())
        ok &= r_squared > 0.999
        notes.append(f"E[U] linear fit {label}: R^2={r_squared:.5f}")

    # zero-unicorn probability is nonincreasing with diminishing decrements
    for label in ("A", "D"):
        p0 = np.array([pt["p_u_eq_0"] for pt in series[label]])
        se = np.array([pt["se_p_u_eq_0"] for pt in series[label]])
        strictly_down = bool(np.all(np.diff(p0) < 0.0))
        second = p0[2:] - 2.0 * p0[1:-1] + p0[:-2]
        second_se = np.sqrt(se[2:] ** 2 + 4.0 * se[1:-1] ** 2 + se[:-2] ** 2)
        convex_within_noise = bool(np.all(second >= -3.0 * second_se))
        ok &= strictly_down and convex_within_noise
        notes.append(
            f"P0 {label}: max decrement {np.diff(p0).max():+.4f} (all negative: {strictly_down}), "
            f"min second difference z={float((second/second_se).min()):.1f} (limit -3)"
        )

    # the selective portfolio pulls away as size grows
    gap = np.array(
        [d["expected_u"] - a["expected_u"] for a, d in zip(series["A"], series["D"])]
    )
    gap_se = np.array(
        [
            math.sqrt(a["se_expected_u"] ** 2 + d["se_expected_u"] ** 2)
            for a, d in zip(series["A"], series["D"])
        ]
    )
    increments = np.diff(gap)
    increment_se = np.sqrt(gap_se[:-1] ** 2 + gap_se[1:] ** 2)
    monotone_within_noise = bool(np.all(increments >= -3.0 * increment_se))
    total_widening = gap[-1] - gap[0]
    total_se = math.sqrt(gap_se[0] ** 2 + gap_se[-1] ** 2)
    ok &= monotone_within_noise and total_widening > 3.0 * total_se
    notes.append(
        f"A-D gap widens {gap[0]:.3f} -> {gap[-1]:.3f} "
        f"({total_widening/total_se:.1f} se); min increment z="
        f"{float((increments/increment_se).min()):.1f} (limit -3)"
    )
    criterion("C09 size-sweep shapes", ok, "; ".join(notes))


def test_c10_probability_assignment_means():
    rules = default_rules()
    n = 1_000_000
    stream = np.random.default_rng(SEED)
    first = assign_probabilities(
        [Affiliation("Healthcare", "MA", "FirstTime")] * n, rules, stream
    )
    first_mean = float(np.mean([d.p for d in first]))
    repeat = assign_probabilities(
        [Affiliation("Healthcare", "MA", "Repeat")] * n, rules, stream
    )
    repeat_mean = float(np.mean([d.p for d in repeat]))
    first_target = 0.001 + 0.119 / 7.0     # 1.80%
    repeat_target = 0.01 + 0.19 / 12.0     # 2.583%
    ok = abs(first_mean - first_target) < 2e-4 and abs(repeat_mean - repeat_target) < 3e-4
    criterion(
        "C10 probability-assignment means",
        ok,
        f"first-time mean {first_mean*100:.4f}% vs {first_target*100:.4f}% "
        f"(tol 0.02pp); repeat mean {repeat_mean*100:.4f}% vs {repeat_target*100:.4f}% (tol 0.03pp)",
    )


def test_c11_determinism_across_worker_counts(fixture_universe, data_dir):
    scenario = {
        "label": "determinism",
        "composition": {
            "size": 40,
            "founder_mix": {"Repeat": 1.0},
            "sector_mix": {"AI": 1.0},
            "geography_mix": {"CA": 1.0},
        },
        "probabilities": {"homogeneous_p": 0.04},
        "mode": "multi_factor",
        "iterations": M_FULL,
        "seed": SEED,
    }
    sigma_sha = "0" * 64
    payloads = []
    for workers in (1, 4, 16):
        report = simulate_report(
            ScenarioDocument(dict(scenario)), fixture_universe, sigma_sha, workers=workers
        )
        payloads.append(canonical_json_bytes(report))
    ok = payloads[0] == payloads[1] == payloads[2]
    criterion(
        "C11 determinism across 1/4/16 workers",
        ok,
        f"report bytes identical across worker counts ({len(payloads[0])} bytes)",
    )
