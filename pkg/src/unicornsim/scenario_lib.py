"""Reproducible scenario definitions and runners.

A Composition specifies portfolio size plus per-kind mix fractions; realizing
it converts fractions to integer counts (largest-remainder, so counts always
sum to N) and hands out the three attribute kinds by independent seeded
shuffles, deliberately avoiding any engineered cross-attribute correlation.
Runners chain probability assignment, calibration, and simulation, and stamp
every result with full provenance (seed, iterations, correlation source) so
reruns are bit-identical.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidComposition, ValidationError
from .factor_model import DEFAULT_TARGET_RHO, LoadingSet, build_loadings
from .mc_engine import (
    ModelMode,
    OutcomeDistribution,
    PortfolioStats,
    SimConfig,
    distribution_stats,
    simulate,
)
from .prob_assigner import AssignmentRules, assign_probabilities, default_rules
from .universe import (
    DEFAULT_KIND_WEIGHTS,
    SECTOR_ONLY_WEIGHTS,
    Affiliation,
    Deal,
    FactorUniverse,
    KindWeights,
    Portfolio,
    cross_product_affiliations,
)

#: Mix fractions must sum to one within this tolerance.
MIX_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Composition:
    """Portfolio size plus mix fractions per attribute kind."""

    label: str
    size: int
    founder_mix: dict[str, float]
    sector_mix: dict[str, float]
    geography_mix: dict[str, float]

    def __post_init__(self):
        if self.size < 1:
            raise InvalidComposition(f"{self.label}: size must be >= 1, got {self.size}")
        for name, mix in (
            ("founder_mix", self.founder_mix),
            ("sector_mix", self.sector_mix),
            ("geography_mix", self.geography_mix),
        ):
            if not mix:
                raise InvalidComposition(f"{self.label}: {name} is empty")
            if any(f < 0 for f in mix.values()):
                raise InvalidComposition(f"{self.label}: {name} has negative fractions")
            total = sum(mix.values())
            if abs(total - 1.0) > MIX_SUM_TOLERANCE:
                raise InvalidComposition(
                    f"{self.label}: {name} sums to {total!r}, expected 1"
                )

    def resized(self, size: int) -> "Composition":
        return Composition(
            label=self.label,
            size=size,
            founder_mix=dict(self.founder_mix),
            sector_mix=dict(self.sector_mix),
            geography_mix=dict(self.geography_mix),
        )


def largest_remainder_counts(mix: Mapping[str, float], n: int) -> dict[str, int]:
    """Integer counts per label summing exactly to n, each within 1 of n*f."""
    labels = list(mix.keys())
    quotas = np.array([mix[lab] * n for lab in labels])
    counts = np.floor(quotas).astype(int)
    remainder = n - int(counts.sum())
    # Ties break by larger fractional part, then by mix order.
    order = sorted(range(len(labels)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:remainder]:
        counts[i] += 1
    return {lab: int(c) for lab, c in zip(labels, counts)}


def realize_portfolio(
    comp: Composition, stream: np.random.Generator
) -> list[Affiliation]:
    """Concrete deal affiliations for a composition.

    Counts per kind come from largest-remainder rounding; each kind's label
    list is then shuffled by its own child stream, so a deal's sector carries
    no information about its geography or founder type beyond the marginals.
    """
    columns = []
    kind_streams = stream.spawn(3)
    for mix, kind_stream in zip(
        (comp.sector_mix, comp.geography_mix, comp.founder_mix), kind_streams
    ):
        counts = largest_remainder_counts(mix, comp.size)
        labels = [lab for lab, c in counts.items() for _ in range(c)]
        columns.append(kind_stream.permutation(labels))
    sectors, geographies, founders = columns
    return [
        Affiliation(sector=sectors[i], geography=geographies[i], founder=founders[i])
        for i in range(comp.size)
    ]


MODE_WEIGHTS: dict[ModelMode, KindWeights] = {
    ModelMode.SINGLE_FACTOR_SECTOR: SECTOR_ONLY_WEIGHTS,
    ModelMode.MULTI_FACTOR: DEFAULT_KIND_WEIGHTS,
}


def loadings_for_mode(
    deals: Sequence[Deal],
    universe: FactorUniverse,
    mode: ModelMode,
    calibration_universe: Sequence | None = None,
    target_rho: float = DEFAULT_TARGET_RHO,
    weights: KindWeights | None = None,
) -> LoadingSet | None:
    """Loadings appropriate to a model mode (None for the uncorrelated mode).

    Single-factor mode rebuilds affiliations with sector-only weights so only
    sector factors carry dependence; each mode recalibrates its own w0
    against the same calibration universe.
    """
    if mode == ModelMode.UNCORRELATED:
        return None
    if weights is None:
        weights = MODE_WEIGHTS[mode]
    return build_loadings(deals, universe, weights, calibration_universe, target_rho)


def _stream(seed: int, *scope: object) -> np.random.Generator:
    """Independent named substream: hash the scope words into the seed."""
    tag = hashlib.sha256(("/".join(str(s) for s in scope)).encode()).digest()[:8]
    return np.random.default_rng([seed, int.from_bytes(tag, "little")])


@dataclass(frozen=True)
class Provenance:
    """Everything needed to reproduce a scenario result bit-exactly."""

    seed: int
    iterations: int
    sigma_sha256: str
    engine_version: str


@dataclass(frozen=True)
class ScenarioResult:
    label: str
    mode_stats: dict[ModelMode, PortfolioStats]
    mode_distributions: dict[ModelMode, OutcomeDistribution]
    portfolio: Portfolio
    provenance: Provenance


def sigma_digest(universe: FactorUniverse) -> str:
    """Stable digest of the correlation matrix for provenance stamps."""
    blob = universe.sigma.tobytes() + "|".join(universe.labels).encode()
    return hashlib.sha256(blob).hexdigest()


def build_portfolio(
    comp: Composition,
    rules: AssignmentRules,
    seed: int,
) -> Portfolio:
    """Composition -> affiliations -> probabilities, all seeded.

    Substreams are scoped by portfolio size but not by label: two same-size
    compositions see the same shuffle and probability draws (common random
    numbers), so cross-portfolio comparisons isolate composition effects
    instead of draw noise.  Portfolios with identical founder sequences end
    up with identical base probabilities.
    """
    affiliations = realize_portfolio(comp, _stream(seed, "attributes", comp.size))
    deals = assign_probabilities(
        affiliations, rules, _stream(seed, "probabilities", comp.size)
    )
    deals = [
        Deal(
            id=f"{comp.label}-{i:03d}",
            p=d.p,
            sector=d.sector,
            geography=d.geography,
            founder=d.founder,
        )
        for i, d in enumerate(deals)
    ]
    return Portfolio(label=comp.label, deals=tuple(deals))


def run_scenario(
    comp: Composition,
    universe: FactorUniverse,
    modes: Sequence[ModelMode],
    iterations: int,
    seed: int,
    rules: AssignmentRules | None = None,
    workers: int = 1,
    target_rho: float = DEFAULT_TARGET_RHO,
    engine_version: str | None = None,
) -> ScenarioResult:
    """Assign, calibrate, and simulate one composition under several modes."""
    if engine_version is None:
        from . import __version__ as engine_version
    rules = rules or default_rules()
    portfolio = build_portfolio(comp, rules, seed)
    calibration = cross_product_affiliations(universe)
    mode_stats: dict[ModelMode, PortfolioStats] = {}
    mode_distributions: dict[ModelMode, OutcomeDistribution] = {}
    for mode in modes:
        loadings = loadings_for_mode(
            portfolio.deals, universe, mode, calibration, target_rho
        )
        config = SimConfig(
            iterations=iterations, seed=seed, model_mode=mode, workers=workers
        )
        dist = simulate(portfolio, loadings, universe, config)
        mode_distributions[mode] = dist
        mode_stats[mode] = distribution_stats(dist)
    return ScenarioResult(
        label=comp.label,
        mode_stats=mode_stats,
        mode_distributions=mode_distributions,
        portfolio=portfolio,
        provenance=Provenance(
            seed=seed,
            iterations=iterations,
            sigma_sha256=sigma_digest(universe),
            engine_version=engine_version,
        ),
    )


def run_baseline_comparison(
    comps: Sequence[Composition],
    universe: FactorUniverse,
    iterations: int,
    seed: int,
    rules: AssignmentRules | None = None,
    workers: int = 1,
) -> list[ScenarioResult]:
    """Full-model comparison across portfolios (the six reporting statistics)."""
    labels = [c.label for c in comps]
    if len(set(labels)) != len(labels):
        raise ValidationError(f"duplicate portfolio labels: {labels}")
    return [
        run_scenario(
            comp, universe, [ModelMode.MULTI_FACTOR], iterations, seed, rules, workers
        )
        for comp in comps
    ]


def homogeneous_composition(p_label: str, size: int = 40) -> Composition:
    """Identical AI/CA/Repeat deals; the concentrated stress case."""
    return Composition(
        label=p_label,
        size=size,
        founder_mix={"Repeat": 1.0},
        sector_mix={"AI": 1.0},
        geography_mix={"CA": 1.0},
    )


def run_probability_sweep(
    p_values: Sequence[float],
    universe: FactorUniverse,
    iterations: int,
    seed: int,
    n: int = 40,
    modes: Sequence[ModelMode] = (ModelMode.UNCORRELATED, ModelMode.MULTI_FACTOR),
    workers: int = 1,
) -> dict[ModelMode, list[dict]]:
    """Homogeneous-portfolio sensitivity to the standalone success probability.

    Deals are identical same-sector deals at each probability; the returned
    series per mode carry (p, E[U], the three tail probabilities), plot-ready.
    """
    calibration = cross_product_affiliations(universe)
    series: dict[ModelMode, list[dict]] = {mode: [] for mode in modes}
    for p in p_values:
        deals = tuple(
            Deal(id=f"p{p:g}-{i:03d}", p=p, sector="AI", geography="CA", founder="Repeat")
            for i in range(n)
        )
        portfolio = Portfolio(label=f"p={p:g}", deals=deals)
        for mode in modes:
            loadings = loadings_for_mode(deals, universe, mode, calibration)
            config = SimConfig(iterations=iterations, seed=seed, model_mode=mode, workers=workers)
            stats = distribution_stats(simulate(portfolio, loadings, universe, config))
            series[mode].append(
                {
                    "p": p,
                    "expected_u": stats.expected_u,
                    "p_u_eq_0": stats.p_u_eq_0,
                    "p_u_le_1": stats.p_u_le_1,
                    "p_u_le_2": stats.p_u_le_2,
                }
            )
    return series


def run_size_sweep(
    comps: Sequence[Composition],
    sizes: Sequence[int],
    universe: FactorUniverse,
    iterations: int,
    seed: int,
    rules: AssignmentRules | None = None,
    mode: ModelMode = ModelMode.MULTI_FACTOR,
    workers: int = 1,
    assignment_replicates: int = 1,
) -> dict[str, list[dict]]:
    """E[U] and P(U=0) as portfolio size varies, composition held fixed.

    Each size re-realizes the composition and re-assigns probabilities.  With
    ``assignment_replicates > 1`` the statistics are averaged over that many
    independent assignment draws (each simulated at ``iterations``), which
    suppresses the draw noise that otherwise masks the shape of the curves.
    """
    rules = rules or default_rules()
    calibration = cross_product_affiliations(universe)
    out: dict[str, list[dict]] = {}
    for comp in comps:
        points = []
        for size in sizes:
            resized = comp.resized(size)
            expected_u: list[float] = []
            p_zero: list[float] = []
            for replicate in range(assignment_replicates):
                rep_seed = seed if assignment_replicates == 1 else seed + 1_000_003 * replicate
                portfolio = build_portfolio(resized, rules, rep_seed)
                loadings = loadings_for_mode(portfolio.deals, universe, mode, calibration)
                config = SimConfig(
                    iterations=iterations, seed=rep_seed, model_mode=mode, workers=workers
                )
                stats = distribution_stats(simulate(portfolio, loadings, universe, config))
                expected_u.append(stats.expected_u)
                p_zero.append(stats.p_u_eq_0)
            point = {
                "size": size,
                "expected_u": float(np.mean(expected_u)),
                "p_u_eq_0": float(np.mean(p_zero)),
            }
            if assignment_replicates > 1:
                # standard errors of the replicate means (assignment noise
                # plus Monte Carlo noise together)
                r = assignment_replicates
                point["se_expected_u"] = float(np.std(expected_u, ddof=1) / math.sqrt(r))
                point["se_p_u_eq_0"] = float(np.std(p_zero, ddof=1) / math.sqrt(r))
            points.append(point)
        out[comp.label] = points
    return out


def run_diversification_limit(
    universe: FactorUniverse,
    iterations: int,
    seed: int,
    workers: int = 1,
) -> list[ScenarioResult]:
    """Sector reallocation study with healthcare treated as high-growth.

    Runs the even, concentrated-in-AI, and tilted-to-healthcare sector
    allocations on the selective portfolio's founder/geography base, under
    rules that give healthcare the same nudge as the other growth sectors.
    """
    from .presets import diversification_compositions
    from .prob_assigner import healthcare_highgrowth_rules

    return run_baseline_comparison(
        diversification_compositions(),
        universe,
        iterations,
        seed,
        rules=healthcare_highgrowth_rules(),
        workers=workers,
    )
