"""Correlated venture portfolio outlier simulation.

A latent-factor Monte Carlo engine for the distribution of outlier ("unicorn")
counts in a portfolio of deals whose Boolean outcomes are correlated through
shared sector, geography, and founder-type factors, plus the calibration,
correlation-estimation, scenario, and reporting machinery around it.
"""

__version__ = "0.1.0"

from .analytic_oracles import poisson_binomial_pmf, single_factor_homogeneous
from .corr_estimator import ensure_psd, estimate_correlation, estimate_universe
from .factor_model import (
    LoadingSet,
    build_affiliation,
    build_loadings,
    calibrate_w0,
    exceedance_threshold,
    normalize_loading,
    pairwise_correlation,
)
from .mc_engine import (
    CholeskyFactor,
    ModelMode,
    OutcomeDistribution,
    PortfolioStats,
    SimConfig,
    cholesky,
    distribution_stats,
    sample_factors,
    simulate,
)
from .prob_assigner import AssignmentRules, assign_probabilities, default_rules
from .universe import (
    DEFAULT_KIND_WEIGHTS,
    Affiliation,
    Deal,
    FactorUniverse,
    Group,
    GroupKind,
    KindWeights,
    Portfolio,
    cross_product_affiliations,
    read_universe,
    write_universe,
)

__all__ = [
    "__version__",
    "Affiliation",
    "AssignmentRules",
    "CholeskyFactor",
    "Deal",
    "DEFAULT_KIND_WEIGHTS",
    "FactorUniverse",
    "Group",
    "GroupKind",
    "KindWeights",
    "LoadingSet",
    "ModelMode",
    "OutcomeDistribution",
    "Portfolio",
    "PortfolioStats",
    "SimConfig",
    "assign_probabilities",
    "build_affiliation",
    "build_loadings",
    "calibrate_w0",
    "cholesky",
    "cross_product_affiliations",
    "default_rules",
    "distribution_stats",
    "ensure_psd",
    "estimate_correlation",
    "estimate_universe",
    "exceedance_threshold",
    "normalize_loading",
    "pairwise_correlation",
    "poisson_binomial_pmf",
    "read_universe",
    "sample_factors",
    "simulate",
    "single_factor_homogeneous",
    "write_universe",
]
