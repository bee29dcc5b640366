"""Monte Carlo engine for correlated unicorn-count distributions.

Each iteration draws a factor shock vector Z with covariance sigma (via a
lower-triangular factor L, Z = L X), plus one idiosyncratic standard normal
per deal, forms the latent return index

    A_i = w_i . Z + sqrt(1 - w_i' sigma w_i) * eps_i,

and counts deals whose index exceeds the threshold implied by their
standalone success probability.  The histogram of those counts over all
iterations is the outcome distribution.

Reproducibility contract
------------------------
Randomness is drawn from counter-based Philox streams keyed by the run seed.
Iterations are processed in fixed blocks of ``CHUNK_ROWS``; block c uses the
stream ``Philox(key=seed, counter=c << 128)`` and fills, in order, the factor
normals (rows x n_factors, correlated modes only) and then the idiosyncratic
normals (rows x n_deals) using numpy's ziggurat sampler.  The mapping from
(seed, iteration index) to random variates is therefore a pure function,
independent of how blocks are scheduled across workers, and histogram merging
is exact integer addition, so any worker count yields identical results.
The block size and draw order are fixed per release; changing either changes
the bit-exact output stream.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InvalidLoading, NotPSD, ValidationError
from .factor_model import LoadingSet, exceedance_threshold
from .universe import FactorUniverse, Portfolio

#: Iterations per deterministic random block.  Part of the reproducibility
#: contract; do not make this configurable.
CHUNK_ROWS = 65536

#: Diagonal pivots below -NOT_PSD_TOLERANCE mean the matrix was never repaired.
NOT_PSD_TOLERANCE = 1e-10

#: Reconstruction bound for a valid factor: max|L L' - sigma| <= this.
FACTOR_RECONSTRUCTION_TOLERANCE = 1e-8

#: Idiosyncratic variances in [-IDIO_CLAMP_TOLERANCE, 0) clamp to zero;
#: anything lower is an invalid loading.
IDIO_CLAMP_TOLERANCE = 1e-12


class ModelMode(str, Enum):
    """Which dependence channels the simulation carries."""

    UNCORRELATED = "uncorrelated"
    SINGLE_FACTOR_SECTOR = "single_factor_sector"
    MULTI_FACTOR = "multi_factor"


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular L with L L' reconstructing the correlation matrix."""

    L: np.ndarray

    def __post_init__(self):
        L = np.asarray(self.L, dtype=float).copy()
        L.setflags(write=False)
        object.__setattr__(self, "L", L)


def cholesky(sigma: np.ndarray) -> CholeskyFactor:
    """Lower-triangular factorization tolerating singular (PSD) matrices.

    Exactly-singular correlation matrices (e.g. duplicated groups) get a zero
    column at the dependent position.  A diagonal pivot below
    ``-NOT_PSD_TOLERANCE`` raises :class:`NotPSD`: the input was indefinite
    and should have gone through ``corr_estimator.ensure_psd`` first.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {sigma.shape}")
    if not np.allclose(sigma, sigma.T, atol=1e-12):
        raise ValidationError("matrix must be symmetric")
    n = sigma.shape[0]
    L = np.zeros_like(sigma)
    for j in range(n):
        pivot = sigma[j, j] - L[j, :j] @ L[j, :j]
        if pivot < -NOT_PSD_TOLERANCE:
            raise NotPSD(
                f"pivot {pivot:.3e} at column {j}; matrix is not positive "
                "semidefinite (repair with ensure_psd)"
            )
        if pivot <= 0.0:
            # Singular direction: the column is linearly dependent on earlier
            # ones; a zero column keeps L L' as the closest representable PSD.
            continue
        L[j, j] = math.sqrt(pivot)
        if j + 1 < n:
            L[j + 1 :, j] = (sigma[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return CholeskyFactor(L=L)


def sample_factors(factor: CholeskyFactor, stream: np.random.Generator) -> np.ndarray:
    """One correlated factor draw: Z = L X with X iid standard normal."""
    x = stream.standard_normal(factor.L.shape[0])
    return factor.L @ x


@dataclass(frozen=True)
class SimConfig:
    """Run parameters; (seed, iterations, mode) pin the random outcome."""

    iterations: int
    seed: int
    model_mode: ModelMode = ModelMode.MULTI_FACTOR
    workers: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ValidationError(f"iterations must be >= 1, got {self.iterations}")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class OutcomeDistribution:
    """Histogram over unicorn counts from M iterations of an N-deal portfolio.

    ``counts[u]`` is the number of iterations that produced exactly ``u``
    unicorns.  ``per_deal_successes`` tallies each deal's individual success
    count (kept for marginal-preservation checks; not part of the report
    schema).
    """

    counts: np.ndarray
    iterations: int
    n_deals: int
    per_deal_successes: np.ndarray | None = None

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64).copy()
        if counts.shape != (self.n_deals + 1,):
            raise ValidationError(
                f"histogram length {counts.shape} does not cover 0..{self.n_deals}"
            )
        if int(counts.sum()) != self.iterations:
            raise ValidationError("histogram mass does not equal iteration count")
        if np.any(counts < 0):
            raise ValidationError("histogram counts must be nonnegative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        if self.per_deal_successes is not None:
            tallies = np.asarray(self.per_deal_successes, dtype=np.int64).copy()
            tallies.setflags(write=False)
            object.__setattr__(self, "per_deal_successes", tallies)

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.counts) / self.iterations

    def pmf(self) -> np.ndarray:
        return self.counts / self.iterations


@dataclass(frozen=True)
class PortfolioStats:
    """The six reporting statistics plus the expected unicorn count.

    Conditional means are ``None`` when the conditioning event never occurred
    in the run; reports render that as an em dash rather than zero.
    """

    expected_u: float
    p_u_eq_0: float
    p_u_le_1: float
    p_u_le_2: float
    e_u_given_ge_1: float | None
    e_u_given_ge_2: float | None
    e_u_given_ge_3: float | None


def distribution_stats(dist: OutcomeDistribution) -> PortfolioStats:
    """Summary statistics straight off the empirical histogram."""
    m = dist.iterations
    counts = dist.counts
    support = np.arange(counts.size, dtype=float)
    expected_u = float(support @ counts) / m

    def tail_prob(k: int) -> float:
        return float(counts[: k + 1].sum()) / m

    def conditional_mean(k: int) -> float | None:
        tail_count = int(counts[k:].sum())
        if tail_count == 0:
            return None
        return float(support[k:] @ counts[k:]) / tail_count

    return PortfolioStats(
        expected_u=expected_u,
        p_u_eq_0=tail_prob(0),
        p_u_le_1=tail_prob(1),
        p_u_le_2=tail_prob(2),
        e_u_given_ge_1=conditional_mean(1),
        e_u_given_ge_2=conditional_mean(2),
        e_u_given_ge_3=conditional_mean(3),
    )


def _chunk_stream(seed: int, chunk_index: int) -> np.random.Generator:
    """Counter-based substream for one iteration block."""
    return np.random.Generator(
        np.random.Philox(key=np.uint64(seed), counter=chunk_index << 128)
    )


def idiosyncratic_scales(loadings: LoadingSet, sigma: np.ndarray) -> np.ndarray:
    """Per-deal sqrt(1 - w' sigma w), clamping tiny negative rounding."""
    w = loadings.w
    variances = 1.0 - np.einsum("ik,kl,il->i", w, sigma, w)
    too_low = variances < -IDIO_CLAMP_TOLERANCE
    if np.any(too_low):
        worst = float(variances.min())
        raise InvalidLoading(
            f"idiosyncratic variance {worst:.3e} is negative beyond tolerance; "
            "loadings are inconsistent with w0^2 < 1"
        )
    return np.sqrt(np.clip(variances, 0.0, None))


def simulate(
    portfolio: Portfolio,
    loadings: LoadingSet | None,
    universe: FactorUniverse | None,
    config: SimConfig,
) -> OutcomeDistribution:
    """Unicorn-count distribution over ``config.iterations`` iterations.

    In ``UNCORRELATED`` mode factor sampling is bypassed entirely (``loadings``
    and ``universe`` may be ``None``); otherwise the caller supplies loadings
    built for the requested mode (sector-only weights for
    ``SINGLE_FACTOR_SECTOR``; see ``scenario_lib.loadings_for_mode``).

    Output is bit-reproducible given (seed, portfolio, sigma, mode, M) and
    independent of ``config.workers``.
    """
    n = portfolio.size
    thresholds = np.array([exceedance_threshold(d.p) for d in portfolio.deals])
    uncorrelated = config.model_mode == ModelMode.UNCORRELATED
    if not uncorrelated:
        if loadings is None or universe is None:
            raise ValidationError(
                f"{config.model_mode.value} mode requires loadings and a universe"
            )
        if loadings.b.shape[0] != n:
            raise ValidationError(
                f"loading rows ({loadings.b.shape[0]}) do not match deals ({n})"
            )
        weight_matrix = loadings.w.T.copy()  # factors x deals
        factor = cholesky(universe.sigma)
        scales = idiosyncratic_scales(loadings, universe.sigma)
        lt = factor.L.T.copy()

    chunk_sizes = [
        min(CHUNK_ROWS, config.iterations - start)
        for start in range(0, config.iterations, CHUNK_ROWS)
    ]

    def run_chunk(chunk_index: int) -> tuple[np.ndarray, np.ndarray]:
        rows = chunk_sizes[chunk_index]
        stream = _chunk_stream(config.seed, chunk_index)
        if uncorrelated:
            latent = stream.standard_normal((rows, n))
        else:
            factor_normals = stream.standard_normal((rows, lt.shape[0]))
            idio = stream.standard_normal((rows, n))
            latent = (factor_normals @ lt) @ weight_matrix
            latent += idio * scales
        successes = latent > thresholds
        unicorns = successes.sum(axis=1)
        histogram = np.bincount(unicorns, minlength=n + 1).astype(np.int64)
        return histogram, successes.sum(axis=0, dtype=np.int64)

    total = np.zeros(n + 1, dtype=np.int64)
    per_deal = np.zeros(n, dtype=np.int64)
    if config.workers == 1:
        results = map(run_chunk, range(len(chunk_sizes)))
        for histogram, tallies in results:
            total += histogram
            per_deal += tallies
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for histogram, tallies in pool.map(run_chunk, range(len(chunk_sizes))):
                total += histogram
                per_deal += tallies

    return OutcomeDistribution(
        counts=total,
        iterations=config.iterations,
        n_deals=n,
        per_deal_successes=per_deal,
    )
