"""Static mathematics of the latent-factor model.

A deal's affiliation vector places sqrt(kind weight) at each group it belongs
to.  Normalizing that vector under the group correlation matrix gives a
loading direction with unit latent variance; a single global scale w0 then
controls how strongly every deal couples to the shared factors.  w0 is
calibrated so the average pairwise deal correlation over a reference universe
hits a target (0.12 by default), and model validity requires w0^2 < 1 so each
deal retains positive idiosyncratic variance.

All functions here are pure; types are immutable after construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import ndtri

from .errors import (
    CalibrationInfeasible,
    DegenerateLoading,
    NonPositiveRhoBar,
    OutOfRange,
    ValidationError,
)
from .universe import Affiliation, FactorUniverse, GroupKind, KindWeights

#: b' Sigma b must equal 1 within this tolerance after normalization.
NORMALIZATION_TOLERANCE = 1e-9

#: r' Sigma r below this is treated as a degenerate (zero) affiliation.
DEGENERACY_TOLERANCE = 1e-12

#: w0^2 * rho_bar' must reproduce the calibration target within this.
CALIBRATION_IDENTITY_TOLERANCE = 1e-12

#: Average pairwise deal correlation target used throughout.
DEFAULT_TARGET_RHO = 0.12


def build_affiliation(
    deal, weights: KindWeights, universe: FactorUniverse
) -> np.ndarray:
    """Raw affiliation vector: sqrt(weight) at the deal's group of each kind.

    ``deal`` is anything with ``sector``/``geography``/``founder`` label
    attributes (a Deal or an Affiliation).
    """
    r = np.zeros(universe.size)
    r[universe.index_of(deal.sector, GroupKind.SECTOR)] = math.sqrt(weights.sector)
    r[universe.index_of(deal.geography, GroupKind.GEOGRAPHY)] = math.sqrt(
        weights.geography
    )
    r[universe.index_of(deal.founder, GroupKind.FOUNDER_TYPE)] = math.sqrt(
        weights.founder
    )
    return r


def normalize_loading(r: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Scale r so the loading has unit variance under sigma: b' sigma b = 1."""
    r = np.asarray(r, dtype=float)
    variance = float(r @ sigma @ r)
    if variance <= DEGENERACY_TOLERANCE:
        raise DegenerateLoading(
            f"affiliation vector has variance {variance:.3e} under sigma; "
            "either the vector is zero or it lies in sigma's null space"
        )
    return r / math.sqrt(variance)


def pairwise_correlation(
    b_i: np.ndarray, b_j: np.ndarray, w0: float, sigma: np.ndarray
) -> float:
    """Latent correlation between two deals: w0^2 * b_i' sigma b_j.

    Evaluated as the mean of both argument orders so the result is exactly
    symmetric in (b_i, b_j) despite floating-point evaluation order.
    """
    b_i = np.asarray(b_i, dtype=float)
    b_j = np.asarray(b_j, dtype=float)
    forward = float(b_i @ (sigma @ b_j))
    backward = float(b_j @ (sigma @ b_i))
    return w0 * w0 * 0.5 * (forward + backward)


def average_pair_correlation(b_matrix: np.ndarray, sigma: np.ndarray) -> float:
    """Mean of b_i' sigma b_j over unordered distinct pairs i != j.

    Self-pairs are excluded: they equal 1 by construction and would bias the
    average upward.
    """
    b_matrix = np.asarray(b_matrix, dtype=float)
    m = b_matrix.shape[0]
    if m < 2:
        raise ValidationError("need at least 2 members to average over pairs")
    gram = b_matrix @ sigma @ b_matrix.T
    total = float(gram.sum() - np.trace(gram))
    return total / (m * (m - 1))


def calibrate_w0(
    universe: FactorUniverse,
    weights: KindWeights,
    calibration_universe: Sequence,
    target_rho: float = DEFAULT_TARGET_RHO,
) -> tuple[float, float]:
    """Global dependence scale hitting the target average pair correlation.

    Returns ``(w0, rho_bar_prime)`` with ``w0 = sqrt(target_rho / rho_bar')``,
    where rho_bar' averages b_i' sigma b_j over unordered distinct pairs of
    the calibration universe.  target_rho = 0 yields w0 = 0 (independence).
    """
    if not (0.0 <= target_rho < 1.0):
        raise OutOfRange(f"target correlation must be in [0, 1), got {target_rho}")
    if len(calibration_universe) < 2:
        raise ValidationError("calibration universe needs at least 2 members")
    b_matrix = np.stack(
        [
            normalize_loading(build_affiliation(member, weights, universe), universe.sigma)
            for member in calibration_universe
        ]
    )
    rho_bar_prime = average_pair_correlation(b_matrix, universe.sigma)
    if rho_bar_prime <= 0.0:
        raise NonPositiveRhoBar(
            f"average normalized pair correlation is {rho_bar_prime:.6g}; "
            "cannot take a real square root"
        )
    w0_squared = target_rho / rho_bar_prime
    if w0_squared >= 1.0:
        raise CalibrationInfeasible(
            f"target {target_rho} needs w0^2 = {w0_squared:.6g} >= 1; the "
            "average pair correlation of this universe cannot reach the target"
        )
    return math.sqrt(w0_squared), rho_bar_prime


def exceedance_threshold(p: float) -> float:
    """Latent threshold whose exceedance probability is exactly p.

    Computed as -ndtri(p) rather than ndtri(1 - p): the two agree to the
    last bit away from the tails, but forming 1 - p throws away most of p's
    precision when p is tiny, and small-p thresholds are exactly the ones
    the simulation leans on.
    """
    if not (0.0 < p < 1.0):
        raise OutOfRange(f"probability must be in (0, 1), got {p}")
    return float(-ndtri(p))


@dataclass(frozen=True)
class LoadingSet:
    """Normalized per-deal loadings plus the calibrated global scale.

    ``b`` has one row per deal, ``w0`` scales every row, and final loadings
    are ``w = w0 * b`` (derived, never stored).  ``rho_bar_prime`` records the
    calibration universe's average normalized pair correlation.
    """

    b: np.ndarray
    w0: float
    rho_bar_prime: float

    def __post_init__(self):
        if not (0.0 <= self.w0 * self.w0 < 1.0):
            raise ValidationError(f"model validity requires w0^2 < 1, got w0={self.w0}")
        b = np.asarray(self.b, dtype=float)
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @property
    def w(self) -> np.ndarray:
        return self.w0 * self.b


def build_loadings(
    deals: Sequence,
    universe: FactorUniverse,
    weights: KindWeights,
    calibration_universe: Sequence | None = None,
    target_rho: float = DEFAULT_TARGET_RHO,
) -> LoadingSet:
    """Normalized loadings for ``deals`` with w0 calibrated in one step.

    ``calibration_universe`` defaults to the (sector x geography x founder)
    cross product of the universe; pass the deals themselves to calibrate
    against the portfolio instead.
    """
    from .universe import cross_product_affiliations

    if calibration_universe is None:
        calibration_universe = cross_product_affiliations(universe)
    w0, rho_bar_prime = calibrate_w0(universe, weights, calibration_universe, target_rho)
    b_matrix = np.stack(
        [
            normalize_loading(build_affiliation(deal, weights, universe), universe.sigma)
            for deal in deals
        ]
    )
    return LoadingSet(b=b_matrix, w0=w0, rho_bar_prime=rho_bar_prime)
