"""Closed-form and quadrature baselines for validating the Monte Carlo engine.

Two independent routes:

* the Poisson-binomial recurrence gives the exact law of the unicorn count
  when outcomes are independent (w0 = 0);
* one-dimensional Gauss-Hermite quadrature gives near-exact tail
  probabilities when all deals share a single common factor with equal
  loading (the classic one-factor conditional-independence structure), since
  conditional on the factor value the count is Binomial(n, p(z)).
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, ndtr, ndtri, roots_hermite

from .errors import OutOfRange

#: Default Gauss-Hermite node count; the integrand is smooth, so convergence
#: is spectral and node-doubling moves results by far less than 1e-9.
QUADRATURE_NODES = 200


def poisson_binomial_pmf(probs) -> np.ndarray:
    """Exact distribution of a sum of independent Bernoulli(p_i) outcomes.

    Standard O(N^2) convolution: fold one deal in at a time, shifting mass up
    by one count with probability p_i.
    """
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1:
        raise OutOfRange("probabilities must be a flat sequence")
    if np.any((probs < 0.0) | (probs > 1.0)):
        raise OutOfRange("all probabilities must lie in [0, 1]")
    pmf = np.zeros(probs.size + 1)
    pmf[0] = 1.0
    for i, p in enumerate(probs):
        pmf[1 : i + 2] = pmf[1 : i + 2] * (1.0 - p) + pmf[: i + 1] * p
        pmf[0] *= 1.0 - p
    return pmf


def poisson_binomial_cdf(probs) -> np.ndarray:
    return np.cumsum(poisson_binomial_pmf(probs))


def _log_binomial_cdf(k: int, n: int, p: np.ndarray) -> np.ndarray:
    """log P(Bin(n, p) <= k) evaluated stably for extreme p.

    Summing pmf terms in log space keeps deep-tail factor values (where
    p(z) -> 0 or 1) from underflowing the integrand.
    """
    p = np.clip(p, 1e-300, 1.0 - 1e-16)
    j = np.arange(k + 1)
    log_coeff = gammaln(n + 1) - gammaln(j + 1) - gammaln(n - j + 1)
    log_terms = (
        log_coeff[None, :]
        + j[None, :] * np.log(p)[:, None]
        + (n - j)[None, :] * np.log1p(-p)[:, None]
    )
    peak = log_terms.max(axis=1)
    return peak + np.log(np.exp(log_terms - peak[:, None]).sum(axis=1))


def single_factor_homogeneous(
    p: float, pair_rho: float, n: int, k: int, nodes: int = QUADRATURE_NODES
) -> float:
    """P(U <= k) for n identical deals sharing one factor with loading sqrt(pair_rho).

    Conditional on the factor value z the deals are independent with success
    probability p(z) = Phi((sqrt(pair_rho) z - Phi^-1(1-p)) / sqrt(1-pair_rho)),
    so P(U <= k) = E_z[ BinCDF(k; n, p(z)) ], evaluated by Gauss-Hermite
    quadrature under the standard normal weight.
    """
    if not (0.0 < p < 1.0):
        raise OutOfRange(f"probability must be in (0, 1), got {p}")
    if not (0.0 <= pair_rho < 1.0):
        raise OutOfRange(f"pair correlation must be in [0, 1), got {pair_rho}")
    if n < 1 or k < 0:
        raise OutOfRange(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    if k >= n:
        return 1.0
    threshold = float(ndtri(1.0 - p))
    if pair_rho == 0.0:
        return float(np.exp(_log_binomial_cdf(k, n, np.array([p])))[0])
    w = math.sqrt(pair_rho)
    x, weights = roots_hermite(nodes)
    # Physicists' Hermite weight exp(-x^2): substitute z = sqrt(2) x and
    # divide by sqrt(pi) to integrate against the standard normal density.
    z = math.sqrt(2.0) * x
    p_given_z = ndtr((w * z - threshold) / math.sqrt(1.0 - pair_rho))
    integrand = np.exp(_log_binomial_cdf(k, n, p_given_z))
    return float((weights @ integrand) / math.sqrt(math.pi))
