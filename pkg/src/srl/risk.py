"""Excess-risk measurement and its quadratic surrogates.

The excess risk of theta is measured exactly over the dataset rows:
    Delta(theta) = (1/2n) * sum_i (relu(m_i.theta) - relu(m_i.theta*))^2.
It is sandwiched by the covariance quadratic form ||theta - theta*||^2_M:
Delta <= (1/2) * proxy always, and Delta >= (1/8) * proxy on symmetrized
data (every row paired with its negation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .rng import derive
from .spectral import SpectralDecomposition
from .synthesis import AggregationDataset, GroundTruth, generate_responses

RISK_CSV_HEADER = "delta,proxy,bias_hat,var_hat,k,head_norm,tail_norm"


@dataclass(frozen=True)
class RiskReport:
    """Measured risk quantities for one estimator against one ground truth.

    head_norm/tail_norm split the estimation error theta - theta* across the
    dataset eigenbasis at cutoff k.  bias_hat/var_hat are NaN unless filled
    by a repeat-based decomposition.
    """

    delta: float
    proxy: float
    k: int
    head_norm: float
    tail_norm: float
    bias_hat: float = float("nan")
    var_hat: float = float("nan")

    def csv_row(self) -> str:
        return ",".join(
            [
                repr(float(self.delta)),
                repr(float(self.proxy)),
                repr(float(self.bias_hat)),
                repr(float(self.var_hat)),
                str(self.k),
                repr(float(self.head_norm)),
                repr(float(self.tail_norm)),
            ]
        )


def _check_theta(theta: np.ndarray, ds: AggregationDataset) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ds.d,):
        raise DimensionMismatchError(f"theta has shape {theta.shape}, expected ({ds.d},)")
    return theta


def excess_risk(theta: np.ndarray, gt: GroundTruth, ds: AggregationDataset) -> float:
    """Delta(theta), exact over the dataset rows (noise cancels in the difference)."""
    theta = _check_theta(theta, ds)
    if gt.d != ds.d:
        raise DimensionMismatchError(f"theta* has {gt.d} entries, dataset has d={ds.d}")
    pred = np.maximum(ds.samples @ theta, 0.0)
    truth = np.maximum(ds.samples @ gt.theta_star, 0.0)
    return float(np.sum((pred - truth) ** 2) / (2.0 * ds.n))


def quadratic_proxy(theta: np.ndarray, gt: GroundTruth, ds: AggregationDataset) -> float:
    """||theta - theta*||^2 in the empirical-covariance norm."""
    theta = _check_theta(theta, ds)
    if gt.d != ds.d:
        raise DimensionMismatchError(f"theta* has {gt.d} entries, dataset has d={ds.d}")
    diff = theta - gt.theta_star
    return float(diff @ ds.empirical_covariance @ diff)


def weighted_norms(theta: np.ndarray, spec: SpectralDecomposition, k: int) -> tuple[float, float]:
    """(head, tail) = (sum_{i<=k} c_i^2/mu_i, sum_{i>k} mu_i c_i^2) with c = V'theta."""
    theta = np.asarray(theta, dtype=float)
    d = spec.dim
    if theta.shape != (d,):
        raise DimensionMismatchError(f"theta has shape {theta.shape}, expected ({d},)")
    if not 0 <= k <= d:
        raise InvalidParameterError(f"cutoff must be in [0, {d}], got {k}")
    mu = spec.eigenvalues
    if np.any(mu[:k] <= 0):
        raise InvalidParameterError("head norm needs strictly positive eigenvalues up to k")
    coords = spec.eigenvectors.T @ theta
    head = float(np.sum(coords[:k] ** 2 / mu[:k]))
    tail = float(np.sum(mu[k:] * coords[k:] ** 2))
    return head, tail


def bias_variance_split(
    trainer: Callable[[AggregationDataset, np.ndarray, int], object],
    ds: AggregationDataset,
    gt: GroundTruth,
    repeats: int,
    seed: int,
) -> tuple[float, float]:
    """Empirical bias/variance of a trainer over fresh noise and sampling streams.

    trainer(ds, y, seed) must return an Estimator or a theta vector.  Returns
    (||mean - theta*||^2_M, mean ||theta_r - mean||^2_M); their sum equals the
    mean squared M-distance to theta* exactly.
    """
    if repeats < 2:
        raise InvalidParameterError(f"need at least 2 repeats, got {repeats}")
    thetas = []
    for r in range(repeats):
        y = generate_responses(ds, gt, derive(seed, r, 0))
        result = trainer(ds, y, derive(seed, r, 1))
        theta = np.asarray(getattr(result, "theta", result), dtype=float)
        thetas.append(theta)
    stack = np.vstack(thetas)
    mean = stack.mean(axis=0)
    cov = ds.empirical_covariance
    diff = mean - gt.theta_star
    bias_hat = float(diff @ cov @ diff)
    centered = stack - mean
    var_hat = float(np.mean(np.einsum("ri,ij,rj->r", centered, cov, centered)))
    return bias_hat, var_hat


def risk_report(
    theta: np.ndarray,
    gt: GroundTruth,
    ds: AggregationDataset,
    k: int | None = None,
    bias_hat: float = float("nan"),
    var_hat: float = float("nan"),
) -> RiskReport:
    """Assemble the standard report row for one estimator."""
    if k is None:
        k = int(np.ceil(ds.d / 10))
    theta = _check_theta(theta, ds)
    head, tail = weighted_norms(theta - gt.theta_star, ds.spectral, k)
    return RiskReport(
        delta=excess_risk(theta, gt, ds),
        proxy=quadratic_proxy(theta, gt, ds),
        k=int(k),
        head_norm=head,
        tail_norm=tail,
        bias_hat=bias_hat,
        var_hat=var_hat,
    )
