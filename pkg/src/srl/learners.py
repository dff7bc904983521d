"""Estimators: tail-averaged constant-stepsize SGD and closed-form ridge.

SGD follows the ReLU-readout update
    theta_{t+1} = theta_t - gamma * (max(0, m_t.theta_t) - y_t) * m_t
from zero initialization and reports the average of the last N/2 iterates.
Ridge solves (D'D + lambda I) theta = D'y exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import InvalidParameterError, SingularSystemError, SrlError
from .rng import stream
from .synthesis import AggregationDataset

SAMPLING_MODES = ("with_replacement", "one_pass")
_COND_LIMIT = 1e12
_RESIDUAL_REL = 1e-8


@dataclass(frozen=True)
class SgdConfig:
    gamma: float
    iterations: int
    sampling: str = "with_replacement"
    seed: int = 0
    # When set, reject stepsizes above 1/trace(M-hat) instead of running anyway.
    enforce_stepsize: bool = False


@dataclass(frozen=True)
class RidgeConfig:
    lam: float = 0.0


@dataclass(frozen=True)
class Estimator:
    theta: np.ndarray
    algorithm: str
    config: dict[str, Any]
    iterate_count: int


def _check_responses(ds: AggregationDataset, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (ds.n,):
        raise InvalidParameterError(f"responses have shape {y.shape}, expected ({ds.n},)")
    return y


def sgd_tail_averaged(ds: AggregationDataset, y: np.ndarray, cfg: SgdConfig) -> Estimator:
    """Run N update steps and return (2/N) * sum of iterates t = N/2 .. N-1."""
    y = _check_responses(ds, y)
    n_steps = int(cfg.iterations)
    if n_steps < 2 or n_steps % 2 != 0:
        raise InvalidParameterError(f"iteration count must be even and >= 2, got {n_steps}")
    if cfg.gamma < 0:
        raise InvalidParameterError(f"stepsize must be >= 0, got {cfg.gamma}")
    if cfg.sampling not in SAMPLING_MODES:
        raise InvalidParameterError(f"unknown sampling mode {cfg.sampling!r}")
    if cfg.sampling == "one_pass" and n_steps > ds.n:
        raise InvalidParameterError(
            f"one_pass needs iterations <= n, got {n_steps} > {ds.n}"
        )
    if cfg.enforce_stepsize:
        limit = 1.0 / np.trace(ds.empirical_covariance)
        if cfg.gamma > limit * (1 + 1e-12):
            raise InvalidParameterError(
                f"stepsize {cfg.gamma} exceeds 1/trace(M) = {limit}"
            )
    if cfg.sampling == "with_replacement":
        order = stream(cfg.seed).integers(0, ds.n, size=n_steps)
    else:
        order = np.arange(n_steps)
    rows = ds.samples
    gamma = float(cfg.gamma)
    theta = np.zeros(ds.d)
    acc = np.zeros(ds.d)
    half = n_steps // 2
    for t in range(n_steps):
        if t >= half:
            acc += theta
        m = rows[order[t]]
        margin = m @ theta
        pred = margin if margin > 0.0 else 0.0
        theta = theta - gamma * (pred - y[order[t]]) * m
    tail_avg = acc * (2.0 / n_steps)
    if not np.all(np.isfinite(tail_avg)):
        raise SrlError("SGD iterates diverged to non-finite values")
    return Estimator(
        theta=tail_avg,
        algorithm="sgd",
        config={
            "gamma": gamma,
            "iterations": n_steps,
            "sampling": cfg.sampling,
            "seed": int(cfg.seed),
        },
        iterate_count=n_steps,
    )


def ridge_fit(ds: AggregationDataset, y: np.ndarray, cfg: RidgeConfig) -> Estimator:
    """Solve (D'D + lambda I) theta = D'y by Cholesky factorization."""
    y = _check_responses(ds, y)
    lam = float(cfg.lam)
    if lam < 0:
        raise InvalidParameterError(f"ridge penalty must be >= 0, got {lam}")
    d_mat = ds.samples
    gram = d_mat.T @ d_mat
    gram = (gram + gram.T) / 2.0
    if lam == 0.0 and np.linalg.cond(gram) >= _COND_LIMIT:
        raise SingularSystemError(
            "D'D is rank-deficient or too ill-conditioned for lambda = 0"
        )
    system = gram + lam * np.eye(ds.d)
    rhs = d_mat.T @ y
    try:
        theta = cho_solve(cho_factor(system, lower=True), rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"Cholesky factorization failed: {exc}") from exc
    residual = np.linalg.norm(system @ theta - rhs)
    if residual > _RESIDUAL_REL * np.linalg.norm(rhs):
        raise SingularSystemError(
            f"normal-equation residual {residual:.3e} exceeds tolerance"
        )
    return Estimator(
        theta=theta,
        algorithm="ridge",
        config={"lambda": lam},
        iterate_count=1,
    )


def ols_fit(ds: AggregationDataset, y: np.ndarray) -> Estimator:
    """Ordinary least squares: ridge with lambda = 0."""
    est = ridge_fit(ds, y, RidgeConfig(lam=0.0))
    return Estimator(theta=est.theta, algorithm="ols", config=est.config,
                     iterate_count=est.iterate_count)


def estimator_to_json(est: Estimator) -> str:
    import json

    return json.dumps(
        {
            "algorithm": est.algorithm,
            "config": est.config,
            "theta": [float(x) for x in est.theta],
        }
    )
