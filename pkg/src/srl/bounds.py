"""Closed-form bias/variance expressions for tail-averaged SGD and ridge.

Everything here is pure formula evaluation on a non-increasing spectrum
``mu`` and the coordinates of the target in the matching eigenbasis.  The
expressions carry no absolute constants, so comparisons against measured
risk are shape and direction checks rather than equalities.

Cutoff conventions (1-based in the math, counts in the code):

* SGD: ``k_star`` counts eigenvalues >= 1/(N*gamma); ``k_dagger`` counts
  eigenvalues >= 2/(3*N*gamma).
* Ridge: ``k_star`` is the smallest k with b*mu_{k+1} <= (lam + tail)/N,
  scanning upward with mu_{d+1} = 0, and lambda_hat = lam + tail mass
  beyond that k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

BOUNDS_CSV_HEADER = "algorithm,side,bias,variance,total,k_star,k_dagger,lambda_hat"

_NEG_TOL = 1e-10
_STEPSIZE_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class CutoffIndices:
    """All index/threshold bookkeeping attached to one bound evaluation."""

    k_star: int
    k_dagger: int
    k1: int
    k2: int
    lambda_hat: float = 0.0
    b: float = 0.0


@dataclass(frozen=True)
class BoundProfile:
    algorithm: str
    side: str
    bias: float
    variance: float
    cutoffs: CutoffIndices

    @property
    def total(self) -> float:
        return self.bias + self.variance

    def csv_row(self) -> str:
        return ",".join(
            [
                self.algorithm,
                self.side,
                repr(float(self.bias)),
                repr(float(self.variance)),
                repr(float(self.total)),
                str(self.cutoffs.k_star),
                str(self.cutoffs.k_dagger),
                repr(float(self.cutoffs.lambda_hat)),
            ]
        )


def _clean_spectrum(mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float).ravel()
    if mu.size == 0:
        raise InvalidParameterError("spectrum is empty")
    if not np.all(np.isfinite(mu)):
        raise InvalidParameterError("spectrum contains non-finite entries")
    if np.any(np.diff(mu) > 0):
        raise InvalidParameterError("spectrum must be sorted non-increasing")
    if mu.min() < -_NEG_TOL:
        raise InvalidParameterError("spectrum has a significantly negative eigenvalue")
    return np.clip(mu, 0.0, None)


def _check_coords(coords, d: int) -> np.ndarray:
    coords = np.asarray(coords, dtype=float).ravel()
    if coords.shape != (d,):
        raise InvalidParameterError(f"coords has shape {coords.shape}, expected ({d},)")
    if not np.all(np.isfinite(coords)):
        raise InvalidParameterError("coords contains non-finite entries")
    return coords


def _check_common(n: int, sigma: float, side: str) -> None:
    if n < 1:
        raise InvalidParameterError(f"sample budget must be >= 1, got {n}")
    if sigma < 0:
        raise InvalidParameterError(f"noise level must be >= 0, got {sigma}")
    if side not in ("upper", "lower"):
        raise InvalidParameterError(f"side must be 'upper' or 'lower', got {side!r}")


def sgd_cutoffs(mu, n: int, gamma: float) -> tuple[int, int]:
    """Count eigenvalues above 1/(N*gamma) (k*) and 2/(3*N*gamma) (k-dagger)."""
    mu = _clean_spectrum(mu)
    if n < 1:
        raise InvalidParameterError(f"sample budget must be >= 1, got {n}")
    if gamma <= 0:
        raise InvalidParameterError(f"stepsize must be > 0, got {gamma}")
    k_star = int(np.sum(mu >= 1.0 / (n * gamma)))
    k_dagger = int(np.sum(mu >= 2.0 / (3.0 * n * gamma)))
    return k_star, k_dagger


def _split_bias(mu: np.ndarray, coords: np.ndarray, n: int, gamma: float, k1: int) -> float:
    # head: (1/(gamma N)^2) * sum exp(-2 N gamma mu_i) c_i^2 / mu_i, tail: plain M-norm
    if np.any(mu[:k1] <= 0):
        raise InvalidParameterError("head of the spectrum must be strictly positive up to k1")
    head = np.sum(np.exp(-2.0 * n * gamma * mu[:k1]) * coords[:k1] ** 2 / mu[:k1])
    head /= (gamma * n) ** 2
    tail = np.sum(mu[k1:] * coords[k1:] ** 2)
    return float(head + tail)


def sgd_risk_bound(
    mu,
    coords,
    n: int,
    gamma: float,
    sigma: float,
    side: str = "upper",
    k1: int | None = None,
    k2: int | None = None,
    enforce_stepsize: bool = False,
) -> BoundProfile:
    """Evaluate the tail-averaged-SGD excess-risk bound, upper or lower side.

    Upper side uses caller-chosen head lengths k1 (bias) and k2 (variance),
    both defaulting to k*; the lower side ignores them and evaluates at the
    threshold counts k*, k-dagger, with noise entering only the first
    variance term and the target norm entering through the k-dagger tail.
    """
    mu = _clean_spectrum(mu)
    d = mu.size
    coords = _check_coords(coords, d)
    _check_common(n, sigma, side)
    if gamma <= 0:
        raise InvalidParameterError(f"stepsize must be > 0, got {gamma}")
    k_star, k_dagger = sgd_cutoffs(mu, n, gamma)
    signal = float(np.sum(mu * coords**2))

    if side == "upper":
        if enforce_stepsize and gamma > _STEPSIZE_SLACK / float(np.sum(mu)):
            raise InvalidParameterError("stepsize exceeds 1/tr(M), upper bound not applicable")
        k1 = k_star if k1 is None else int(k1)
        k2 = k_star if k2 is None else int(k2)
        for name, k in (("k1", k1), ("k2", k2)):
            if not 0 <= k <= d:
                raise InvalidParameterError(f"{name} must be in [0, {d}], got {k}")
        bias = _split_bias(mu, coords, n, gamma, k1)
        tail_sq = float(np.sum(mu[k2:] ** 2))
        variance = ((sigma**2 + signal) / n) * (k2 + n**2 * gamma**2 * tail_sq)
    else:
        if enforce_stepsize and gamma > _STEPSIZE_SLACK / mu[0]:
            raise InvalidParameterError("stepsize exceeds 1/mu_1, lower bound not applicable")
        k1 = k2 = k_star
        bias = _split_bias(mu, coords, n, gamma, k_star)
        tail_sq = float(np.sum(mu[k_star:] ** 2))
        variance = (sigma**2 / n) * (k_star + n**2 * gamma**2 * tail_sq)
        dagger_sq = float(np.sum(mu[k_dagger:] ** 2))
        if dagger_sq > 0 and signal > 0:
            variance += signal * (gamma / mu[0]) * dagger_sq

    cuts = CutoffIndices(k_star=k_star, k_dagger=k_dagger, k1=k1, k2=k2)
    return BoundProfile(algorithm="sgd", side=side, bias=float(bias), variance=float(variance), cutoffs=cuts)


def ridge_cutoff(mu, n: int, lam: float, b: float = 2.0) -> tuple[int, float]:
    """Smallest k with b*mu_{k+1} <= (lam + tail mass)/N, plus lambda_hat there.

    mu_{d+1} is treated as zero, so k = d always terminates the scan.
    """
    mu = _clean_spectrum(mu)
    d = mu.size
    if n < 1:
        raise InvalidParameterError(f"sample budget must be >= 1, got {n}")
    if lam < 0:
        raise InvalidParameterError(f"regularization must be >= 0, got {lam}")
    if b <= 1:
        raise InvalidParameterError(f"cutoff constant must be > 1, got {b}")
    tails = np.concatenate([np.cumsum(mu[::-1])[::-1], [0.0]])
    for k in range(d + 1):
        nxt = mu[k] if k < d else 0.0
        if b * nxt <= (lam + tails[k]) / n:
            return k, float(lam + tails[k])
    raise AssertionError("unreachable: k = d always satisfies the cutoff condition")


def ridge_risk_bound(
    mu,
    coords,
    n: int,
    lam: float,
    sigma: float,
    side: str = "upper",
    k: int | None = None,
    b: float = 2.0,
) -> BoundProfile:
    """Evaluate the ridge excess-risk bound at head length k (lower pins k = k*)."""
    mu = _clean_spectrum(mu)
    d = mu.size
    coords = _check_coords(coords, d)
    _check_common(n, sigma, side)
    k_star, lambda_hat = ridge_cutoff(mu, n, lam, b)
    if side == "lower":
        if lam <= 0:
            raise InvalidParameterError("lower side requires strictly positive regularization")
        k = k_star
    else:
        k = k_star if k is None else int(k)
        if not 0 <= k <= d:
            raise InvalidParameterError(f"k must be in [0, {d}], got {k}")

    if np.any(mu[:k] <= 0):
        raise InvalidParameterError("head of the spectrum must be strictly positive up to k")
    head = float(np.sum(coords[:k] ** 2 / mu[:k])) if k else 0.0
    bias = (lambda_hat**2 / n**2) * head + float(np.sum(mu[k:] * coords[k:] ** 2))

    tail_sq = float(np.sum(mu[k:] ** 2))
    if lambda_hat == 0.0:
        if tail_sq > 0:
            raise InvalidParameterError(
                "effective regularization is zero but the spectrum tail is not"
            )
        variance = sigma**2 * (k / n)
    else:
        variance = sigma**2 * (k / n + (n / lambda_hat**2) * tail_sq)

    cuts = CutoffIndices(k_star=k_star, k_dagger=0, k1=k, k2=k, lambda_hat=lambda_hat, b=b)
    return BoundProfile(algorithm="ridge", side=side, bias=float(bias), variance=float(variance), cutoffs=cuts)
