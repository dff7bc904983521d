"""Dataset construction.

Aggregated samples come from one of two paths:

* graph path: rows of D = G^L X for a graph operator G and i.i.d. Gaussian
  features X (row i is the aggregated representation m_i of node i);
* spectrum path: rows drawn directly from a covariance with prescribed
  eigenvalues, for clean comparison against the closed-form bounds.

Responses follow the ReLU readout y = max(0, m.theta*) + noise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .graphs import GraphOperator
from .rng import stream
from .spectral import DecaySpectrum, SpectralDecomposition, eigh_symmetric

_EIG_FLOOR = -1e-10  # tolerated numerical negativity in PSD spectra


@dataclass(frozen=True)
class FeatureMatrix:
    """n x d matrix of i.i.d. standard-normal features."""

    data: np.ndarray
    seed: int

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class AggregationDataset:
    """Rows are aggregated sample vectors m_i; covariance and its spectrum attached."""

    samples: np.ndarray
    empirical_covariance: np.ndarray
    spectral: SpectralDecomposition
    noise_sigma: float
    layers: int
    symmetrized: bool

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class GroundTruth:
    """Unit-norm true parameter plus its coordinates in the dataset eigenbasis."""

    theta_star: np.ndarray
    mode: str
    coords: np.ndarray

    @property
    def d(self) -> int:
        return self.theta_star.size


def sample_features(n: int, d: int, seed: int) -> FeatureMatrix:
    """i.i.d. standard normal feature matrix, deterministic under seed."""
    if n < 1 or d < 1:
        raise InvalidParameterError(f"need n, d >= 1, got n={n}, d={d}")
    return FeatureMatrix(data=stream(seed).standard_normal((n, d)), seed=int(seed))


def _dataset_from_rows(rows: np.ndarray, sigma: float, layers: int,
                       symmetrized: bool) -> AggregationDataset:
    if sigma < 0:
        raise InvalidParameterError(f"noise level must be >= 0, got {sigma}")
    n = rows.shape[0]
    cov = rows.T @ rows / n
    cov = (cov + cov.T) / 2.0
    return AggregationDataset(
        samples=rows,
        empirical_covariance=cov,
        spectral=eigh_symmetric(cov),
        noise_sigma=float(sigma),
        layers=int(layers),
        symmetrized=bool(symmetrized),
    )


def aggregate(op: GraphOperator, x: FeatureMatrix, layers: int = 1,
              sigma: float = 1.0) -> AggregationDataset:
    """D = G^L X by L successive multiplications; covariance D'D/n attached."""
    if layers < 1:
        raise InvalidParameterError(f"layer count must be >= 1, got {layers}")
    if op.n != x.n:
        raise DimensionMismatchError(
            f"operator acts on {op.n} vertices but features have {x.n} rows"
        )
    d_mat = x.data
    for _ in range(layers):
        d_mat = op.matrix @ d_mat
    return _dataset_from_rows(d_mat, sigma, layers, symmetrized=False)


def sample_from_spectrum(spec: DecaySpectrum | SpectralDecomposition, n: int,
                         sigma: float, seed: int,
                         symmetrize: bool = False) -> AggregationDataset:
    """Draw rows m = V diag(sqrt(mu)) z, z standard normal.

    With symmetrize=True the negated copy of every row is appended (row i
    pairs with row i+n), which makes the covariance even in m exactly.
    """
    if n < 1:
        raise InvalidParameterError(f"need n >= 1, got {n}")
    if isinstance(spec, DecaySpectrum):
        values, basis = spec.values, None
    else:
        values, basis = spec.eigenvalues, spec.eigenvectors
    values = np.asarray(values, dtype=float)
    if np.any(values < _EIG_FLOOR):
        raise InvalidParameterError("spectrum has negative eigenvalues")
    scale = np.sqrt(np.clip(values, 0.0, None))
    z = stream(seed).standard_normal((n, values.size))
    rows = z * scale
    if basis is not None:
        rows = rows @ basis.T
    if symmetrize:
        rows = np.concatenate([rows, -rows], axis=0)
    return _dataset_from_rows(rows, sigma, layers=1, symmetrized=symmetrize)


def make_ground_truth(spec: SpectralDecomposition, mode: str, k: int | None = None,
                      p: float | None = None) -> GroundTruth:
    """Unit-norm theta* aligned with the given spectrum.

    head(k): equal weight on the top-k eigenvectors.
    tail(k): equal weight on the bottom-k eigenvectors.
    weighted(p): coordinates proportional to mu_i^p.

    k defaults to ceil(d / 10) for the head and tail modes.
    """
    d = spec.dim
    coords = np.zeros(d)
    if mode in ("head", "tail"):
        if k is None:
            k = -(-d // 10)
        if not (1 <= k <= d):
            raise InvalidParameterError(f"mode {mode!r} needs 1 <= k <= {d}, got {k}")
        if mode == "head":
            coords[:k] = 1.0 / np.sqrt(k)
        else:
            coords[d - k:] = 1.0 / np.sqrt(k)
        label = f"{mode}({k})"
    elif mode == "weighted":
        if p is None or not np.isfinite(p):
            raise InvalidParameterError(f"mode 'weighted' needs finite p, got {p}")
        with np.errstate(divide="ignore", invalid="ignore"):
            raw = np.asarray(spec.eigenvalues, dtype=float) ** float(p)
        if not np.all(np.isfinite(raw)) or np.linalg.norm(raw) == 0:
            raise InvalidParameterError("weighted mode produced a degenerate coordinate vector")
        coords = raw / np.linalg.norm(raw)
        label = f"weighted({p:g})"
    else:
        raise InvalidParameterError(f"unknown ground-truth mode {mode!r}")
    theta = spec.eigenvectors @ coords
    return GroundTruth(theta_star=theta, mode=label, coords=coords)


def generate_responses(ds: AggregationDataset, gt: GroundTruth, seed: int) -> np.ndarray:
    """y_i = max(0, m_i.theta*) + eps_i with eps ~ N(0, sigma^2) from the dataset."""
    if gt.d != ds.d:
        raise DimensionMismatchError(f"theta* has {gt.d} entries, dataset has d={ds.d}")
    clean = np.maximum(ds.samples @ gt.theta_star, 0.0)
    noise = stream(seed).standard_normal(ds.n)
    return clean + ds.noise_sigma * noise


def subset_rows(ds: AggregationDataset, indices: np.ndarray) -> AggregationDataset:
    """Dataset restricted to the given rows (covariance recomputed)."""
    indices = np.asarray(indices, dtype=int)
    if indices.size == 0:
        raise InvalidParameterError("row subset must be non-empty")
    return _dataset_from_rows(ds.samples[indices], ds.noise_sigma, ds.layers,
                              symmetrized=False)


def save_dataset(ds: AggregationDataset, y: np.ndarray, csv_path, sidecar_path, *,
                 seed: int, mode: str) -> None:
    """Plain-text export: n comma-separated feature rows, then one response row.

    The JSON sidecar records {n, d, L, sigma, seed, mode} so the CSV can be
    parsed back without guessing shapes.
    """
    lines = [",".join(repr(float(x)) for x in row) for row in ds.samples]
    lines.append(",".join(repr(float(v)) for v in np.asarray(y)))
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    sidecar = {
        "n": ds.n,
        "d": ds.d,
        "L": ds.layers,
        "sigma": ds.noise_sigma,
        "seed": int(seed),
        "mode": mode,
    }
    with open(sidecar_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(sidecar, indent=2) + "\n")
