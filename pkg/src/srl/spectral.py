"""Eigendecomposition and spectrum utilities.

Covers: dense symmetric eigensolve with a deterministic output convention,
the synthetic power-decay spectrum mu_i = i^(-beta), log-log decay-rate
fitting, and the spectrum law for stacked (powered) operators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NotSymmetricError

SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues sorted non-increasing; eigenvectors[:, i] pairs with eigenvalues[i]."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.eigenvalues, dtype=float)
        v = np.asarray(self.eigenvectors, dtype=float)
        if w.ndim != 1 or v.ndim != 2 or v.shape != (w.size, w.size):
            raise InvalidParameterError(
                f"inconsistent decomposition shapes {w.shape} / {v.shape}"
            )
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


@dataclass(frozen=True)
class DecaySpectrum:
    """Power-law model spectrum mu_i = i^(-beta), i = 1..dim."""

    dim: int
    beta: float
    values: np.ndarray

    def as_decomposition(self) -> SpectralDecomposition:
        """View in the coordinate basis (V = identity)."""
        return SpectralDecomposition(self.values.copy(), np.eye(self.dim))


def eigh_symmetric(a: np.ndarray) -> SpectralDecomposition:
    """Symmetric eigendecomposition with a deterministic output convention.

    Eigenvalues come back sorted non-increasing (stable under ties); each
    eigenvector is flipped so its largest-magnitude entry is non-negative.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidParameterError(f"expected a square matrix, got shape {a.shape}")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > SYMMETRY_TOL:
        raise NotSymmetricError(f"asymmetry {asym:.3e} exceeds {SYMMETRY_TOL:.0e}")
    w, v = np.linalg.eigh((a + a.T) / 2.0)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    flip = v[np.abs(v).argmax(axis=0), np.arange(v.shape[1])] < 0
    v[:, flip] *= -1.0
    return SpectralDecomposition(w, v)


def synthetic_spectrum(d: int, beta: float) -> DecaySpectrum:
    """The model spectrum mu_i = i^(-beta) for i = 1..d."""
    if d < 1:
        raise InvalidParameterError(f"dimension must be >= 1, got {d}")
    if beta < 0:
        raise InvalidParameterError(f"decay exponent must be >= 0, got {beta}")
    values = np.arange(1, d + 1, dtype=float) ** (-float(beta))
    return DecaySpectrum(dim=d, beta=float(beta), values=values)


def fit_decay_rate(values: np.ndarray, head: int = 100) -> float:
    """Least-squares slope of log mu_i vs log i over the top `head` values, negated.

    Only the head is fitted because the far tail of finite-graph spectra is
    noisy and may touch zero.
    """
    values = np.asarray(values, dtype=float)
    if head < 2:
        raise InvalidParameterError(f"head must be >= 2, got {head}")
    window = values[: min(head, values.size)]
    if window.size < 2:
        raise InvalidParameterError("need at least two eigenvalues to fit")
    if np.any(window <= 0):
        raise InvalidParameterError("non-positive eigenvalue inside the fit window")
    idx = np.arange(1, window.size + 1, dtype=float)
    slope = np.polyfit(np.log(idx), np.log(window), 1)[0]
    return -float(slope)


def stack_spectrum(dec: SpectralDecomposition, layers: int) -> SpectralDecomposition:
    """Spectrum of the L-times-stacked operator: same basis, eigenvalues mu_i^L.

    Pairing is positional; for non-negative input the sorted order is
    preserved automatically.
    """
    if layers < 1:
        raise InvalidParameterError(f"layer count must be >= 1, got {layers}")
    return SpectralDecomposition(dec.eigenvalues ** layers, dec.eigenvectors.copy())


def ratio_amplification_check(dec: SpectralDecomposition, i: int, j: int, layers: int) -> bool:
    """Does the eigenvalue ratio mu_i/mu_j strictly grow from L to L+1 layers?

    Indices are 1-based positions in the sorted spectrum.  Analytically the
    answer is exactly (mu_i > mu_j); this evaluates the ratios directly.
    """
    d = dec.dim
    if not (1 <= i <= d and 1 <= j <= d):
        raise InvalidParameterError(f"indices ({i}, {j}) outside 1..{d}")
    if layers < 1:
        raise InvalidParameterError(f"layer count must be >= 1, got {layers}")
    mu_i = dec.eigenvalues[i - 1]
    mu_j = dec.eigenvalues[j - 1]
    if mu_i <= 0 or mu_j <= 0:
        raise InvalidParameterError("ratio check requires strictly positive eigenvalues")
    return (mu_i / mu_j) ** (layers + 1) > (mu_i / mu_j) ** layers


def spectrum_to_csv(values: np.ndarray, path) -> None:
    """Write (index, eigenvalue) rows; index is 1-based."""
    lines = ["index,eigenvalue"]
    lines.extend(f"{i},{repr(float(v))}" for i, v in enumerate(np.asarray(values), start=1))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def decomposition_to_json(dec: SpectralDecomposition) -> str:
    """JSON {eigenvalues: [...], vectors: [[...], ...]}; vectors row-major, columns are eigenvectors."""
    return json.dumps(
        {
            "eigenvalues": [float(x) for x in dec.eigenvalues],
            "vectors": [[float(x) for x in row] for row in dec.eigenvectors],
        }
    )


def decomposition_from_json(text: str) -> SpectralDecomposition:
    obj = json.loads(text)
    return SpectralDecomposition(np.array(obj["eigenvalues"]), np.array(obj["vectors"]))
