from __future__ import annotations

import json

import numpy as np
import pytest
from scipy.stats import spearmanr

from srl import (
    DimensionMismatchError,
    Graph,
    GroundTruth,
    InvalidParameterError,
    aggregate,
    build_operator,
    eigh_symmetric,
    generate_ba,
    generate_responses,
    make_ground_truth,
    sample_features,
    sample_from_spectrum,
    synthetic_spectrum,
)
from srl.synthesis import FeatureMatrix, save_dataset, subset_rows


def _basis_spectrum(mu) -> "SpectralDecomposition":
    from srl import SpectralDecomposition

    mu = np.asarray(mu, dtype=float)
    return SpectralDecomposition(mu, np.eye(mu.size))


# ---------------------------------------------------------------------------
# feature sampling


def test_feature_matrix_shape_matches_protocol_default():
    x = sample_features(5, 200, seed=0)
    assert x.data.shape == (5, 200)


def test_feature_sampling_is_bitwise_deterministic():
    a = sample_features(64, 8, seed=3).data
    b = sample_features(64, 8, seed=3).data
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_features(64, 8, seed=4).data)


def test_feature_column_means_concentrate():
    n = 100_000
    x = sample_features(n, 8, seed=1).data
    assert np.max(np.abs(x.mean(axis=0))) <= 5.0 / np.sqrt(n)


def test_feature_sampling_validation():
    with pytest.raises(InvalidParameterError):
        sample_features(0, 4, seed=0)
    with pytest.raises(InvalidParameterError):
        sample_features(4, 0, seed=0)


# ---------------------------------------------------------------------------
# aggregation


def test_identity_operator_leaves_features_unchanged():
    op = build_operator(Graph(3, ()), "shift_psd")  # empty graph -> identity
    x = sample_features(3, 5, seed=7)
    ds = aggregate(op, x, layers=1, sigma=1.0)
    assert np.array_equal(ds.samples, x.data)


def test_two_layers_equal_two_single_applications():
    op = build_operator(generate_ba(10, 2, seed=2), "shift_psd")
    x = sample_features(10, 4, seed=5)
    ds = aggregate(op, x, layers=2, sigma=0.5)
    manual = op.matrix @ (op.matrix @ x.data)
    assert np.array_equal(ds.samples, manual)
    assert ds.layers == 2


def test_single_edge_rows_reproduce_the_operator():
    op = build_operator(Graph(2, ((0, 1),)), "shift_psd")
    ds = aggregate(op, FeatureMatrix(np.eye(2), seed=0), layers=1, sigma=0.0)
    np.testing.assert_allclose(ds.samples, [[0.75, 0.25], [0.25, 0.75]], atol=1e-15)


def test_aggregate_attaches_covariance_and_spectrum():
    op = build_operator(generate_ba(12, 2, seed=0), "shift_psd")
    ds = aggregate(op, sample_features(12, 6, seed=1))
    expected = ds.samples.T @ ds.samples / ds.n
    np.testing.assert_allclose(ds.empirical_covariance, expected, atol=1e-12)
    np.testing.assert_allclose(
        ds.spectral.reconstruct(), ds.empirical_covariance, atol=1e-10
    )


def test_aggregate_validation():
    op = build_operator(Graph(3, ()), "shift_psd")
    x = sample_features(3, 2, seed=0)
    with pytest.raises(InvalidParameterError):
        aggregate(op, x, layers=0)
    with pytest.raises(DimensionMismatchError):
        aggregate(op, sample_features(4, 2, seed=0))
    with pytest.raises(InvalidParameterError):
        aggregate(op, x, sigma=-1.0)


def test_aggregated_covariance_is_psd_for_shift_operator():
    for seed in range(20):
        op = build_operator(generate_ba(15, 2, seed), "shift_psd")
        ds = aggregate(op, sample_features(15, 6, seed + 100))
        assert ds.spectral.eigenvalues.min() >= -1e-10


def test_covariance_spectrum_mirrors_the_squared_operator():
    # Order agreement between the top of the aggregation covariance spectrum
    # and the top of the squared-operator spectrum on a hub-heavy graph.
    g = generate_ba(500, 3, seed=0)
    op = build_operator(g, "shift_psd")
    ds = aggregate(op, sample_features(500, 64, seed=1))
    top_cov = ds.spectral.eigenvalues[:10]
    squared = np.sort(np.linalg.eigvalsh(op.matrix @ op.matrix))[::-1][:10]
    assert np.array_equal(np.argsort(-top_cov), np.argsort(-squared))
    rho = spearmanr(top_cov / top_cov[0], squared / squared[0]).statistic
    assert rho >= 1.0 - 1e-9


# ---------------------------------------------------------------------------
# spectrum-path sampling


def test_isotropic_sampling_covariance_is_near_identity():
    ds = sample_from_spectrum(synthetic_spectrum(6, 0.0), 20_000, 1.0, seed=9)
    np.testing.assert_allclose(ds.empirical_covariance, np.eye(6), atol=0.08)


def test_rank_one_spectrum_confines_rows_to_the_top_eigenvector():
    basis = eigh_symmetric(np.array([[2.0, 1.0], [1.0, 2.0]]))
    spec = _basis_spectrum([1.0, 0.0])
    rotated = type(spec)(spec.eigenvalues, basis.eigenvectors)
    ds = sample_from_spectrum(rotated, 50, 1.0, seed=3)
    off_axis = ds.samples @ basis.eigenvectors[:, 1]
    np.testing.assert_allclose(off_axis, 0.0, atol=1e-12)


def test_sampled_variances_match_the_prescribed_spectrum():
    ds = sample_from_spectrum(_basis_spectrum([2.0, 0.5]), 100_000, 1.0, seed=5)
    diag = np.diag(ds.empirical_covariance)
    assert abs(diag[0] - 2.0) <= 0.05 * 2.0
    assert abs(diag[1] - 0.5) <= 0.05 * 0.5


def test_symmetrize_appends_negated_rows_and_keeps_covariance():
    base = sample_from_spectrum(synthetic_spectrum(4, 1.0), 200, 1.0, seed=8)
    sym = sample_from_spectrum(synthetic_spectrum(4, 1.0), 200, 1.0, seed=8,
                               symmetrize=True)
    assert sym.n == 2 * base.n
    assert sym.symmetrized
    assert np.array_equal(sym.samples[200:], -sym.samples[:200])
    assert np.max(np.abs(sym.empirical_covariance - base.empirical_covariance)) <= 1e-12


def test_negative_spectrum_rejected():
    spec = _basis_spectrum([1.0, -0.5])
    with pytest.raises(InvalidParameterError):
        sample_from_spectrum(spec, 10, 1.0, seed=0)


# ---------------------------------------------------------------------------
# ground truth


def test_head_one_is_the_top_eigenvector():
    basis = eigh_symmetric(np.array([[2.0, 1.0], [1.0, 2.0]]))
    gt = make_ground_truth(basis, "head", k=1)
    np.testing.assert_allclose(gt.theta_star, basis.eigenvectors[:, 0], atol=1e-12)
    assert abs(np.linalg.norm(gt.theta_star) - 1.0) <= 1e-12


def test_head_and_tail_single_directions_are_orthogonal():
    basis = eigh_symmetric(np.array([[2.0, 1.0], [1.0, 2.0]]))
    head = make_ground_truth(basis, "head", k=1)
    tail = make_ground_truth(basis, "tail", k=1)
    assert abs(head.theta_star @ tail.theta_star) <= 1e-12


def test_weighted_zero_exponent_spreads_evenly():
    gt = make_ground_truth(_basis_spectrum([4.0, 2.0, 1.0, 0.5]), "weighted", p=0.0)
    np.testing.assert_allclose(gt.coords, np.full(4, 0.5), atol=1e-15)


def test_alignment_width_defaults_to_a_tenth_of_the_dimension():
    gt = make_ground_truth(_basis_spectrum(np.linspace(2.0, 1.0, 64)), "head")
    expected = np.zeros(64)
    expected[:7] = 1.0 / np.sqrt(7.0)  # ceil(64 / 10)
    np.testing.assert_allclose(gt.coords, expected, atol=1e-15)
    assert gt.mode == "head(7)"


def test_coordinates_are_unit_norm_in_every_mode():
    spec = _basis_spectrum(synthetic_spectrum(12, 1.0).values)
    for mode, kw in (("head", {"k": 3}), ("tail", {"k": 5}),
                     ("weighted", {"p": 1.5}), ("weighted", {"p": -0.5})):
        gt = make_ground_truth(spec, mode, **kw)
        assert abs(np.sum(gt.coords**2) - 1.0) <= 1e-12


def test_ground_truth_validation():
    spec = _basis_spectrum([1.0, 0.5])
    with pytest.raises(InvalidParameterError):
        make_ground_truth(spec, "head", k=0)
    with pytest.raises(InvalidParameterError):
        make_ground_truth(spec, "tail", k=3)
    with pytest.raises(InvalidParameterError):
        make_ground_truth(spec, "weighted")
    with pytest.raises(InvalidParameterError):
        make_ground_truth(spec, "sideways")
    with pytest.raises(InvalidParameterError):
        # negative exponent meets a zero eigenvalue
        make_ground_truth(_basis_spectrum([1.0, 0.0]), "weighted", p=-1.0)


# ---------------------------------------------------------------------------
# responses


def test_zero_target_and_zero_noise_give_zero_responses():
    ds = sample_from_spectrum(synthetic_spectrum(3, 1.0), 20, 0.0, seed=2)
    gt = GroundTruth(theta_star=np.zeros(3), mode="null", coords=np.zeros(3))
    assert np.array_equal(generate_responses(ds, gt, seed=0), np.zeros(20))


def test_positive_margins_make_responses_linear():
    spec = _basis_spectrum([1.0, 1.0])
    ds = sample_from_spectrum(spec, 40, 0.0, seed=4)
    gt = make_ground_truth(spec, "head", k=2)
    # flip rows so every margin is non-negative, leaving the relu inactive
    signs = np.where(ds.samples @ gt.theta_star >= 0.0, 1.0, -1.0)
    flipped = type(ds)(ds.samples * signs[:, None], ds.empirical_covariance,
                       ds.spectral, 0.0, 1, False)
    y = generate_responses(flipped, gt, seed=0)
    assert np.array_equal(y, flipped.samples @ gt.theta_star)


def test_noise_variance_matches_sigma():
    spec = _basis_spectrum([1.0, 0.5])
    ds = sample_from_spectrum(spec, 10_000, 1.0, seed=6)
    gt = make_ground_truth(spec, "head", k=1)
    clean = np.maximum(ds.samples @ gt.theta_star, 0.0)
    noise = generate_responses(ds, gt, seed=7) - clean
    assert abs(np.var(noise) - 1.0) <= 0.1


def test_responses_dimension_mismatch():
    ds = sample_from_spectrum(synthetic_spectrum(3, 1.0), 10, 1.0, seed=0)
    gt = make_ground_truth(_basis_spectrum([1.0, 0.5]), "head", k=1)
    with pytest.raises(DimensionMismatchError):
        generate_responses(ds, gt, seed=0)


# ---------------------------------------------------------------------------
# subsetting and export


def test_subset_recomputes_covariance():
    ds = sample_from_spectrum(synthetic_spectrum(4, 1.0), 60, 1.0, seed=1)
    sub = subset_rows(ds, np.arange(10))
    assert sub.n == 10
    np.testing.assert_allclose(
        sub.empirical_covariance, sub.samples.T @ sub.samples / 10.0, atol=1e-12
    )
    with pytest.raises(InvalidParameterError):
        subset_rows(ds, np.array([], dtype=int))


def test_dataset_export_round_trip(tmp_path):
    spec = _basis_spectrum([1.0, 0.5])
    ds = sample_from_spectrum(spec, 6, 1.0, seed=2)
    gt = make_ground_truth(spec, "head", k=1)
    y = generate_responses(ds, gt, seed=3)
    csv_path = tmp_path / "data.csv"
    sidecar_path = tmp_path / "data.json"
    save_dataset(ds, y, csv_path, sidecar_path, seed=2, mode=gt.mode)

    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == ds.n + 1
    parsed = np.array([[float(v) for v in line.split(",")] for line in lines[:-1]])
    assert np.array_equal(parsed, ds.samples)
    assert np.array_equal(np.array([float(v) for v in lines[-1].split(",")]), y)

    sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
    assert sidecar == {"n": 6, "d": 2, "L": 1, "sigma": 1.0, "seed": 2, "mode": "head(1)"}
