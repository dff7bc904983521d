"""Experiment orchestration: seeded trials, hyperparameter grids, artifacts.

Four experiments share one config type:

* spectrum_study   — eigenvalue decay of a power-law vs a regular graph,
                     both for the operator and for the aggregation covariance;
* sgd_vs_ridge     — tuned tail-averaged SGD against tuned ridge on the same
                     data, per-trial risks and medians;
* oversmoothing    — a fixed task is defined from the one-round aggregation,
                     then deeper aggregations are trained on the same labels
                     and scored against the same clean targets;
* bounds_sweep     — measured risk over a sample-budget grid overlaid with
                     the closed-form upper/lower profiles.

Every run writes results CSVs, an SVG plot, and a JSON manifest from which
the run can be reproduced byte-for-byte.  Trials derive their random
streams from (master seed, trial index, role), so serial and parallel
execution agree.
"""

from __future__ import annotations

import dataclasses
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .bounds import BOUNDS_CSV_HEADER, ridge_risk_bound, sgd_risk_bound
from .errors import InvalidParameterError, SrlError
from .graphs import (
    OPERATOR_KINDS,
    build_operator,
    generate_ba,
    generate_regular,
    laplacian,
)
from .learners import SAMPLING_MODES, Estimator, RidgeConfig, SgdConfig, ridge_fit, sgd_tail_averaged
from .risk import RiskReport, excess_risk, risk_report
from .rng import derive, stream
from .spectral import eigh_symmetric, fit_decay_rate, ratio_amplification_check, synthetic_spectrum
from .svgplot import AxesConfig, Series, emit_svg_plot
from .synthesis import (
    aggregate,
    generate_responses,
    make_ground_truth,
    sample_features,
    sample_from_spectrum,
    subset_rows,
)

EXPERIMENTS = ("spectrum_study", "sgd_vs_ridge", "oversmoothing", "bounds_sweep")
ALIGN_MODES = ("head", "tail", "weighted")
DATA_PATHS = ("graph", "spectrum")
GRAPH_MODELS = ("ba", "regular")
ALGORITHMS = ("sgd", "ridge")

RESULTS_CSV_HEADER = "experiment,trial,algorithm,hyperparameter,delta,bias_hat,var_hat,L,beta,N,seed"
MANIFEST_VERSION = 1

# role indices for per-trial stream derivation
_ROLE_ROWS = 0
_ROLE_NOISE = 1
_ROLE_SPLIT = 2
_ROLE_TRAIN = 3
_ROLE_GRAPH = 4


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment run (everything but the output dir)."""

    experiment: str = "sgd_vs_ridge"
    data: str = "spectrum"
    graph_model: str = "ba"
    n: int = 1536
    d: int = 128
    ba_m: int = 3
    reg_degree: int = 6
    operator: str = "shift_psd"
    beta: float = 2.0
    layers: tuple[int, ...] = (1, 2, 3)
    sigma: float = 1.0
    iterations: int = 1024
    align: str = "head"
    align_k: int = 24
    align_p: float = 1.0
    gamma_grid: tuple[float, ...] = ()
    lambda_grid: tuple[float, ...] = ()
    trials: int = 5
    validation_fraction: float = 1 / 3
    algorithm: str = "sgd"
    sampling: str = "with_replacement"
    n_grid: tuple[int, ...] = (128, 256, 512, 1024, 2048)
    head_window: int = 100
    b: float = 2.0
    seed: int = 0
    jobs: int = 1


@dataclass(frozen=True)
class TrialResult:
    trial: int
    algorithm: str
    hyperparameter: float
    report: RiskReport
    wall_time: float
    layers: int = 1


def validate_config(cfg: ExperimentConfig) -> None:
    checks = (
        (cfg.experiment in EXPERIMENTS, f"unknown experiment {cfg.experiment!r}"),
        (cfg.data in DATA_PATHS, f"data path must be one of {DATA_PATHS}, got {cfg.data!r}"),
        (cfg.graph_model in GRAPH_MODELS, f"unknown graph model {cfg.graph_model!r}"),
        (cfg.operator in OPERATOR_KINDS, f"unknown operator {cfg.operator!r}"),
        (cfg.align in ALIGN_MODES, f"alignment must be one of {ALIGN_MODES}, got {cfg.align!r}"),
        (cfg.algorithm in ALGORITHMS, f"algorithm must be one of {ALGORITHMS}, got {cfg.algorithm!r}"),
        (cfg.sampling in SAMPLING_MODES, f"sampling must be one of {SAMPLING_MODES}, got {cfg.sampling!r}"),
        (cfg.n >= 2, f"n must be >= 2, got {cfg.n}"),
        (cfg.d >= 1, f"d must be >= 1, got {cfg.d}"),
        (cfg.trials >= 1, f"trials must be >= 1, got {cfg.trials}"),
        (0.0 < cfg.validation_fraction <= 0.5,
         f"validation fraction must be in (0, 0.5], got {cfg.validation_fraction}"),
        (cfg.sigma >= 0, f"sigma must be >= 0, got {cfg.sigma}"),
        (cfg.beta >= 0, f"beta must be >= 0, got {cfg.beta}"),
        (cfg.iterations >= 2 and cfg.iterations % 2 == 0,
         f"iterations must be even and >= 2, got {cfg.iterations}"),
        (len(cfg.layers) >= 1 and all(1 <= L <= 8 for L in cfg.layers),
         f"layers must be a non-empty subset of 1..8, got {cfg.layers}"),
        (cfg.align_k >= 1, f"align-k must be >= 1, got {cfg.align_k}"),
        (all(g > 0 for g in cfg.gamma_grid), f"gamma grid must be positive, got {cfg.gamma_grid}"),
        (all(v >= 0 for v in cfg.lambda_grid), f"lambda grid must be >= 0, got {cfg.lambda_grid}"),
        (len(cfg.n_grid) >= 1 and all(v >= 2 and v % 2 == 0 for v in cfg.n_grid),
         f"n-grid entries must be even and >= 2, got {cfg.n_grid}"),
        (cfg.head_window >= 2, f"head window must be >= 2, got {cfg.head_window}"),
        (cfg.b > 1, f"ridge cutoff constant must be > 1, got {cfg.b}"),
        (cfg.jobs >= 1, f"jobs must be >= 1, got {cfg.jobs}"),
    )
    for ok, message in checks:
        if not ok:
            raise InvalidParameterError(message)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    out = dataclasses.asdict(cfg)
    for key, value in out.items():
        if isinstance(value, tuple):
            out[key] = list(value)
    return out


def config_from_dict(payload: dict) -> ExperimentConfig:
    names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = sorted(set(payload) - names)
    if unknown:
        raise InvalidParameterError(f"unknown config keys: {', '.join(unknown)}")
    coerced = {}
    for key, value in payload.items():
        if isinstance(value, list):
            value = tuple(value)
        coerced[key] = value
    cfg = ExperimentConfig(**coerced)
    validate_config(cfg)
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# grids, splits, tuning


def default_lambda_grid() -> tuple[float, ...]:
    return tuple(float(v) for v in np.logspace(np.log10(0.1), np.log10(1000.0), 13))


def default_gamma_grid(trace: float) -> tuple[float, ...]:
    if trace <= 0:
        raise InvalidParameterError("covariance trace must be positive to build a stepsize grid")
    return tuple(float(v) for v in np.logspace(-3.0, 0.0, 10) / trace)


def clip_gamma_grid(grid: Sequence[float], trace: float) -> tuple[float, ...]:
    """Restrict a stepsize grid to (0, 1/trace], collapsing clipped duplicates."""
    if trace <= 0:
        raise InvalidParameterError("covariance trace must be positive")
    limit = 1.0 / trace
    kept = sorted({min(float(g), limit) for g in grid if g > 0})
    if not kept:
        raise InvalidParameterError("stepsize grid is empty after clipping to (0, 1/trace]")
    return tuple(kept)


def split_indices(n: int, fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint (train, validation) index sets covering range(n)."""
    if not 0.0 < fraction <= 0.5:
        raise InvalidParameterError(f"validation fraction must be in (0, 0.5], got {fraction}")
    if n < 2:
        raise InvalidParameterError(f"need at least 2 rows to split, got {n}")
    n_val = max(1, int(round(n * fraction)))
    perm = stream(seed).permutation(n)
    val = np.sort(perm[:n_val])
    train = np.sort(perm[n_val:])
    return train, val


def _validation_score(theta: np.ndarray, ds, y: np.ndarray) -> float:
    pred = np.maximum(ds.samples @ theta, 0.0)
    return float(np.mean((pred - y) ** 2) / 2.0)


def tune_hyperparameter(
    trainer: Callable[[float, object, np.ndarray], Estimator],
    grid: Sequence[float],
    train: tuple,
    validation: tuple,
) -> tuple[float, Estimator]:
    """Pick the grid value whose trained model scores best on held-out rows.

    trainer(value, ds, y) fits one model; train and validation are (dataset,
    responses) pairs with disjoint rows.  Failed grid points are skipped;
    ties break toward the smaller value.
    """
    if len(grid) == 0:
        raise InvalidParameterError("hyperparameter grid is empty")
    train_ds, y_train = train
    val_ds, y_val = validation
    best: tuple[float, Estimator] | None = None
    best_score = np.inf
    failures: list[str] = []
    for value in sorted(float(v) for v in grid):
        try:
            est = trainer(value, train_ds, y_train)
        except SrlError as exc:
            failures.append(f"{value:g}: {exc}")
            continue
        score = _validation_score(est.theta, val_ds, y_val)
        if score < best_score:
            best_score = score
            best = (value, est)
    if best is None:
        raise SrlError("every grid point failed: " + "; ".join(failures))
    return best


# ---------------------------------------------------------------------------
# shared assembly helpers


def _make_graph(cfg: ExperimentConfig, seed: int):
    if cfg.graph_model == "ba":
        return generate_ba(cfg.n, cfg.ba_m, seed)
    return generate_regular(cfg.n, cfg.reg_degree, seed)


def _trial_dataset(cfg: ExperimentConfig, trial: int, layers: int = 1):
    """Aggregated rows for one trial, via the configured data path."""
    row_seed = derive(cfg.seed, trial, _ROLE_ROWS)
    if cfg.data == "spectrum":
        model = synthetic_spectrum(cfg.d, cfg.beta)
        ds = sample_from_spectrum(model, cfg.n, cfg.sigma, row_seed)
        return ds, model.as_decomposition()
    graph = _make_graph(cfg, derive(cfg.seed, trial, _ROLE_GRAPH))
    op = build_operator(graph, cfg.operator)
    x = sample_features(cfg.n, cfg.d, row_seed)
    ds = aggregate(op, x, layers=layers, sigma=cfg.sigma)
    return ds, ds.spectral


def _ground_truth(cfg: ExperimentConfig, basis):
    k = cfg.align_k if cfg.align in ("head", "tail") else None
    p = cfg.align_p if cfg.align == "weighted" else None
    return make_ground_truth(basis, cfg.align, k=k, p=p)


def _sgd_trainer(cfg: ExperimentConfig, seed: int, iterations: int | None = None):
    steps = cfg.iterations if iterations is None else iterations

    def fit(gamma: float, ds, y: np.ndarray) -> Estimator:
        sgd_cfg = SgdConfig(gamma=gamma, iterations=steps, sampling=cfg.sampling, seed=seed)
        return sgd_tail_averaged(ds, y, sgd_cfg)

    return fit


def _ridge_trainer(lam: float, ds, y: np.ndarray) -> Estimator:
    return ridge_fit(ds, y, RidgeConfig(lam=lam))


def _effective_gamma_grid(cfg: ExperimentConfig, train_ds) -> tuple[float, ...]:
    trace = float(np.trace(train_ds.empirical_covariance))
    if cfg.gamma_grid:
        return clip_gamma_grid(cfg.gamma_grid, trace)
    return default_gamma_grid(trace)


def _effective_lambda_grid(cfg: ExperimentConfig) -> tuple[float, ...]:
    return cfg.lambda_grid if cfg.lambda_grid else default_lambda_grid()


def _run_trials(worker: Callable[[int], object], n_trials: int, jobs: int) -> list:
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, range(n_trials)))
    return [worker(t) for t in range(n_trials)]


def _fmt(value: float) -> str:
    return repr(float(value))


def _results_row(
    cfg: ExperimentConfig,
    trial: int,
    algorithm: str,
    hyper: float,
    report: RiskReport,
    layers: int,
    budget: int,
) -> str:
    beta = cfg.beta if cfg.data == "spectrum" else float("nan")
    return ",".join(
        [
            cfg.experiment,
            str(trial),
            algorithm,
            _fmt(hyper),
            _fmt(report.delta),
            _fmt(report.bias_hat),
            _fmt(report.var_hat),
            str(layers),
            _fmt(beta),
            str(budget),
            str(cfg.seed),
        ]
    )


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_csv(path: Path, header: str, rows: Sequence[str]) -> None:
    _write_text(path, "\n".join([header, *rows]) + "\n")


def _write_manifest(cfg: ExperimentConfig, out_dir: Path, outputs: Sequence[str]) -> Path:
    payload = {
        "version": MANIFEST_VERSION,
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "config": config_to_dict(cfg),
        "outputs": sorted(outputs),
    }
    path = out_dir / "manifest.json"
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _prepare_out(out_dir) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# experiment: spectrum_study


def run_spectrum_study(cfg: ExperimentConfig, out_dir) -> Path:
    """Operator and covariance spectra of a BA vs a regular graph, with decay fits."""
    validate_config(cfg)
    if cfg.experiment != "spectrum_study":
        raise InvalidParameterError(f"config is for {cfg.experiment!r}, not spectrum_study")
    out = _prepare_out(out_dir)

    graphs = {
        "ba": generate_ba(cfg.n, cfg.ba_m, derive(cfg.seed, 0)),
        "regular": generate_regular(cfg.n, cfg.reg_degree, derive(cfg.seed, 1)),
    }
    x = sample_features(cfg.n, cfg.d, derive(cfg.seed, 2))

    spectra_rows: list[str] = []
    laplacian_rows: list[str] = []
    summary_rows: list[str] = []
    plot_series: list[Series] = []
    for name, graph in graphs.items():
        op = build_operator(graph, cfg.operator)
        op_eigs = eigh_symmetric(op.matrix).eigenvalues
        ds = aggregate(op, x, layers=1, sigma=cfg.sigma)
        cov_eigs = ds.spectral.eigenvalues
        lap_eigs = eigh_symmetric(laplacian(graph)).eigenvalues
        for source, eigs in (
            ("operator", op_eigs),
            ("covariance", cov_eigs),
            ("laplacian", lap_eigs),
        ):
            if source == "laplacian":
                laplacian_rows.extend(
                    f"{name},{i + 1},{_fmt(v)}" for i, v in enumerate(eigs)
                )
            else:
                spectra_rows.extend(
                    f"{name},{source},{i + 1},{_fmt(v)}" for i, v in enumerate(eigs)
                )
            beta_hat = fit_decay_rate(eigs, head=cfg.head_window)
            summary_rows.append(f"{name},{source},{_fmt(beta_hat)}")
            window = eigs[: min(cfg.head_window, eigs.size)]
            plot_series.append(
                Series.make(f"{name} {source}", np.arange(1, window.size + 1), window)
            )

    _write_csv(out / "spectra.csv", "graph,source,index,eigenvalue", spectra_rows)
    _write_csv(out / "laplacian.csv", "graph,index,eigenvalue", laplacian_rows)
    _write_csv(out / "summary.csv", "graph,source,beta_hat", summary_rows)
    emit_svg_plot(
        plot_series,
        AxesConfig(title="eigenvalue decay", x_label="index", y_label="eigenvalue",
                   log_x=True, log_y=True),
        out / "spectra.svg",
    )
    return _write_manifest(
        cfg, out, ["spectra.csv", "laplacian.csv", "summary.csv", "spectra.svg"]
    )


# ---------------------------------------------------------------------------
# experiment: sgd_vs_ridge


def _comparison_trial(cfg: ExperimentConfig, trial: int) -> tuple[TrialResult, TrialResult]:
    started = time.perf_counter()
    ds, basis = _trial_dataset(cfg, trial, layers=min(cfg.layers))
    gt = _ground_truth(cfg, basis)
    y = generate_responses(ds, gt, derive(cfg.seed, trial, _ROLE_NOISE))
    train_idx, val_idx = split_indices(ds.n, cfg.validation_fraction,
                                       derive(cfg.seed, trial, _ROLE_SPLIT))
    train_ds, val_ds = subset_rows(ds, train_idx), subset_rows(ds, val_idx)
    y_train, y_val = y[train_idx], y[val_idx]

    gamma, sgd_est = tune_hyperparameter(
        _sgd_trainer(cfg, derive(cfg.seed, trial, _ROLE_TRAIN)),
        _effective_gamma_grid(cfg, train_ds),
        (train_ds, y_train),
        (val_ds, y_val),
    )
    lam, ridge_est = tune_hyperparameter(
        _ridge_trainer, _effective_lambda_grid(cfg), (train_ds, y_train), (val_ds, y_val)
    )
    wall = time.perf_counter() - started
    return (
        TrialResult(trial, "sgd", gamma, risk_report(sgd_est.theta, gt, ds), wall, min(cfg.layers)),
        TrialResult(trial, "ridge", lam, risk_report(ridge_est.theta, gt, ds), wall, min(cfg.layers)),
    )


def run_comparison(cfg: ExperimentConfig, out_dir) -> Path:
    """Tuned SGD vs tuned ridge on identical data; per-trial risks and medians."""
    validate_config(cfg)
    if cfg.experiment != "sgd_vs_ridge":
        raise InvalidParameterError(f"config is for {cfg.experiment!r}, not sgd_vs_ridge")
    out = _prepare_out(out_dir)

    pairs = _run_trials(lambda t: _comparison_trial(cfg, t), cfg.trials, cfg.jobs)
    rows = []
    by_algorithm: dict[str, list[TrialResult]] = {"sgd": [], "ridge": []}
    for pair in pairs:
        for res in pair:
            by_algorithm[res.algorithm].append(res)
            rows.append(
                _results_row(cfg, res.trial, res.algorithm, res.hyperparameter,
                             res.report, res.layers, cfg.iterations)
            )
    _write_csv(out / "results.csv", RESULTS_CSV_HEADER, rows)

    summary_rows = []
    for algorithm in ("sgd", "ridge"):
        deltas = [r.report.delta for r in by_algorithm[algorithm]]
        hypers = [r.hyperparameter for r in by_algorithm[algorithm]]
        summary_rows.append(
            f"{algorithm},{_fmt(np.median(deltas))},{_fmt(np.median(hypers))}"
        )
    _write_csv(out / "summary.csv", "algorithm,median_delta,median_hyperparameter", summary_rows)

    emit_svg_plot(
        [
            Series.make(algorithm, [r.trial + 1 for r in by_algorithm[algorithm]],
                        [max(r.report.delta, 1e-300) for r in by_algorithm[algorithm]])
            for algorithm in ("sgd", "ridge")
        ],
        AxesConfig(title="excess risk per trial", x_label="trial", y_label="excess risk",
                   log_y=True),
        out / "comparison.svg",
    )
    return _write_manifest(cfg, out, ["results.csv", "summary.csv", "comparison.svg"])


# ---------------------------------------------------------------------------
# experiment: oversmoothing


def _oversmoothing_trial(cfg: ExperimentConfig, trial: int) -> list[dict]:
    started = time.perf_counter()
    graph = _make_graph(cfg, derive(cfg.seed, trial, _ROLE_GRAPH))
    op = build_operator(graph, cfg.operator)
    x = sample_features(cfg.n, cfg.d, derive(cfg.seed, trial, _ROLE_ROWS))

    # theta* is aligned once, against the single-round spectrum basis, and
    # kept fixed while the aggregation is rebuilt at each depth
    ds_one = aggregate(op, x, layers=1, sigma=cfg.sigma)
    gt = _ground_truth(cfg, ds_one.spectral)
    train_idx, val_idx = split_indices(cfg.n, cfg.validation_fraction,
                                       derive(cfg.seed, trial, _ROLE_SPLIT))

    op_spectrum = eigh_symmetric(op.matrix)
    records = []
    for layers in cfg.layers:
        ds = aggregate(op, x, layers=layers, sigma=cfg.sigma)
        # same noise stream at every depth: the seed pins the draw, so the
        # depth curves differ only through the aggregation
        y = generate_responses(ds, gt, derive(cfg.seed, trial, _ROLE_NOISE))
        train_ds, val_ds = subset_rows(ds, train_idx), subset_rows(ds, val_idx)
        y_train, y_val = y[train_idx], y[val_idx]
        if cfg.algorithm == "sgd":
            trainer = _sgd_trainer(cfg, derive(cfg.seed, trial, _ROLE_TRAIN))
            grid = _effective_gamma_grid(cfg, train_ds)
        else:
            trainer = _ridge_trainer
            grid = _effective_lambda_grid(cfg)
        hyper, est = tune_hyperparameter(trainer, grid, (train_ds, y_train), (val_ds, y_val))
        mu = op_spectrum.eigenvalues
        distinct = np.flatnonzero(mu[0] - mu > 1e-9)
        amplified = True
        if distinct.size:
            j = int(distinct[0]) + 1
            amplified = ratio_amplification_check(op_spectrum, 1, j, layers)
        records.append(
            {
                "trial": trial,
                "layers": layers,
                "hyper": hyper,
                "delta": excess_risk(est.theta, gt, ds),
                "delta_null": excess_risk(np.zeros(cfg.d), gt, ds),
                "amplified": amplified,
                "wall": time.perf_counter() - started,
            }
        )
    return records


def run_oversmoothing(cfg: ExperimentConfig, out_dir) -> Path:
    """Task risk as aggregation depth grows, for one alignment of the target."""
    validate_config(cfg)
    if cfg.experiment != "oversmoothing":
        raise InvalidParameterError(f"config is for {cfg.experiment!r}, not oversmoothing")
    if cfg.data != "graph":
        raise InvalidParameterError("oversmoothing runs on the graph data path")
    out = _prepare_out(out_dir)

    all_records = [
        rec
        for trial_records in _run_trials(lambda t: _oversmoothing_trial(cfg, t),
                                         cfg.trials, cfg.jobs)
        for rec in trial_records
    ]
    rows = []
    for rec in all_records:
        report = RiskReport(delta=rec["delta"], proxy=float("nan"), k=0,
                            head_norm=float("nan"), tail_norm=float("nan"))
        rows.append(
            _results_row(cfg, rec["trial"], cfg.algorithm, rec["hyper"], report,
                         rec["layers"], cfg.iterations)
        )
    _write_csv(out / "results.csv", RESULTS_CSV_HEADER, rows)

    summary_rows = []
    medians = []
    for layers in cfg.layers:
        here = [r for r in all_records if r["layers"] == layers]
        med = float(np.median([r["delta"] for r in here]))
        null = float(np.median([r["delta_null"] for r in here]))
        ok = all(r["amplified"] for r in here)
        summary_rows.append(f"{layers},{_fmt(med)},{_fmt(null)},{str(ok).lower()}")
        medians.append(med)
    _write_csv(out / "summary.csv", "L,median_delta,median_null_delta,ratio_amplified",
               summary_rows)

    emit_svg_plot(
        [Series.make(f"{cfg.align}({cfg.align_k})", list(cfg.layers), medians)],
        AxesConfig(title="task risk vs aggregation depth", x_label="rounds",
                   y_label="median excess risk"),
        out / "oversmoothing.svg",
    )
    return _write_manifest(cfg, out, ["results.csv", "summary.csv", "oversmoothing.svg"])


# ---------------------------------------------------------------------------
# experiment: bounds_sweep


def _bounds_measure_trial(cfg: ExperimentConfig, budget: int, trial: int,
                          gamma: float, lam: float) -> dict:
    model = synthetic_spectrum(cfg.d, cfg.beta)
    seed_tag = 1000 + budget
    ds = sample_from_spectrum(model, budget, cfg.sigma,
                              derive(cfg.seed, trial, seed_tag, _ROLE_ROWS))
    gt = make_ground_truth(
        model.as_decomposition(), cfg.align,
        k=cfg.align_k if cfg.align in ("head", "tail") else None,
        p=cfg.align_p if cfg.align == "weighted" else None,
    )
    y = generate_responses(ds, gt, derive(cfg.seed, trial, seed_tag, _ROLE_NOISE))
    sgd_cfg = SgdConfig(gamma=gamma, iterations=budget, sampling=cfg.sampling,
                        seed=derive(cfg.seed, trial, seed_tag, _ROLE_TRAIN))
    sgd_est = sgd_tail_averaged(ds, y, sgd_cfg)
    ridge_est = ridge_fit(ds, y, RidgeConfig(lam=lam))
    return {
        "trial": trial,
        "sgd": excess_risk(sgd_est.theta, gt, ds),
        "ridge": excess_risk(ridge_est.theta, gt, ds),
    }


def run_bounds_sweep(cfg: ExperimentConfig, out_dir) -> Path:
    """Median measured risk vs sample budget, overlaid with bound profiles."""
    validate_config(cfg)
    if cfg.experiment != "bounds_sweep":
        raise InvalidParameterError(f"config is for {cfg.experiment!r}, not bounds_sweep")
    if cfg.data != "spectrum":
        raise InvalidParameterError("bounds_sweep runs on the spectrum data path")
    out = _prepare_out(out_dir)

    model = synthetic_spectrum(cfg.d, cfg.beta)
    mu = model.values
    gt = make_ground_truth(
        model.as_decomposition(), cfg.align,
        k=cfg.align_k if cfg.align in ("head", "tail") else None,
        p=cfg.align_p if cfg.align == "weighted" else None,
    )

    # tune once at the largest budget, then hold hyperparameters fixed
    budgets = tuple(sorted(cfg.n_grid))
    tune_cfg = dataclasses.replace(cfg, n=max(budgets), iterations=max(budgets),
                                   experiment="sgd_vs_ridge")
    ds, _ = _trial_dataset(tune_cfg, 0)
    y = generate_responses(ds, gt, derive(cfg.seed, 0, _ROLE_NOISE))
    train_idx, val_idx = split_indices(ds.n, cfg.validation_fraction,
                                       derive(cfg.seed, 0, _ROLE_SPLIT))
    train_ds, val_ds = subset_rows(ds, train_idx), subset_rows(ds, val_idx)
    gamma, _ = tune_hyperparameter(
        _sgd_trainer(tune_cfg, derive(cfg.seed, 0, _ROLE_TRAIN)),
        _effective_gamma_grid(cfg, train_ds),
        (train_ds, y[train_idx]),
        (val_ds, y[val_idx]),
    )
    lam, _ = tune_hyperparameter(
        _ridge_trainer, _effective_lambda_grid(cfg), (train_ds, y[train_idx]),
        (val_ds, y[val_idx]),
    )

    # clamp the fixed stepsize into the window where both bound sides apply
    # at every budget: N*gamma*mu_1 >= 1 keeps the smallest budget inside the
    # lower bound's regime, gamma <= 1/tr(mu) keeps the upper bound stable
    trace = float(np.sum(mu))
    if mu[0] > 0.0:
        gamma = max(gamma, 1.0 / (min(budgets) * float(mu[0])))
    gamma = min(gamma, 1.0 / trace)

    results_rows: list[str] = []
    bounds_rows: list[str] = []
    overlay_rows: list[str] = []
    curves: dict[str, list[float]] = {key: [] for key in
                                      ("sgd", "ridge", "sgd upper", "sgd lower",
                                       "ridge upper", "ridge lower")}
    for budget in budgets:
        measures = _run_trials(
            lambda t: _bounds_measure_trial(cfg, budget, t, gamma, lam),
            cfg.trials, cfg.jobs,
        )
        med = {alg: float(np.median([m[alg] for m in measures])) for alg in ("sgd", "ridge")}
        for m in measures:
            for alg, hyper in (("sgd", gamma), ("ridge", lam)):
                report = RiskReport(delta=m[alg], proxy=float("nan"), k=0,
                                    head_norm=float("nan"), tail_norm=float("nan"))
                results_rows.append(
                    _results_row(cfg, m["trial"], alg, hyper, report, 1, budget)
                )
        profiles = {
            ("sgd", "upper"): sgd_risk_bound(mu, gt.coords, budget, gamma, cfg.sigma,
                                             side="upper"),
            ("sgd", "lower"): sgd_risk_bound(mu, gt.coords, budget, gamma, cfg.sigma,
                                             side="lower"),
            ("ridge", "upper"): ridge_risk_bound(mu, gt.coords, budget, lam, cfg.sigma,
                                                 side="upper", b=cfg.b),
            ("ridge", "lower"): ridge_risk_bound(mu, gt.coords, budget, lam, cfg.sigma,
                                                 side="lower", b=cfg.b),
        }
        for profile in profiles.values():
            bounds_rows.append(f"{budget},{profile.csv_row()}")
        overlay_rows.append(
            ",".join(
                [
                    str(budget),
                    _fmt(med["sgd"]),
                    _fmt(med["ridge"]),
                    _fmt(profiles[("sgd", "upper")].total),
                    _fmt(profiles[("sgd", "lower")].total),
                    _fmt(profiles[("ridge", "upper")].total),
                    _fmt(profiles[("ridge", "lower")].total),
                ]
            )
        )
        curves["sgd"].append(med["sgd"])
        curves["ridge"].append(med["ridge"])
        curves["sgd upper"].append(profiles[("sgd", "upper")].total)
        curves["sgd lower"].append(profiles[("sgd", "lower")].total)
        curves["ridge upper"].append(profiles[("ridge", "upper")].total)
        curves["ridge lower"].append(profiles[("ridge", "lower")].total)

    _write_csv(out / "results.csv", RESULTS_CSV_HEADER, results_rows)
    _write_csv(out / "bounds.csv", "N," + BOUNDS_CSV_HEADER, bounds_rows)
    _write_csv(
        out / "overlay.csv",
        "N,sgd_median_delta,ridge_median_delta,sgd_upper,sgd_lower,ridge_upper,ridge_lower",
        overlay_rows,
    )
    series = [
        Series.make(label, budgets, [max(v, 1e-300) for v in values])
        for label, values in curves.items()
    ]
    emit_svg_plot(
        series,
        AxesConfig(title="risk vs sample budget", x_label="N", y_label="excess risk",
                   log_x=True, log_y=True),
        out / "bounds.svg",
    )
    return _write_manifest(
        cfg, out, ["results.csv", "bounds.csv", "overlay.csv", "bounds.svg"]
    )


# ---------------------------------------------------------------------------
# manifests

RUNNERS = {
    "spectrum_study": run_spectrum_study,
    "sgd_vs_ridge": run_comparison,
    "oversmoothing": run_oversmoothing,
    "bounds_sweep": run_bounds_sweep,
}


def run_experiment(cfg: ExperimentConfig, out_dir) -> Path:
    validate_config(cfg)
    return RUNNERS[cfg.experiment](cfg, out_dir)


def run_from_manifest(path, out_dir=None) -> Path:
    """Re-execute a recorded run; artifacts are reproduced byte-for-byte."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    cfg = config_from_dict(payload["config"])
    target = Path(out_dir) if out_dir is not None else Path(path).parent
    return run_experiment(cfg, target)
