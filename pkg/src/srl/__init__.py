"""Spectral risk laboratory for linear GNN regression.

Synthetic graph and spectrum generation, tail-averaged SGD and ridge on
ReLU-readout aggregated data, exact excess-risk measurement, closed-form
bias/variance bound evaluation, and a seeded experiment harness.
"""

from .bounds import (
    BoundProfile,
    CutoffIndices,
    ridge_cutoff,
    ridge_risk_bound,
    sgd_cutoffs,
    sgd_risk_bound,
)
from .errors import (
    DimensionMismatchError,
    GenerationFailureError,
    InvalidParameterError,
    NotSymmetricError,
    SingularSystemError,
    SrlError,
)
from .graphs import (
    Graph,
    GraphOperator,
    build_operator,
    generate_ba,
    generate_regular,
    laplacian,
    load_graph,
    normalized_adjacency,
    save_graph,
)
from .harness import (
    ExperimentConfig,
    run_bounds_sweep,
    run_comparison,
    run_experiment,
    run_from_manifest,
    run_oversmoothing,
    run_spectrum_study,
    tune_hyperparameter,
)
from .learners import (
    Estimator,
    RidgeConfig,
    SgdConfig,
    ols_fit,
    ridge_fit,
    sgd_tail_averaged,
)
from .risk import (
    RiskReport,
    bias_variance_split,
    excess_risk,
    quadratic_proxy,
    risk_report,
    weighted_norms,
)
from .spectral import (
    DecaySpectrum,
    SpectralDecomposition,
    eigh_symmetric,
    fit_decay_rate,
    ratio_amplification_check,
    stack_spectrum,
    synthetic_spectrum,
)
from .svgplot import AxesConfig, Series, emit_svg_plot
from .synthesis import (
    AggregationDataset,
    GroundTruth,
    aggregate,
    generate_responses,
    make_ground_truth,
    sample_features,
    sample_from_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationDataset",
    "AxesConfig",
    "BoundProfile",
    "CutoffIndices",
    "DecaySpectrum",
    "DimensionMismatchError",
    "Estimator",
    "ExperimentConfig",
    "GenerationFailureError",
    "Graph",
    "GraphOperator",
    "GroundTruth",
    "InvalidParameterError",
    "NotSymmetricError",
    "RidgeConfig",
    "RiskReport",
    "Series",
    "SgdConfig",
    "SingularSystemError",
    "SpectralDecomposition",
    "SrlError",
    "aggregate",
    "bias_variance_split",
    "build_operator",
    "eigh_symmetric",
    "emit_svg_plot",
    "excess_risk",
    "fit_decay_rate",
    "generate_ba",
    "generate_regular",
    "generate_responses",
    "laplacian",
    "load_graph",
    "make_ground_truth",
    "normalized_adjacency",
    "ols_fit",
    "quadratic_proxy",
    "ratio_amplification_check",
    "ridge_cutoff",
    "ridge_fit",
    "ridge_risk_bound",
    "risk_report",
    "run_bounds_sweep",
    "run_comparison",
    "run_experiment",
    "run_from_manifest",
    "run_oversmoothing",
    "run_spectrum_study",
    "sample_features",
    "sample_from_spectrum",
    "save_graph",
    "sgd_cutoffs",
    "sgd_risk_bound",
    "sgd_tail_averaged",
    "stack_spectrum",
    "synthetic_spectrum",
    "tune_hyperparameter",
    "weighted_norms",
    "__version__",
]
