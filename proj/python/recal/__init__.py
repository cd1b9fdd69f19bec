"""Online recalibration of black-box probability forecasters.

Wraps any forecaster emitting probabilities in [0, 1]: raw forecasts are
routed into M buckets, each owning an internal-regret-matching calibrator
over the grid {i/N}, so the recalibrated stream is asymptotically calibrated
even on adversarial input while nearly matching the forecaster's accuracy.
"""

from ._core import (
    CalibratorPrediction,
    CurveBucket,
    DataError,
    ExperimentConfig,
    ExperimentKind,
    ExperimentResult,
    ExperimentSummary,
    GridDistribution,
    HistoryStep,
    LossId,
    LossSpec,
    MetricsAccumulator,
    NumericError,
    OnlineCalibrator,
    ProtocolError,
    Recalibrator,
    SeriesRow,
    bucket_index,
    eval_loss,
    expected_loss,
    experiment_from_name,
    experiment_name,
    external_regret,
    fixed_point,
    internal_regret,
    is_proper_on_grid,
    recalibrate_csv,
    run_experiment,
    summary_text,
    transition_matrix,
)

__all__ = [
    "CalibratorPrediction",
    "CurveBucket",
    "DataError",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentResult",
    "ExperimentSummary",
    "GridDistribution",
    "HistoryStep",
    "LossId",
    "LossSpec",
    "MetricsAccumulator",
    "NumericError",
    "OnlineCalibrator",
    "ProtocolError",
    "Recalibrator",
    "SeriesRow",
    "bucket_index",
    "eval_loss",
    "expected_loss",
    "experiment_from_name",
    "experiment_name",
    "external_regret",
    "fixed_point",
    "internal_regret",
    "is_proper_on_grid",
    "recalibrate_csv",
    "run_experiment",
    "summary_text",
    "transition_matrix",
]

__version__ = "0.1.0"
