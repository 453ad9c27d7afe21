"""Activity-quantile bootstrap validation of fingerprint regression models."""

__version__ = "0.1.0"

from .data import Dataset, IngestOptions, Molecule, empirical_quantile, parse_dataset
from .losses import loss_min, loss_sum, midranks_descending, mse
from .splits import (
    SplitPlan,
    TrainTestSplit,
    bootstrap_split,
    kfold_splits,
    quantile_bootstrap_split,
)

__all__ = [
    "Dataset",
    "IngestOptions",
    "Molecule",
    "SplitPlan",
    "TrainTestSplit",
    "bootstrap_split",
    "empirical_quantile",
    "kfold_splits",
    "loss_min",
    "loss_sum",
    "midranks_descending",
    "mse",
    "parse_dataset",
    "quantile_bootstrap_split",
    "__version__",
]
