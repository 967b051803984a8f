"""WSN intrusion-detection pipeline: standardization, SMOTE-Tomek balancing,
six classifiers and a cross-validated experiment harness, backed by a C++
core."""

import json as _json

from ._core import (  # noqa: F401
    ConfigError,
    DataError,
    DtParams,
    GbtParams,
    KnnParams,
    MlpParams,
    Model,
    RfParams,
    Standardizer,
    TrainConfig,
    basic_metrics,
    class_distribution,
    confusion_matrix,
    encode_labels,
    load_csv,
    load_model,
    regression_errors,
    roc_curve,
    smote,
    smote_tomek,
    split_folds,
    tomek_links,
    train,
)
from ._core import run_experiment_json as _run_experiment_json

__version__ = "0.1.0"


def run_experiment(config):
    """Run the full pipeline from a config dict; returns the report as a dict.

    Keys mirror the CLI flags: data, task, balance, models, folds, seed,
    leakage_mode, policy, smote_k, threads, out, train={dt,rf,knn,mlp,gbt}.
    """
    return _json.loads(_run_experiment_json(_json.dumps(config)))
