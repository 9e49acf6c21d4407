"""Kernel metrics between random dynamical systems estimated from sampled paths."""

from rdsmetric._backend import BACKEND
from rdsmetric.ensemble import PathEnsemble
from rdsmetric.estimators import (
    DistanceMatrix,
    MetricConfig,
    MetricValue,
    deterministic_metric_A,
    distance_matrix,
    estimate_l,
    estimate_l_tilde,
    metric_L,
    normalize,
)
from rdsmetric.independence import (
    HsicConfig,
    c_k_hat,
    centered_gram_at_time,
    hsic,
    minmax_normalize,
    shift_hsic,
)
from rdsmetric.kernels import Kernel, det_small, eval_kernel, gram

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DistanceMatrix",
    "HsicConfig",
    "Kernel",
    "MetricConfig",
    "MetricValue",
    "PathEnsemble",
    "c_k_hat",
    "centered_gram_at_time",
    "det_small",
    "deterministic_metric_A",
    "distance_matrix",
    "estimate_l",
    "estimate_l_tilde",
    "eval_kernel",
    "gram",
    "hsic",
    "metric_L",
    "minmax_normalize",
    "normalize",
    "shift_hsic",
]
