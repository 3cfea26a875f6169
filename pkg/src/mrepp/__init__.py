"""Scalable spatial Gaussian process prediction.

Exact GP prediction plus low-rank approximations through inducing points,
region ensembles over support-point Voronoi tessellations, and
multi-resolution ensembles with calibration-learned resolution weights,
together with scenario simulation, scoring, and a reproducible experiment
harness.
"""

from .ensemble import (EPPModel, MREPPModel, calibration_split, epp_fit, epp_predict,
                       learn_resolution_weights, mrepp_fit, mrepp_predict,
                       simplex_least_squares)
from .errors import ConfigError, ScoringError, SingularMatrixError
from .exact import GPFit, gp_fit, gp_influence, gp_predict, gp_sample, gp_with_values
from .kernels import KernelParams, cov_matrix, matern_cov
from .lowrank import PPModel, pp_fit, pp_influence, pp_mean_var, pp_predict, pp_with_values
from .metrics import ScoreReport, hpd90, interval_score, lps, rmse, score
from .mixture import PredictiveMixture
from .partition import (Partition, Region, boundary_distance, build_spvt,
                        default_overlap, horizontal_weights, region_membership,
                        weight_matrix)
from .simulate import Dataset, ScenarioConfig, dataset_hash, generate, separation_radius
from .support_points import SPSolverConfig, energy_distance, support_points

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ScoringError", "SingularMatrixError",
    "KernelParams", "matern_cov", "cov_matrix",
    "GPFit", "gp_fit", "gp_predict", "gp_sample", "gp_influence", "gp_with_values",
    "SPSolverConfig", "energy_distance", "support_points",
    "Partition", "Region", "build_spvt", "region_membership", "boundary_distance",
    "horizontal_weights", "weight_matrix", "default_overlap",
    "PPModel", "pp_fit", "pp_predict", "pp_mean_var", "pp_influence", "pp_with_values",
    "PredictiveMixture", "EPPModel", "MREPPModel", "epp_fit", "epp_predict",
    "mrepp_fit", "mrepp_predict", "learn_resolution_weights", "simplex_least_squares",
    "calibration_split",
    "ScenarioConfig", "Dataset", "generate", "separation_radius", "dataset_hash",
    "ScoreReport", "rmse", "lps", "hpd90", "interval_score", "score",
    "__version__",
]
