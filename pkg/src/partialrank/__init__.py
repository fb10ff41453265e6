"""Plackett-Luce (MNL) models and mixtures learned from general partial rankings."""

from .estimators import LinearChoiceModel, MNLMixture, MNLRanker, NetworkFormationMixture
from .exceptions import NumericalError, PartialRankError, ValidationError
from .likelihood import (
    PreferenceBatch,
    exact_partial_log_prob,
    full_ranking_log_prob,
    naive_topone_log_likelihood,
    numgrb_log_likelihood_and_grad,
    pp_log_likelihood_and_grad,
    topk_sequential_log_likelihood,
)
from .models import FreeUtilityModel, LinearUtilityModel, MixtureModel, match_components, softmax_mse
from .poset import PartialRanking, PartitionedPreference, build_partial_ranking, decompose
from .quadrature import QuadratureRule
from .simulate import simulate_rankings
from .training import OptimizerConfig, cluster_init, em_fit, fit_single_mnl, ranking_distance

__version__ = "0.1.0"

__all__ = [
    "FreeUtilityModel", "LinearChoiceModel", "LinearUtilityModel", "MNLMixture", "MNLRanker",
    "MixtureModel", "NetworkFormationMixture", "NumericalError", "OptimizerConfig", "PartialRankError",
    "PartialRanking", "PartitionedPreference", "PreferenceBatch", "QuadratureRule", "ValidationError",
    "build_partial_ranking", "cluster_init", "decompose", "em_fit", "exact_partial_log_prob",
    "fit_single_mnl", "full_ranking_log_prob", "match_components", "naive_topone_log_likelihood",
    "numgrb_log_likelihood_and_grad", "pp_log_likelihood_and_grad", "ranking_distance",
    "simulate_rankings", "softmax_mse", "topk_sequential_log_likelihood",
]
