"""Network formation modeled as discrete choice."""

from .choice import (
    DEFAULT_COMPONENTS,
    ComponentSpec,
    EventLikelihoods,
    NetworkFitResult,
    component_event_log_likelihood,
    fit_network_mixture,
    parse_components,
)
from .evaluation import negative_sample, precision_at_k, rank_candidates, sample_negatives
from .events import ChoiceEvent, event_to_partial_ranking
from .features import STRUCTURAL_FEATURES, candidate_features, feature_names, structural_features
from .graph import DirectedGraph
from .growth import COMPONENT_LABELS, GrowthConfig, grow_network
from .ingest import events_from_edges
from .linear import EventFeatureBatch, fit_linear_choice, linear_scorer

__all__ = [
    "COMPONENT_LABELS", "DEFAULT_COMPONENTS", "STRUCTURAL_FEATURES", "ChoiceEvent",
    "ComponentSpec", "DirectedGraph", "EventFeatureBatch", "EventLikelihoods", "GrowthConfig",
    "NetworkFitResult", "candidate_features", "component_event_log_likelihood",
    "event_to_partial_ranking", "events_from_edges", "feature_names", "fit_linear_choice",
    "fit_network_mixture", "grow_network", "linear_scorer", "negative_sample",
    "parse_components", "precision_at_k", "rank_candidates", "sample_negatives",
    "structural_features",
]
