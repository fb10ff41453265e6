"""Linear-in-features choice models over per-event candidate sets."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..exceptions import EmptyDataset, MissingFeature
from ..likelihood import PreferenceBatch
from ..models import LinearUtilityModel
from ..poset import PartitionedPreference
from ..quadrature import DEFAULT_RULE, QuadratureRule
from ..training import FitResult, OptimizerConfig, fit_single_mnl
from .events import ChoiceEvent
from .features import candidate_features, feature_names
from .graph import DirectedGraph
from .growth import scope_candidates


def training_candidates(g: DirectedGraph, ev: ChoiceEvent) -> np.ndarray:
    """Negatives plus chosen when sampled, else the explicit set, else the event's scope."""
    if ev.negatives is not None:
        return np.asarray(ev.evaluation_candidates(), dtype=np.int64)
    if ev.candidates is not None:
        return np.asarray(ev.candidates, dtype=np.int64)
    return np.union1d(scope_candidates(g, ev.source, ev.scope), np.asarray(ev.chosen, dtype=np.int64))


class EventFeatureBatch:
    """Every (event, candidate) pair gets its own slot and feature row."""

    def __init__(self, g: DirectedGraph, events: Sequence[ChoiceEvent], hop_cap: int = 6):
        self.names = feature_names(g)
        rows, blocks, offsets = [], [], [0]
        self.candidates = []
        for ev in events:
            cand = training_candidates(g, ev)
            slot = {int(c): offsets[-1] + k for k, c in enumerate(cand.tolist())}
            rest = sorted(set(slot) - set(ev.chosen))
            parts = [[slot[c] for c in w] for w in ev.windows] + ([[slot[c] for c in rest]] if rest else [])
            rows.append([PartitionedPreference(parts)])
            blocks.append(candidate_features(g, ev.source, cand, hop_cap))
            self.candidates.append(cand)
            offsets.append(offsets[-1] + cand.size)
        if not rows:
            raise EmptyDataset("no events")
        self.X = np.vstack(blocks)
        self.offsets = np.asarray(offsets)
        self.batch = PreferenceBatch(rows, int(offsets[-1]))

    def table(self) -> dict:
        return {name: self.X[:, k] for k, name in enumerate(self.names)}


def fit_linear_choice(g: DirectedGraph, events: Sequence[ChoiceEvent], features: Sequence[str],
                      opt: OptimizerConfig | None = None, quad: QuadratureRule = DEFAULT_RULE,
                      data: EventFeatureBatch | None = None) -> FitResult:
    """Fit ``theta`` in ``u = theta . x`` on the selected feature columns."""
    data = data or EventFeatureBatch(g, events)
    missing = [f for f in features if f not in data.names]
    if missing:
        raise MissingFeature(f"unknown features: {missing}")
    model = LinearUtilityModel(tuple(features))
    return fit_single_mnl(data.batch, model, opt, quad, context=data.table())


def linear_scorer(model: LinearUtilityModel, g: DirectedGraph, hop_cap: int = 6):
    """Callable scoring an event's candidates for :func:`precision_at_k`."""
    names = feature_names(g)

    def score(ev, cand):
        X = candidate_features(g, ev.source, cand, hop_cap)
        return model.utilities(X, names)

    return score
