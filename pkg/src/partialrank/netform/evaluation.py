"""Negative sampling and precision@k for link prediction."""

from __future__ import annotations

import warnings
from typing import Callable, Sequence

import numpy as np

from ..exceptions import InsufficientCandidates, ValidationError
from .events import ChoiceEvent
from .graph import DirectedGraph


def negative_sample(g: DirectedGraph, ev: ChoiceEvent, count: int, seed=None) -> ChoiceEvent:
    """Attach ``count`` uniformly drawn non-target nodes to ``ev`` as negatives.

    The source, its existing targets in ``g`` and the event's chosen targets
    are never drawn.
    """
    if count < 0:
        raise ValidationError("count must be non-negative")
    rng = np.random.default_rng(seed)
    pool = np.setdiff1d(g.non_targets(ev.source), np.asarray(ev.chosen, dtype=np.int64))
    if pool.size < count:
        raise InsufficientCandidates(f"need {count} negatives, only {pool.size} nodes eligible")
    if count == 0:
        warnings.warn("zero negatives: every candidate is a chosen target", stacklevel=2)
    picked = np.sort(rng.choice(pool, size=count, replace=False))
    return ev.with_negatives(picked.tolist())


def sample_negatives(g: DirectedGraph, events: Sequence[ChoiceEvent], count: int, seed=None) -> list:
    """Negatives for every event from one seeded stream."""
    rng = np.random.default_rng(seed)
    return [negative_sample(g, ev, count, rng) for ev in events]


def rank_candidates(candidates, scores) -> np.ndarray:
    """Candidates sorted by descending score, ties by ascending id."""
    candidates = np.asarray(candidates, dtype=np.int64)
    scores = np.asarray(scores, dtype=float)
    return candidates[np.lexsort((candidates, -scores))]


def event_precision(ev: ChoiceEvent, scores, ks: Sequence[int]) -> dict:
    cand = np.asarray(ev.evaluation_candidates(), dtype=np.int64)
    order = rank_candidates(cand, scores)
    chosen = set(ev.chosen)
    out = {}
    for k in ks:
        kk = min(int(k), order.size)
        out[k] = sum(int(c) in chosen for c in order[:kk]) / kk if kk else 0.0
    return out


def precision_at_k(scorer, events: Sequence[ChoiceEvent], ks: Sequence[int] = (1, 3, 5)) -> dict:
    """Mean precision@k over events scored on chosen plus negative candidates.

    ``scorer`` is either a per-node utility vector or a callable
    ``scorer(event, candidates) -> scores``.  ``k`` larger than an event's
    candidate count is capped at that count.
    """
    if any(int(k) < 1 for k in ks):
        raise ValidationError("k must be positive")
    if not events:
        raise ValidationError("no events to evaluate")
    score_fn: Callable
    if callable(scorer):
        score_fn = scorer
    else:
        table = np.asarray(scorer, dtype=float)
        score_fn = lambda ev, cand: table[cand]
    totals = {k: 0.0 for k in ks}
    for ev in events:
        cand = np.asarray(ev.evaluation_candidates(), dtype=np.int64)
        per = event_precision(ev, score_fn(ev, cand), ks)
        for k in ks:
            totals[k] += per[k]
    return {k: totals[k] / len(events) for k in ks}
