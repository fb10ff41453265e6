"""Synthetic ranking data: MNL (mixture) full rankings broken into random posets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .likelihood import sample_full_ranking
from .poset import PartialRanking, build_partial_ranking


@dataclass
class RankingSample:
    rankings: list
    utilities: np.ndarray          # (k, N) ground-truth component utilities
    weights: np.ndarray            # (k,) ground-truth mixture weights
    labels: np.ndarray             # (n,) generating component of each ranking
    orders: list = field(default_factory=list, repr=False)


def break_ranking(order, p: float, rng) -> PartialRanking:
    """Keep each of the N(N-1)/2 pairwise comparisons implied by ``order`` with probability ``p``."""
    order = np.asarray(order, dtype=np.int64)
    hi, lo = np.triu_indices(order.size, 1)
    keep = rng.random(hi.size) < p
    pairs = np.stack([order[hi[keep]], order[lo[keep]]], axis=1)
    return build_partial_ranking(order.tolist(), pairs.tolist())


def draw_utilities(n_items: int, rng, low: float = -2.0, high: float = 2.0) -> np.ndarray:
    return rng.uniform(low, high, size=n_items)


def simulate_rankings(n_items: int, n_rankings: int, p: float, n_components: int = 1,
                      seed=None, weights=None, utilities=None) -> RankingSample:
    """Sample ``n_rankings`` posets from a (mixture of) MNL with uniform [-2, 2] utilities.

    The component of each ranking is drawn first (equal weights unless given),
    then a full ranking by Gumbel-max, then the pairwise breaking.
    """
    rng = np.random.default_rng(seed)
    if utilities is None:
        utilities = np.stack([draw_utilities(n_items, rng) for _ in range(n_components)])
    utilities = np.atleast_2d(np.asarray(utilities, dtype=float))
    k = utilities.shape[0]
    weights = np.full(k, 1.0 / k) if weights is None else np.asarray(weights, dtype=float)
    labels = rng.choice(k, size=n_rankings, p=weights)
    rankings, orders = [], []
    for r in labels:
        order = sample_full_ranking(utilities[r], rng)
        orders.append(order)
        rankings.append(break_ranking(order, p, rng))
    return RankingSample(rankings, utilities, weights, labels, orders)
