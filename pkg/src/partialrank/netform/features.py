"""Structural features of (source, candidate) pairs."""

from __future__ import annotations

import numpy as np

from .graph import DirectedGraph

HOP_BUCKETS = (2, 3, 4, 5, 6)
STRUCTURAL_FEATURES = ("log_degree", "has_degree", "reciprocal", "is_fof",
                       "hop_2", "hop_3", "hop_4", "hop_5", "hop_6plus")


def feature_names(g: DirectedGraph) -> tuple:
    return STRUCTURAL_FEATURES + tuple(g.features)


def candidate_features(g: DirectedGraph, source: int, candidates, hop_cap: int = 6,
                       degrees=None) -> np.ndarray:
    """Feature matrix (one row per candidate) in :func:`feature_names` order.

    Columns: censored log in-degree (log 0 := 0), has-degree indicator,
    reciprocal (candidate already links to source), friend-of-friend
    indicator, one-hot hop distance for 2, 3, 4, 5 and 6-or-more, then any
    node feature columns loaded on the graph.
    """
    cand = np.asarray(candidates, dtype=np.int64)
    for c in np.unique(cand):
        g._check(c)
    source = g._check(source)
    deg = g.in_degree() if degrees is None else np.asarray(degrees, dtype=float)
    d = deg[cand].astype(float)
    has = (d > 0).astype(float)
    logd = np.log(np.where(d > 0, d, 1.0))
    recip = np.array([source in g.out_adj[c] for c in cand.tolist()], dtype=float)
    fof = g.friends_of_friends(source)
    is_fof = np.array([c in fof for c in cand.tolist()], dtype=float)
    hops = g.hop_distances(source, cap=hop_cap)[cand]
    onehot = np.column_stack([hops == h for h in HOP_BUCKETS[:-1]] + [hops >= HOP_BUCKETS[-1]]).astype(float)
    cols = [logd, has, recip, is_fof, onehot]
    cols += [g.features[name][cand] for name in g.features]
    return np.column_stack(cols)


def structural_features(g: DirectedGraph, source: int, candidate: int, hop_cap: int = 6) -> np.ndarray:
    """Feature vector of a single candidate; see :func:`candidate_features`."""
    return candidate_features(g, source, [candidate], hop_cap)[0]
