"""Synthetic network growth from a four-way UA/PA x global/FoF attachment mixture."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..exceptions import ValidationError
from .events import ChoiceEvent
from .graph import DirectedGraph

COMPONENT_LABELS = ("ua", "pa", "ua-fof", "pa-fof")


@dataclass
class GrowthConfig:
    """Parameters of the (r, p) growth model.

    ``r`` is the probability that a source draws from every node it does not
    already link to (otherwise from its friends-of-friends); ``p`` is the
    probability of uniform rather than preferential attachment.
    """

    r: float = 0.5
    p: float = 0.5
    alpha: float = 1.0
    init_nodes: int = 1000
    init_edge_prob: float = 0.005
    hub_count: int = 20
    hub_boost: tuple = (50, 80)
    source_fraction: float = 0.5
    edges_per_source: int = 5
    seed: int | None = 0

    def __post_init__(self):
        for name in ("r", "p", "init_edge_prob", "source_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")
        if self.init_nodes < 2 or self.edges_per_source < 1 or self.hub_count < 0:
            raise ValidationError("node, edge and hub counts must be positive")
        if self.hub_count > self.init_nodes:
            raise ValidationError("more hubs than nodes")
        lo, hi = self.hub_boost
        if lo < 0 or hi < lo:
            raise ValidationError("hub_boost must be an increasing non-negative range")
        self.hub_boost = (int(lo), int(hi))

    @property
    def component_weights(self) -> np.ndarray:
        """Mixture weights in :data:`COMPONENT_LABELS` order."""
        r, p = self.r, self.p
        return np.array([p * r, (1 - p) * r, p * (1 - r), (1 - p) * (1 - r)])

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hub_boost"] = list(self.hub_boost)
        return d


def initial_graph(cfg: GrowthConfig, rng) -> DirectedGraph:
    """Undirected Erdos-Renyi graph (stored as reciprocal edge pairs) with boosted hubs."""
    n = cfg.init_nodes
    hi, lo = np.triu_indices(n, 1)
    keep = rng.random(hi.size) < cfg.init_edge_prob
    g = DirectedGraph(n)
    for u, v in zip(hi[keep].tolist(), lo[keep].tolist()):
        g.add_edge(u, v)
        g.add_edge(v, u)
    hubs = rng.choice(n, size=cfg.hub_count, replace=False)
    for h in hubs.tolist():
        extra = int(rng.integers(cfg.hub_boost[0], cfg.hub_boost[1] + 1))
        free = g.non_targets(h)
        new = rng.choice(free, size=min(extra, free.size), replace=False)
        for v in new.tolist():
            g.add_edge(h, v)
            g.add_edge(v, h)
    return g


def attachment_utilities(degrees: np.ndarray, kind: str, alpha: float = 1.0) -> np.ndarray:
    """Per-node utility: constant for uniform attachment, ``alpha * log d`` for preferential.

    Nodes with degree 0 get ``-inf`` under preferential attachment.
    """
    degrees = np.asarray(degrees, dtype=float)
    if kind == "ua":
        return np.ones_like(degrees)
    if kind == "pa":
        with np.errstate(divide="ignore"):
            logd = np.log(degrees)
        return np.where(degrees > 0, alpha * np.where(degrees > 0, logd, 0.0), -np.inf)
    raise ValidationError(f"unknown attachment kind {kind!r}")


def scope_candidates(g: DirectedGraph, source: int, scope: str) -> np.ndarray:
    if scope == "global":
        return g.non_targets(source)
    if scope == "fof":
        return np.array(sorted(g.friends_of_friends(source)), dtype=np.int64)
    raise ValidationError(f"unknown candidate scope {scope!r}")


def sample_choices(candidates: np.ndarray, utils: np.ndarray, count: int, rng) -> np.ndarray:
    """Sequential softmax draws without replacement (Gumbel top-k), in draw order."""
    possible = candidates[np.isfinite(utils[candidates])]
    count = min(count, possible.size)
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    keys = utils[possible] + rng.gumbel(size=possible.size)
    return possible[np.argsort(-keys, kind="stable")[:count]]


def grow_network(cfg: GrowthConfig):
    """Simulate the seed graph and one labeled choice event per source.

    Choice probabilities and candidate sets use the seed graph throughout.
    Returns ``(seed_graph, events)``; ``seed_graph.with_events(events)`` is
    the grown network.
    """
    rng = np.random.default_rng(cfg.seed)
    g = initial_graph(cfg, rng)
    degrees = g.in_degree()
    utils = {kind: attachment_utilities(degrees, kind, cfg.alpha) for kind in ("ua", "pa")}
    n_sources = int(round(cfg.source_fraction * g.n_nodes))
    sources = np.sort(rng.choice(g.n_nodes, size=n_sources, replace=False))
    labels = rng.choice(len(COMPONENT_LABELS), size=n_sources, p=cfg.component_weights)
    events = []
    for t, (src, lab) in enumerate(zip(sources.tolist(), labels.tolist())):
        name = COMPONENT_LABELS[lab]
        kind, _, fof = name.partition("-")
        scope = "fof" if fof else "global"
        cand = scope_candidates(g, src, scope)
        chosen = sample_choices(cand, utils[kind], cfg.edges_per_source, rng)
        events.append(ChoiceEvent.from_chosen(src, chosen.tolist(), scope=scope, label=name,
                                              timestamp=t))
    return g, events
