"""Turning timestamped edge lists into windowed choice events."""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from ..exceptions import ValidationError
from .events import ChoiceEvent
from .graph import DirectedGraph


def events_from_edges(edges, n_nodes: int, start, end, window, *, max_sources: int | None = None,
                      seed=None, features: dict | None = None):
    """Split an edge stream at ``start`` and group later edges into events.

    Edges with timestamp before ``start`` form the observed graph.  Each
    source with edges in ``[start, end)`` yields one event whose windows
    group its new targets by ``(timestamp - start) // window``; earlier
    windows are preferred.  Targets the source already linked to before
    ``start`` and repeat edges are ignored.  With ``max_sources`` a uniform
    subset of sources is kept.

    Returns ``(graph_before_start, events)``.
    """
    if window <= 0:
        raise ValidationError("window must be positive")
    if end <= start:
        raise ValidationError("end must come after start")
    g = DirectedGraph(n_nodes, features=features)
    later = defaultdict(dict)
    for src, dst, ts in sorted(edges, key=lambda e: (e[2], e[0], e[1])):
        if src == dst:
            continue
        if ts < start:
            g.add_edge(src, dst, ts)
        elif ts < end:
            later[int(src)].setdefault(int(dst), ts)
    sources = sorted(later)
    if max_sources is not None and len(sources) > max_sources:
        rng = np.random.default_rng(seed)
        sources = sorted(rng.choice(sources, size=max_sources, replace=False).tolist())
    events = []
    for src in sources:
        tiers = defaultdict(list)
        for dst, ts in later[src].items():
            if dst not in g.out_adj[src]:
                tiers[(ts - start) // window].append(dst)
        if not tiers:
            continue
        windows = tuple(tuple(sorted(tiers[t])) for t in sorted(tiers))
        first = min(later[src].values())
        events.append(ChoiceEvent(src, windows, timestamp=int(first)))
    return g, events
