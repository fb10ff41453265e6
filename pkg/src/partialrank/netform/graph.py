"""A small directed graph with degree tallies, hop queries and node features."""

from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np

from ..exceptions import UnknownNode, ValidationError


class DirectedGraph:
    """Directed simple graph over dense node ids ``0..n_nodes-1``.

    Parameters
    ----------
    n_nodes : int
    edges : iterable of (src, dst) or (src, dst, timestamp)
    features : dict name -> array of length n_nodes, optional
    labels : sequence of external node labels, optional
    """

    def __init__(self, n_nodes: int, edges: Iterable = (), features: dict | None = None,
                 labels=None):
        self.n_nodes = int(n_nodes)
        self.out_adj: list[set] = [set() for _ in range(self.n_nodes)]
        self.in_adj: list[set] = [set() for _ in range(self.n_nodes)]
        self.timestamps: dict = {}
        self.features = {k: np.asarray(v, dtype=float) for k, v in (features or {}).items()}
        for name, col in self.features.items():
            if col.shape != (self.n_nodes,):
                raise ValidationError(f"feature {name!r} needs one value per node")
        self.labels = list(labels) if labels is not None else None
        for e in edges:
            self.add_edge(*e)

    def _check(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.n_nodes:
            raise UnknownNode(f"node {v} not in graph of {self.n_nodes} nodes")
        return v

    def add_edge(self, src: int, dst: int, timestamp=None) -> bool:
        """Add ``src -> dst``; returns False when it already exists (no parallel edges)."""
        src, dst = self._check(src), self._check(dst)
        if src == dst:
            raise ValidationError("self loops are not allowed")
        if dst in self.out_adj[src]:
            return False
        self.out_adj[src].add(dst)
        self.in_adj[dst].add(src)
        if timestamp is not None:
            self.timestamps[(src, dst)] = timestamp
        return True

    def has_edge(self, src: int, dst: int) -> bool:
        return int(dst) in self.out_adj[self._check(src)]

    @property
    def n_edges(self) -> int:
        return sum(len(s) for s in self.out_adj)

    def edges(self):
        for u in range(self.n_nodes):
            for v in sorted(self.out_adj[u]):
                yield u, v

    def in_degree(self) -> np.ndarray:
        return np.array([len(s) for s in self.in_adj], dtype=np.int64)

    def out_degree(self) -> np.ndarray:
        return np.array([len(s) for s in self.out_adj], dtype=np.int64)

    def degree(self, kind: str = "in") -> np.ndarray:
        if kind == "in":
            return self.in_degree()
        if kind == "out":
            return self.out_degree()
        if kind == "total":
            return self.in_degree() + self.out_degree()
        raise ValidationError(f"unknown degree kind {kind!r}")

    def friends_of_friends(self, source: int) -> set:
        """Nodes exactly two directed hops away, excluding the source and its current targets."""
        source = self._check(source)
        direct = self.out_adj[source]
        fof = set()
        for v in direct:
            fof |= self.out_adj[v]
        fof -= direct
        fof.discard(source)
        return fof

    def non_targets(self, source: int) -> np.ndarray:
        """All nodes the source could still link to."""
        source = self._check(source)
        mask = np.ones(self.n_nodes, dtype=bool)
        mask[source] = False
        if self.out_adj[source]:
            mask[list(self.out_adj[source])] = False
        return np.flatnonzero(mask)

    def hop_distances(self, source: int, cap: int = 6) -> np.ndarray:
        """Directed BFS distances from ``source``; nodes beyond ``cap - 1`` hops get ``cap``."""
        source = self._check(source)
        dist = np.full(self.n_nodes, cap, dtype=np.int64)
        dist[source] = 0
        frontier = deque([source])
        while frontier:
            u = frontier.popleft()
            if dist[u] + 1 >= cap:
                continue
            for v in self.out_adj[u]:
                if dist[v] == cap and v != source:
                    dist[v] = dist[u] + 1
                    frontier.append(v)
        return dist

    def copy(self) -> "DirectedGraph":
        g = DirectedGraph(self.n_nodes, features=self.features, labels=self.labels)
        for u in range(self.n_nodes):
            g.out_adj[u] = set(self.out_adj[u])
            g.in_adj[u] = set(self.in_adj[u])
        g.timestamps = dict(self.timestamps)
        return g

    def with_events(self, events) -> "DirectedGraph":
        """Copy with every chosen edge of ``events`` added (timestamp = event order)."""
        g = self.copy()
        for t, ev in enumerate(events):
            for dst in ev.chosen:
                g.add_edge(ev.source, dst, t if ev.timestamp is None else ev.timestamp)
        return g
