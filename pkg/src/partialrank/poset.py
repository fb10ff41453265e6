"""Partial rankings as DAGs and their breakdown into partitioned preferences."""

from __future__ import annotations

import graphlib
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    CycleDetected,
    LimitExceeded,
    SelfComparison,
    UnknownItem,
    ValidationError,
)


@dataclass(frozen=True)
class PartialRanking:
    """A strict partial order over integer item ids.

    ``relations`` holds pairs ``(a, b)`` meaning ``a`` is preferred to ``b``.
    Build instances through :func:`build_partial_ranking`, which validates.
    """

    items: frozenset
    relations: frozenset

    def __len__(self) -> int:
        return len(self.items)

    def children(self) -> dict[int, list[int]]:
        out = {i: [] for i in self.items}
        for a, b in sorted(self.relations):
            out[a].append(b)
        return out

    def parents(self) -> dict[int, list[int]]:
        out = {i: [] for i in self.items}
        for a, b in sorted(self.relations):
            out[b].append(a)
        return out


@dataclass(frozen=True)
class PartitionedPreference:
    """Ordered disjoint blocks ``S_1 > S_2 > ... > S_M``.

    Order inside a block is unknown.  Blocks are stored as sorted tuples so
    that equal preferences compare and serialize identically.
    """

    partitions: tuple

    def __post_init__(self):
        parts = tuple(tuple(sorted(int(i) for i in p)) for p in self.partitions)
        if not parts:
            raise ValidationError("a partitioned preference needs at least one block")
        seen: set[int] = set()
        for p in parts:
            if not p:
                raise ValidationError("empty block in partitioned preference")
            if seen.intersection(p) or len(set(p)) != len(p):
                raise ValidationError("blocks of a partitioned preference must be disjoint")
            seen.update(p)
        object.__setattr__(self, "partitions", parts)

    @property
    def M(self) -> int:
        return len(self.partitions)

    @property
    def items(self) -> frozenset:
        return frozenset(i for p in self.partitions for i in p)

    def remainder(self, m: int) -> tuple:
        """Items in blocks ``m, m+1, ...`` (0-based), i.e. everything ranked at or below block ``m``."""
        return tuple(i for p in self.partitions[m:] for i in p)

    def block_index(self) -> dict[int, int]:
        return {i: m for m, p in enumerate(self.partitions) for i in p}

    def relative_ranks(self) -> dict[int, float]:
        """Block position scaled to [0, 1]; a single block maps every item to 0.5."""
        if self.M == 1:
            return {i: 0.5 for i in self.partitions[0]}
        return {i: m / (self.M - 1) for i, m in self.block_index().items()}

    def to_partial_ranking(self) -> PartialRanking:
        pairs = [
            (a, b)
            for m, upper in enumerate(self.partitions)
            for lower in self.partitions[m + 1:]
            for a in upper
            for b in lower
        ]
        return build_partial_ranking(self.items, pairs)


def build_partial_ranking(items: Iterable[int], pairs: Iterable[Sequence[int]]) -> PartialRanking:
    """Validate ``pairs`` as a poset over ``items``.

    Raises
    ------
    UnknownItem
        A pair endpoint is not in ``items``.
    SelfComparison
        A pair ``(a, a)``.
    CycleDetected
        The preference digraph has a directed cycle.
    """
    item_set = frozenset(int(i) for i in items)
    if any(i < 0 for i in item_set):
        raise ValidationError("item ids must be non-negative integers")
    relations = set()
    for pair in pairs:
        a, b = (int(x) for x in pair)
        if a not in item_set or b not in item_set:
            raise UnknownItem(f"pair ({a}, {b}) references an item outside the item set")
        if a == b:
            raise SelfComparison(f"item {a} compared with itself")
        relations.add((a, b))

    sorter = graphlib.TopologicalSorter({i: () for i in item_set})
    for a, b in relations:
        sorter.add(b, a)
    try:
        sorter.prepare()
    except graphlib.CycleError as exc:
        raise CycleDetected(f"preference cycle through {exc.args[1]}") from None
    return PartialRanking(item_set, frozenset(relations))


def _weak_components(pr: PartialRanking) -> list[list[int]]:
    parent = {i: i for i in pr.items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pr.relations:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in sorted(pr.items):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _descendants(nodes: list[int], relations) -> np.ndarray:
    """Strict reachability matrix ``D[u, v]``: a directed path of length >= 1 from u to v."""
    index = {v: k for k, v in enumerate(nodes)}
    n = len(nodes)
    children: list[list[int]] = [[] for _ in range(n)]
    indeg = np.zeros(n, dtype=int)
    for a, b in relations:
        children[index[a]].append(index[b])
        indeg[index[b]] += 1
    # Kahn order, then fill rows bottom-up
    order = []
    stack = [k for k in range(n) if indeg[k] == 0]
    while stack:
        u = stack.pop()
        order.append(u)
        for c in children[u]:
            indeg[c] -= 1
            if indeg[c] == 0:
                stack.append(c)
    reach = np.zeros((n, n), dtype=bool)
    for u in reversed(order):
        ch = children[u]
        if ch:
            reach[u, ch] = True
            reach[u] |= reach[ch].any(axis=0)
    return reach


def _component_partitions(nodes: list[int], relations) -> list[tuple]:
    if len(nodes) == 1:
        return [tuple(nodes)]
    reach = _descendants(nodes, relations)
    alive = np.arange(len(nodes))
    blocks: list[tuple] = []
    while alive.size:
        sub = reach[np.ix_(alive, alive)]
        sinks = ~sub.any(axis=1)
        # reach count against every sink of the current subgraph
        common = sub[:, sinks].all(axis=1)
        # keep only nodes above everything left below; otherwise the blocks
        # would impose orderings the poset does not contain
        while True:
            keep = common & sub[:, ~common].all(axis=1)
            if np.array_equal(keep, common):
                break
            common = keep
        blocks.append(tuple(nodes[k] for k in alive[~common]))
        alive = alive[common]
    blocks.reverse()
    return blocks


def decompose(pr: PartialRanking) -> list[PartitionedPreference]:
    """Extract maximal ordered partitions, one per weakly connected component.

    Within a component the upper set starts as the strict common ancestors of
    all current sinks and is shrunk until each of its nodes is an ancestor of
    every node outside it; the rest becomes the lowest block and the
    procedure recurses on the upper set.  Relations inside a block are
    dropped and every ordering between blocks is implied by the poset, so the
    result never assigns less probability than the poset itself.
    """
    by_comp: dict[int, list] = {}
    comps = _weak_components(pr)
    owner = {i: k for k, comp in enumerate(comps) for i in comp}
    for a, b in pr.relations:
        by_comp.setdefault(owner[a], []).append((a, b))
    return [
        PartitionedPreference(tuple(_component_partitions(comp, by_comp.get(k, ()))))
        for k, comp in enumerate(comps)
    ]


def enumerate_linear_extensions(pr: PartialRanking, limit: int = 100_000) -> list[tuple]:
    """All total orders (best first) consistent with ``pr``.

    Raises :class:`LimitExceeded` as soon as more than ``limit`` orders exist.
    """
    items = sorted(pr.items)
    parents = {i: set(p) for i, p in pr.parents().items()}
    children = pr.children()
    pending = {i: len(parents[i]) for i in items}
    out: list[tuple] = []
    prefix: list[int] = []

    def extend(available: list[int]):
        if len(prefix) == len(items):
            if len(out) >= limit:
                raise LimitExceeded(f"more than {limit} linear extensions")
            out.append(tuple(prefix))
            return
        for pos, item in enumerate(available):
            rest = available[:pos] + available[pos + 1:]
            freed = []
            for c in children[item]:
                pending[c] -= 1
                if pending[c] == 0:
                    freed.append(c)
            prefix.append(item)
            extend(rest + freed)
            prefix.pop()
            for c in children[item]:
                pending[c] += 1

    extend([i for i in items if pending[i] == 0])
    return out
