"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import numbers
from typing import Iterable

import numpy as np

from .exceptions import EmptyDataset, ValidationError
from .poset import PartialRanking, PartitionedPreference, build_partial_ranking


def as_partial_ranking(obj) -> PartialRanking | PartitionedPreference:
    """Coerce one observation.

    Accepts a :class:`PartialRanking`, a :class:`PartitionedPreference`, a
    mapping with ``items`` and ``relations`` (or ``partitions``), or a bare
    sequence of ``(winner, loser)`` pairs whose items are those mentioned.
    """
    if isinstance(obj, (PartialRanking, PartitionedPreference)):
        return obj
    if isinstance(obj, dict):
        if "partitions" in obj:
            return PartitionedPreference(obj["partitions"])
        return build_partial_ranking(obj.get("items", ()), obj.get("relations", ()))
    pairs = [tuple(p) for p in obj]
    if any(len(p) != 2 for p in pairs):
        raise ValidationError("expected (winner, loser) pairs")
    items = {int(x) for p in pairs for x in p}
    return build_partial_ranking(items, pairs)


def check_rankings(X: Iterable, n_items: int | None = None) -> tuple[list, int]:
    """Validate a dataset of rankings; returns ``(rankings, n_items)``.

    ``n_items`` defaults to one more than the largest item id seen.
    """
    if X is None:
        raise EmptyDataset("no rankings given")
    rankings = [as_partial_ranking(x) for x in X]
    if not rankings:
        raise EmptyDataset("no rankings given")
    top = -1
    for r in rankings:
        items = r.items
        if items:
            lo, hi = min(items), max(items)
            if lo < 0:
                raise ValidationError("item ids must be non-negative")
            top = max(top, hi)
    if n_items is None:
        n_items = top + 1
    elif top >= n_items:
        raise ValidationError(f"item id {top} outside universe of {n_items} items")
    if n_items < 1:
        raise EmptyDataset("rankings mention no items")
    return rankings, int(n_items)


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValidationError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_probability(value, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")
    return value


def check_utilities(w, n_items: int) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (n_items,) or not np.all(np.isfinite(w)):
        raise ValidationError(f"expected {n_items} finite utilities")
    return w
