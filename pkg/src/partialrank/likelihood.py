"""MNL (Plackett-Luce) probabilities of full, partial and partitioned rankings.

Utilities are dense arrays indexed by item id (a mapping ``{item: value}`` is
accepted anywhere a utility vector is expected).  All probabilities are
returned on the natural-log scale.
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from . import _kernel
from .exceptions import (
    DuplicateChoice,
    EmptyCandidates,
    MissingUtility,
    NonFiniteResult,
    ValidationError,
)
from .poset import PartialRanking, PartitionedPreference, decompose, enumerate_linear_extensions
from .quadrature import DEFAULT_RULE, QuadratureRule


def as_utilities(w, items: Iterable[int] = ()) -> np.ndarray:
    """Coerce ``w`` to a float array and check it covers ``items``."""
    if isinstance(w, Mapping):
        size = max(w, default=-1) + 1
        items = list(items)
        size = max(size, max(items, default=-1) + 1)
        arr = np.full(size, np.nan)
        for k, v in w.items():
            arr[int(k)] = float(v)
    else:
        arr = np.asarray(w, dtype=float)
        if arr.ndim != 1:
            raise ValidationError("utilities must be one-dimensional")
    idx = np.fromiter(items, dtype=np.int64)
    if idx.size:
        if idx.max() >= arr.size or np.isnan(arr[idx]).any():
            missing = sorted(int(i) for i in idx if i >= arr.size or np.isnan(arr[i]))
            raise MissingUtility(f"no utility for items {missing[:10]}")
    return arr


def full_ranking_log_prob(order: Sequence[int], w) -> float:
    """Log-probability of a complete ranking ``order`` (best first)."""
    order = np.asarray(order, dtype=np.int64)
    if len(set(order.tolist())) != order.size:
        raise ValidationError("order must not repeat items")
    w = as_utilities(w, order.tolist())
    u = w[order]
    # suffix logsumexp: normalizer of stage j covers positions j..N-1
    suffix = np.logaddexp.accumulate(u[::-1])[::-1]
    return float(np.sum(u - suffix))


def sample_full_ranking(w, rng=None, items: Sequence[int] | None = None) -> np.ndarray:
    """Draw a ranking by sorting utilities perturbed with standard Gumbel noise."""
    rng = np.random.default_rng(rng)
    w = np.asarray(w, dtype=float)
    items = np.arange(w.size) if items is None else np.asarray(items, dtype=np.int64)
    keys = w[items] + rng.gumbel(size=items.size)
    return items[np.argsort(-keys, kind="stable")]


def exact_partial_log_prob(pr: PartialRanking, w, limit: int = 100_000) -> float:
    """Brute-force log-probability of a poset: sum over all linear extensions."""
    w = as_utilities(w, pr.items)
    if len(pr.items) == 0:
        return 0.0
    ext = np.asarray(enumerate_linear_extensions(pr, limit), dtype=np.int64)
    u = w[ext]
    suffix = np.logaddexp.accumulate(u[:, ::-1], axis=1)[:, ::-1]
    return float(logsumexp(np.sum(u - suffix, axis=1)))


class PreferenceBatch:
    """Flattened collection of rows, each a list of partitioned preferences.

    Building the batch once and re-evaluating it for many utility vectors is
    how training stays fast; single-preference helpers below use a batch of
    one.
    """

    def __init__(self, rows: Sequence[Sequence[PartitionedPreference]], n_slots: int | None = None):
        slots: list[int] = []
        part_ptr = [0]
        pp_ptr = [0]
        row_ptr = [0]
        max_block = 1
        max_blocks = 1
        for row in rows:
            for pp in row:
                if pp.M < 2:
                    continue  # contributes log 1
                for block in pp.partitions:
                    slots.extend(block)
                    part_ptr.append(len(slots))
                    max_block = max(max_block, len(block))
                pp_ptr.append(len(part_ptr) - 1)
                max_blocks = max(max_blocks, pp.M)
            row_ptr.append(len(pp_ptr) - 1)
        self.slots = np.asarray(slots, dtype=np.int64)
        self.part_ptr = np.asarray(part_ptr, dtype=np.int64)
        self.pp_ptr = np.asarray(pp_ptr, dtype=np.int64)
        self.row_ptr = np.asarray(row_ptr, dtype=np.int64)
        self.max_block = max_block
        self.max_blocks = max_blocks
        top = int(self.slots.max()) + 1 if self.slots.size else 0
        self.n_slots = top if n_slots is None else int(n_slots)
        if self.n_slots < top:
            raise MissingUtility("utility vector shorter than the largest item id")

    @classmethod
    def from_rankings(cls, rankings: Iterable[PartialRanking], n_slots: int | None = None):
        return cls([decompose(pr) for pr in rankings], n_slots)

    @classmethod
    def from_preferences(cls, prefs: Iterable[PartitionedPreference], n_slots: int | None = None):
        return cls([[pp] for pp in prefs], n_slots)

    @property
    def n_rows(self) -> int:
        return self.row_ptr.size - 1

    def _check(self, w) -> np.ndarray:
        w = np.ascontiguousarray(w, dtype=float)
        if w.shape != (self.n_slots,):
            raise MissingUtility(f"expected {self.n_slots} utilities, got shape {w.shape}")
        if np.isnan(w).any() or np.isposinf(w).any():
            raise ValidationError("utilities must be finite or -inf")
        return w

    def loglik(self, w, rule: QuadratureRule = DEFAULT_RULE) -> np.ndarray:
        """Per-row log-likelihood."""
        w = self._check(w)
        out = np.empty(self.n_rows)
        grad = np.zeros(0)
        _kernel.evaluate(w, self.slots, self.part_ptr, self.pp_ptr, self.row_ptr,
                         rule.log_nodes, rule.weights, np.ones(self.n_rows), False,
                         grad, out, self.max_block, self.max_blocks)
        return out

    def value_and_grad(self, w, rule: QuadratureRule = DEFAULT_RULE, weights=None):
        """Weighted total log-likelihood and its gradient in ``w``.

        Rows with zero weight are skipped entirely.  Returns
        ``(total, grad, per_row)`` where ``per_row`` is NaN on skipped rows.
        """
        w = self._check(w)
        weights = np.ones(self.n_rows) if weights is None else np.ascontiguousarray(weights, dtype=float)
        if weights.shape != (self.n_rows,):
            raise ValidationError("one weight per row required")
        out = np.empty(self.n_rows)
        grad = np.zeros(self.n_slots)
        _kernel.evaluate(w, self.slots, self.part_ptr, self.pp_ptr, self.row_ptr,
                         rule.log_nodes, rule.weights, weights, True,
                         grad, out, self.max_block, self.max_blocks)
        active = weights != 0.0
        total = float(np.dot(weights[active], out[active])) if active.any() else 0.0
        return total, grad, out


def _single(rows, w, rule, items):
    w = as_utilities(w, items)
    batch = PreferenceBatch(rows, n_slots=w.size)
    total, grad, _ = batch.value_and_grad(w, rule)
    if np.isnan(total) or np.isnan(grad).any():
        raise NonFiniteResult("likelihood evaluation produced NaN")
    return total, grad


def pp_log_likelihood_and_grad(pp: PartitionedPreference, w, quad: QuadratureRule = DEFAULT_RULE):
    """Log-probability of ``S_1 > ... > S_M`` by quadrature, with its gradient.

    The gradient is a dense array over item ids (zero off ``pp``'s items).
    """
    return _single([[pp]], w, quad, pp.items)


def numgrb_log_likelihood_and_grad(pr: PartialRanking, w, quad: QuadratureRule = DEFAULT_RULE):
    """Approximate poset log-likelihood: sum over the extracted partitioned preferences."""
    return _single([decompose(pr)], w, quad, pr.items)


def _candidate_utils(candidates, w):
    cand = np.asarray(sorted(set(int(c) for c in candidates)), dtype=np.int64)
    if cand.size == 0:
        raise EmptyCandidates("candidate set is empty")
    w = as_utilities(w, cand.tolist())
    return cand, w


def naive_topone_log_likelihood(chosen: Iterable[int], candidates: Iterable[int], w) -> float:
    """Each chosen item as an independent softmax draw from the full candidate set."""
    cand, w = _candidate_utils(candidates, w)
    chosen = [int(c) for c in chosen]
    if not set(chosen) <= set(cand.tolist()):
        raise ValidationError("chosen items must be candidates")
    norm = logsumexp(w[cand])
    return float(sum(w[c] - norm for c in chosen))


def topk_sequential_log_likelihood(ordered_choices: Sequence[int], candidates: Iterable[int], w) -> float:
    """Sequential (top-K Plackett-Luce) choice without replacement."""
    cand, w = _candidate_utils(candidates, w)
    choices = [int(c) for c in ordered_choices]
    if len(set(choices)) != len(choices):
        raise DuplicateChoice("a candidate was chosen twice")
    if not set(choices) <= set(cand.tolist()):
        raise ValidationError("chosen items must be candidates")
    remaining = set(cand.tolist())
    total = 0.0
    for c in choices:
        idx = np.fromiter(remaining, dtype=np.int64)
        total += w[c] - logsumexp(w[idx])
        remaining.discard(c)
    return float(total)
