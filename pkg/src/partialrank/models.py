"""Utility parameterizations, mixture containers and the softmax-MSE metric."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import softmax

from .exceptions import CountMismatch, LengthMismatch, MissingFeature, ValidationError


@dataclass
class FreeUtilityModel:
    """One free utility per item."""

    params: np.ndarray

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float).copy()
        if self.params.ndim != 1 or not np.all(np.isfinite(self.params)):
            raise ValidationError("free utilities must be a finite vector")

    @property
    def n_items(self) -> int:
        return self.params.size

    def utilities(self, context=None) -> np.ndarray:
        return self.params.copy()

    def to_dict(self) -> dict:
        return {"kind": "free", "params": self.params.tolist()}


@dataclass
class LinearUtilityModel:
    """Utility ``theta . x`` over named features, optionally a constant (uniform) model.

    With ``constant=True`` and no features every candidate gets utility 1,
    which is uniform choice with zero free parameters.
    """

    feature_names: tuple = ()
    coeffs: np.ndarray = None
    constant: bool = False

    def __post_init__(self):
        self.feature_names = tuple(self.feature_names)
        if len(set(self.feature_names)) != len(self.feature_names):
            raise ValidationError("feature names must be unique")
        if self.coeffs is None:
            self.coeffs = np.zeros(len(self.feature_names))
        self.coeffs = np.asarray(self.coeffs, dtype=float).copy()
        if self.coeffs.shape != (len(self.feature_names),):
            raise LengthMismatch("one coefficient per feature required")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValidationError("coefficients must be finite")

    def design(self, table, columns: Sequence[str] | None = None) -> np.ndarray:
        """Select this model's columns from ``table`` (a mapping name -> column or a 2-D array)."""
        if isinstance(table, np.ndarray):
            if columns is None:
                if table.shape[1] != len(self.feature_names):
                    raise MissingFeature("feature matrix width does not match the model")
                return table
            table = {c: table[:, k] for k, c in enumerate(columns)}
        missing = [f for f in self.feature_names if f not in table]
        if missing:
            raise MissingFeature(f"features not available: {missing}")
        if not self.feature_names:
            n = len(next(iter(table.values()))) if table else 0
            return np.zeros((n, 0))
        return np.column_stack([np.asarray(table[f], dtype=float) for f in self.feature_names])

    def utilities(self, table, columns: Sequence[str] | None = None) -> np.ndarray:
        X = self.design(table, columns)
        u = X @ self.coeffs
        return u + 1.0 if self.constant else u

    def to_dict(self) -> dict:
        return {
            "kind": "linear",
            "coeffs": dict(zip(self.feature_names, self.coeffs.tolist())),
            "constant": self.constant,
        }


def utilities(model, context=None, columns=None) -> np.ndarray:
    """Utility vector of ``model``; ``context`` is the feature table for linear models."""
    if isinstance(model, FreeUtilityModel):
        return model.utilities()
    return model.utilities(context, columns)


@dataclass
class MixtureModel:
    """Mixture weights over utility components with optional tied parameters.

    ``shared_bindings`` maps a binding name to ``[(component, param), ...]``;
    ``param`` is a coefficient name for linear components or an item index for
    free ones.  :meth:`tie` copies the first member's value to the others.
    """

    weights: np.ndarray
    components: list
    shared_bindings: dict = field(default_factory=dict)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float).copy()
        if len(self.components) < 1 or self.weights.shape != (len(self.components),):
            raise CountMismatch("one weight per component required")
        if np.any(self.weights < 0) or not np.isclose(self.weights.sum(), 1.0, atol=1e-9):
            raise ValidationError("mixture weights must lie on the simplex")
        self.tie()

    @property
    def k(self) -> int:
        return len(self.components)

    def _get(self, comp, param):
        model = self.components[comp]
        if isinstance(model, LinearUtilityModel):
            return model.coeffs[model.feature_names.index(param)]
        return model.params[int(param)]

    def _set(self, comp, param, value):
        model = self.components[comp]
        if isinstance(model, LinearUtilityModel):
            model.coeffs[model.feature_names.index(param)] = value
        else:
            model.params[int(param)] = value

    def tie(self) -> None:
        for members in self.shared_bindings.values():
            if not members:
                continue
            value = self._get(*members[0])
            for comp, param in members[1:]:
                self._set(comp, param, value)

    def set_shared(self, name: str, value: float) -> None:
        for comp, param in self.shared_bindings[name]:
            self._set(comp, param, value)

    def to_dict(self) -> dict:
        return {
            "kind": "mixture",
            "weights": self.weights.tolist(),
            "components": [c.to_dict() for c in self.components],
            "shared_bindings": {k: [list(m) for m in v] for k, v in self.shared_bindings.items()},
        }


def model_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "free":
        return FreeUtilityModel(d["params"])
    if kind == "linear":
        coeffs = d.get("coeffs", {})
        return LinearUtilityModel(tuple(coeffs), list(coeffs.values()), d.get("constant", False))
    if kind == "mixture":
        bindings = {k: [tuple(m) for m in v] for k, v in d.get("shared_bindings", {}).items()}
        return MixtureModel(d["weights"], [model_from_dict(c) for c in d["components"]], bindings)
    raise ValidationError(f"unknown model kind {kind!r}")


def softmax_mse(estimate, truth) -> float:
    """Mean squared difference of the softmax-normalized vectors."""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise LengthMismatch(f"shapes differ: {estimate.shape} vs {truth.shape}")
    return float(np.mean((softmax(estimate) - softmax(truth)) ** 2))


def match_components(estimated, truth):
    """Align estimated components to the truth by exhaustive permutation search.

    Returns ``(perm, mean_mse)`` where ``estimated[perm[r]]`` is matched to
    ``truth[r]``.
    """
    estimated = [np.asarray(e, dtype=float) for e in estimated]
    truth = [np.asarray(t, dtype=float) for t in truth]
    k = len(truth)
    if len(estimated) != k:
        raise CountMismatch(f"{len(estimated)} estimated vs {k} true components")
    if k > 8:
        raise CountMismatch("exhaustive matching supports at most 8 components")
    cost = np.array([[softmax_mse(e, t) for e in estimated] for t in truth])
    best, best_cost = None, np.inf
    for perm in itertools.permutations(range(k)):
        c = cost[np.arange(k), perm].mean()
        if c < best_cost - 1e-15:
            best, best_cost = perm, c
    return tuple(best), float(best_cost)


def per_component_mse(estimated, truth, perm) -> np.ndarray:
    return np.array([softmax_mse(estimated[perm[r]], truth[r]) for r in range(len(truth))])
