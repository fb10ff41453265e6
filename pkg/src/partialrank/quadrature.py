"""Gauss-Legendre rule on (0, 1) with a polynomial change of variables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import ValidationError


@lru_cache(maxsize=32)
def _rule(node_count: int, power: int):
    x, wt = np.polynomial.legendre.leggauss(node_count)
    v = 0.5 * (x + 1.0)
    # u = v**power; the Jacobian power * v**(power-1) tames the log singularity of
    # 1 - u**a at u -> 0 when a is small
    log_u = power * np.log(v)
    weights = 0.5 * wt * power * v ** (power - 1)
    log_u.flags.writeable = False
    weights.flags.writeable = False
    return log_u, weights


@dataclass(frozen=True)
class QuadratureRule:
    """Fixed-node quadrature for integrals over u in (0, 1).

    Parameters
    ----------
    node_count : int
        Number of Gauss-Legendre nodes.
    power : int
        Exponent of the substitution ``u = v**power``.  ``power=1`` is plain
        Gauss-Legendre in ``u``.
    tolerance : float
        Relative accuracy the rule is expected to deliver; used by
        :meth:`converged` checks, not by evaluation itself.
    """

    node_count: int = 128
    power: int = 4
    tolerance: float = 1e-8
    log_nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.node_count) < 1:
            raise ValidationError("node_count must be a positive integer")
        if int(self.power) < 1:
            raise ValidationError("power must be a positive integer")
        log_u, w = _rule(int(self.node_count), int(self.power))
        object.__setattr__(self, "log_nodes", log_u)
        object.__setattr__(self, "weights", w)

    @property
    def nodes(self) -> np.ndarray:
        return np.exp(self.log_nodes)

    def integrate(self, f) -> float:
        """Apply the rule to a vectorized callable ``f(u)``."""
        return float(np.dot(self.weights, f(self.nodes)))

    def refined(self) -> "QuadratureRule":
        return QuadratureRule(2 * self.node_count, self.power, self.tolerance)


DEFAULT_RULE = QuadratureRule()
