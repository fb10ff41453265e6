"""Attachment components as MNL choice models and their mixture fit by EM."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..exceptions import MissingDegree, ValidationError
from ..likelihood import PreferenceBatch
from ..quadrature import DEFAULT_RULE, QuadratureRule
from ..training import AdaGrad, OptimizerConfig, e_step, minimize_adagrad
from .events import ChoiceEvent, event_to_partial_ranking
from .graph import DirectedGraph
from .growth import attachment_utilities, scope_candidates

log = logging.getLogger(__name__)

UTILITY_KINDS = ("ua", "pa")


@dataclass(frozen=True)
class ComponentSpec:
    """Uniform (``ua``) or preferential (``pa``) attachment over a candidate scope.

    Preferential components read their exponent from the parameter named by
    ``binding``; components sharing a binding share the value.
    """

    utility: str
    scope: str = "global"
    binding: str = "alpha"

    def __post_init__(self):
        if self.utility not in UTILITY_KINDS:
            raise ValidationError(f"unknown utility kind {self.utility!r}")
        if self.scope not in ("global", "fof"):
            raise ValidationError(f"unknown candidate scope {self.scope!r}")

    @classmethod
    def parse(cls, text: str) -> "ComponentSpec":
        """``ua``, ``pa``, ``ua-fof`` or ``pa-fof``."""
        kind, _, scope = text.strip().lower().partition("-")
        return cls(kind, "fof" if scope == "fof" else scope or "global")

    @property
    def name(self) -> str:
        return self.utility if self.scope == "global" else f"{self.utility}-{self.scope}"

    @property
    def has_parameter(self) -> bool:
        return self.utility == "pa"


def parse_components(text: str | Sequence[str]) -> list:
    items = text.split(",") if isinstance(text, str) else list(text)
    specs = [ComponentSpec.parse(t) for t in items if str(t).strip()]
    if not specs:
        raise ValidationError("at least one component is required")
    return specs


DEFAULT_COMPONENTS = tuple(parse_components("ua,pa,ua-fof,pa-fof"))


def _checked_degrees(graph: DirectedGraph, degrees) -> np.ndarray:
    if degrees is None:
        return graph.in_degree().astype(float)
    degrees = np.asarray(degrees, dtype=float)
    if degrees.shape != (graph.n_nodes,) or np.any(~np.isfinite(degrees)) or np.any(degrees < 0):
        raise MissingDegree("need one finite non-negative degree per node")
    return degrees


class _ScopeData:
    """Candidate sets of every event under one scope, prepared for both likelihoods."""

    def __init__(self, graph: DirectedGraph, events, scope: str):
        n = len(events)
        self.feasible = np.zeros(n, dtype=bool)
        rows, cand_all, seg, chosen_all, chosen_seg = [], [], [], [], []
        for j, ev in enumerate(events):
            cand = (np.asarray(ev.candidates, dtype=np.int64) if ev.candidates is not None
                    else scope_candidates(graph, ev.source, scope))
            chosen = np.asarray(ev.chosen, dtype=np.int64)
            ok = cand.size > 0 and np.isin(chosen, cand).all()
            self.feasible[j] = ok
            if ok:
                rows.append([event_to_partial_ranking(ev, cand)])
                cand_all.append(cand)
                seg.append(np.full(cand.size, j))
                chosen_all.append(chosen)
                chosen_seg.append(np.full(chosen.size, j))
            else:
                rows.append([])
        self.batch = PreferenceBatch(rows, graph.n_nodes)
        empty = np.zeros(0, dtype=np.int64)
        self.cand = np.concatenate(cand_all) if cand_all else empty
        self.cand_event = np.concatenate(seg) if seg else empty
        self.chosen = np.concatenate(chosen_all) if chosen_all else empty
        self.chosen_event = np.concatenate(chosen_seg) if chosen_seg else empty
        self.n_chosen = np.bincount(self.chosen_event, minlength=n).astype(float)
        self.n_events = n

    def _segment_softmax_stats(self, w, x):
        # per-event logsumexp of w over candidates and softmax-mean of x
        vals = w[self.cand]
        mx = np.full(self.n_events, -np.inf)
        np.maximum.at(mx, self.cand_event, vals)
        safe = np.where(np.isfinite(mx), mx, 0.0)
        e = np.exp(vals - safe[self.cand_event])
        z = np.bincount(self.cand_event, e, minlength=self.n_events)
        with np.errstate(divide="ignore", invalid="ignore"):
            lse = safe + np.log(z)
            mean_x = np.bincount(self.cand_event, e * x[self.cand], minlength=self.n_events) / z
        return lse, mean_x

    def naive(self, w, x=None):
        """Independent top-one log-likelihood per event, and its derivative along ``x``."""
        lse, mean_x = self._segment_softmax_stats(w, np.zeros_like(w) if x is None else x)
        with np.errstate(invalid="ignore"):
            picked = np.bincount(self.chosen_event, w[self.chosen], minlength=self.n_events)
            ll = picked - self.n_chosen * np.where(self.feasible, lse, 0.0)
        ll = np.where(self.feasible, ll, -np.inf)
        if x is None:
            return ll, None
        d = np.bincount(self.chosen_event, x[self.chosen], minlength=self.n_events) - self.n_chosen * mean_x
        return ll, np.where(self.feasible, d, 0.0)


class EventLikelihoods:
    """Per-event log-likelihoods of attachment components on a fixed graph.

    Candidate sets and degrees are read from ``graph`` once.  ``naive`` swaps
    the partitioned-preference likelihood for independent top-one choices.
    Events with no chosen target carry no information and are dropped.
    """

    def __init__(self, events: Sequence[ChoiceEvent], graph: DirectedGraph, *,
                 degrees=None, quad: QuadratureRule = DEFAULT_RULE, naive: bool = False):
        self.events = [ev for ev in events if ev.chosen]
        if not self.events:
            raise ValidationError("no events with chosen targets")
        self.graph = graph
        self.degrees = _checked_degrees(graph, degrees)
        self.log_degree = np.log(np.where(self.degrees > 0, self.degrees, 1.0))
        self.quad = quad
        self.naive = naive
        self._scopes: dict = {}

    @property
    def n_events(self) -> int:
        return len(self.events)

    def scope(self, name: str) -> _ScopeData:
        if name not in self._scopes:
            self._scopes[name] = _ScopeData(self.graph, self.events, name)
        return self._scopes[name]

    def utilities(self, spec: ComponentSpec, alpha: float) -> np.ndarray:
        return attachment_utilities(self.degrees, spec.utility, alpha)

    def loglik(self, spec: ComponentSpec, alpha: float = 1.0) -> np.ndarray:
        data = self.scope(spec.scope)
        w = self.utilities(spec, alpha)
        if self.naive:
            return data.naive(w)[0]
        ll = data.batch.loglik(w, self.quad)
        return np.where(data.feasible, ll, -np.inf)

    def weighted_value_and_dalpha(self, spec: ComponentSpec, alpha: float, weights):
        """``sum_j weights_j * loglik_j`` and its derivative in the exponent."""
        data = self.scope(spec.scope)
        w = self.utilities(spec, alpha)
        weights = np.where(data.feasible, weights, 0.0)
        if self.naive:
            ll, d = data.naive(w, self.log_degree)
            active = weights > 0
            return float(weights[active] @ ll[active]), float(weights[active] @ d[active])
        total, grad, _ = data.batch.value_and_grad(w, self.quad, weights)
        if spec.utility != "pa":
            return total, 0.0
        return total, float(grad @ self.log_degree)


def component_event_log_likelihood(ev: ChoiceEvent, spec: ComponentSpec, alpha: float,
                                   graph: DirectedGraph, quad: QuadratureRule = DEFAULT_RULE, *,
                                   degrees=None, naive: bool = False) -> float:
    """Log-probability that ``spec`` generates ``ev``; ``-inf`` when a target is out of scope."""
    if not ev.chosen:
        return 0.0
    return float(EventLikelihoods([ev], graph, degrees=degrees, quad=quad,
                                  naive=naive).loglik(spec, alpha)[0])


@dataclass
class NetworkFitResult:
    weights: np.ndarray
    params: dict
    specs: list
    loglik_trace: list
    responsibilities: np.ndarray = field(repr=False)
    degenerate: bool = False
    trace_rows: list = field(default_factory=list, repr=False)

    @property
    def alpha(self) -> float:
        return float(self.params.get("alpha", np.nan))

    def weight_of(self, name: str) -> float:
        names = [s.name for s in self.specs]
        return float(self.weights[names.index(name)]) if name in names else 0.0


def fit_network_mixture(events, graph: DirectedGraph, specs: Sequence[ComponentSpec] = DEFAULT_COMPONENTS,
                        *, B: int = 30, m_steps: int = 50, alpha0: float = 0.5,
                        opt: OptimizerConfig | None = None, quad: QuadratureRule = DEFAULT_RULE,
                        naive: bool = False, degrees=None, responsibility_floor: float = 1e-10,
                        degenerate_threshold: float = 0.01,
                        on_iteration: Callable | None = None) -> NetworkFitResult:
    """Mixture weights and shared exponents of attachment components by EM.

    Weights start uniform and every exponent at ``alpha0``.  Each round
    computes responsibilities from the per-event likelihoods, sets the weights
    to their means, then takes ``m_steps`` AdaGrad steps on the
    responsibility-weighted log-likelihood summed over every component bound
    to each exponent.  AdaGrad state persists across rounds.
    """
    specs = list(specs)
    if not specs:
        raise ValidationError("at least one component is required")
    if B < 0:
        raise ValidationError("B must be non-negative")
    opt = opt or OptimizerConfig()
    lik = events if isinstance(events, EventLikelihoods) else EventLikelihoods(
        events, graph, degrees=degrees, quad=quad, naive=naive)
    bindings = sorted({s.binding for s in specs if s.has_parameter})
    params = {b: float(alpha0) for b in bindings}
    k = len(specs)
    pi = np.full(k, 1.0 / k)
    m_opt = OptimizerConfig(opt.learning_rate, opt.epsilon, m_steps, opt.gradient_tolerance,
                            opt.monotone, opt.max_halvings)
    optimizers = {b: AdaGrad(opt.learning_rate, opt.epsilon) for b in bindings}
    trace, rows = [], []
    start = time.perf_counter()

    def observe():
        ll = np.column_stack([lik.loglik(s, params.get(s.binding, 1.0)) for s in specs])
        return e_step(ll, pi)

    gamma = np.full((lik.n_events, k), 1.0 / k)
    for b in range(1, B + 1):
        gamma, obs = observe()
        trace.append(obs)
        pi = gamma.mean(axis=0)
        for name in bindings:
            members = [(r, s) for r, s in enumerate(specs) if s.has_parameter and s.binding == name]
            weights = {r: np.where(gamma[:, r] >= responsibility_floor, gamma[:, r], 0.0)
                       for r, _ in members}
            scale = max(sum(float(w.sum()) for w in weights.values()), 1e-300)

            def objective(x, members=members, weights=weights):
                value, grad = 0.0, 0.0
                for r, s in members:
                    v, d = lik.weighted_value_and_dalpha(s, float(x[0]), weights[r])
                    value += v
                    grad += d
                return -value, np.array([-grad])

            res = minimize_adagrad(objective, [params[name]], m_opt, optimizers[name], scale)
            params[name] = float(res.x[0])
        rows.append({"iteration": b, "loglik": obs, "weights": pi.tolist(), **params,
                     "ms": 1000.0 * (time.perf_counter() - start)})
        log.debug("network EM round %d: loglik %.4f weights %s %s", b, obs, np.round(pi, 4), params)
        if on_iteration is not None:
            on_iteration(rows[-1])
    if B > 0:
        gamma, obs = observe()
        trace.append(obs)
    pi = pi / pi.sum()
    return NetworkFitResult(pi, params, specs, trace, gamma,
                            bool(np.any(pi < degenerate_threshold)), rows)
