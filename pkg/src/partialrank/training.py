"""Fitting single MNL models and mixtures by EM from partial rankings."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import logsumexp

from .exceptions import (
    AllComponentsImpossible,
    DegenerateClustering,
    EmptyDataset,
    NonFiniteLoss,
    ValidationError,
)
from .likelihood import PreferenceBatch
from .models import FreeUtilityModel, LinearUtilityModel, MixtureModel
from .poset import PartialRanking, PartitionedPreference, decompose
from .quadrature import DEFAULT_RULE, QuadratureRule

log = logging.getLogger(__name__)


@dataclass
class OptimizerConfig:
    """Full-batch AdaGrad settings.

    ``gradient_tolerance`` is compared with the infinity norm of the gradient
    of the weight-normalized loss.  With ``monotone`` set, a step that would
    increase the loss is halved until it does not (at most ``max_halvings``
    times); if no decrease is found the run stops.
    """

    learning_rate: float = 0.5
    epsilon: float = 1e-10
    max_steps: int = 200
    gradient_tolerance: float = 1e-6
    monotone: bool = True
    max_halvings: int = 30

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.max_steps < 0:
            raise ValidationError("max_steps must be non-negative")


class AdaGrad:
    """Per-coordinate step ``lr * g / (sqrt(sum g**2) + eps)``."""

    def __init__(self, learning_rate: float = 0.5, epsilon: float = 1e-10):
        self.learning_rate = learning_rate
        self.epsilon = epsilon
        self.accumulator = None

    def step(self, grad: np.ndarray) -> np.ndarray:
        if self.accumulator is None:
            self.accumulator = np.zeros_like(grad)
        self.accumulator += grad * grad
        return self.learning_rate * grad / (np.sqrt(self.accumulator) + self.epsilon)


@dataclass
class OptimizeResult:
    x: np.ndarray
    loss_trace: list
    converged: bool
    n_evals: int
    optimizer: AdaGrad


def minimize_adagrad(fun: Callable, x0, config: OptimizerConfig, optimizer: AdaGrad | None = None,
                     grad_scale: float = 1.0) -> OptimizeResult:
    """Minimize ``fun(x) -> (loss, grad)`` with AdaGrad.

    ``optimizer`` carries accumulator state between calls (warm starts).
    """
    opt = optimizer or AdaGrad(config.learning_rate, config.epsilon)
    x = np.array(x0, dtype=float)
    loss, grad = fun(x)
    n_evals = 1
    trace = [loss]
    converged = False
    for _ in range(config.max_steps):
        if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
            raise NonFiniteLoss(f"loss {loss} is not finite")
        if np.max(np.abs(grad), initial=0.0) / grad_scale < config.gradient_tolerance:
            converged = True
            break
        delta = opt.step(grad)
        for _ in range(config.max_halvings + 1):
            cand = x - delta
            c_loss, c_grad = fun(cand)
            n_evals += 1
            if not config.monotone or c_loss <= loss:
                break
            delta = 0.5 * delta
        else:
            converged = True  # no descent found along the AdaGrad direction
            break
        x, loss, grad = cand, c_loss, c_grad
        trace.append(loss)
    if not np.isfinite(loss):
        raise NonFiniteLoss(f"loss {loss} is not finite")
    return OptimizeResult(x, trace, converged, n_evals, opt)


def as_batch(dataset, n_items: int | None = None) -> PreferenceBatch:
    """Accept a prebuilt batch, partial rankings or partitioned preferences."""
    if isinstance(dataset, PreferenceBatch):
        return dataset
    dataset = list(dataset)
    if not dataset:
        raise EmptyDataset("no rankings to fit")
    if isinstance(dataset[0], PartitionedPreference):
        return PreferenceBatch.from_preferences(dataset, n_items)
    if isinstance(dataset[0], PartialRanking):
        return PreferenceBatch.from_rankings(dataset, n_items)
    # a row given as a list of partitioned preferences
    return PreferenceBatch(dataset, n_items)


def _param_maps(model, context):
    if isinstance(model, FreeUtilityModel):
        return (lambda th: th), (lambda g: g)
    X = model.design(context)
    const = 1.0 if model.constant else 0.0
    return (lambda th: X @ th + const), (lambda g: X.T @ g)


def _get_params(model):
    return model.params if isinstance(model, FreeUtilityModel) else model.coeffs


def _with_params(model, theta):
    if isinstance(model, FreeUtilityModel):
        return FreeUtilityModel(theta)
    return LinearUtilityModel(model.feature_names, theta, model.constant)


@dataclass
class FitResult:
    model: object
    loss_trace: list
    converged: bool
    n_evals: int
    optimizer: AdaGrad = field(repr=False)
    seconds: float = 0.0


def fit_single_mnl(dataset, model=None, opt: OptimizerConfig | None = None,
                   quad: QuadratureRule = DEFAULT_RULE, weights=None, *,
                   n_items: int | None = None, context=None,
                   optimizer: AdaGrad | None = None) -> FitResult:
    """Fit one MNL by full-batch AdaGrad on the weighted negative NumGRB log-likelihood.

    Parameters
    ----------
    dataset : PreferenceBatch or sequence of PartialRanking / PartitionedPreference
    model : FreeUtilityModel or LinearUtilityModel, optional
        Starting point; defaults to all-zero free utilities over ``n_items``.
    weights : array, optional
        Non-negative per-ranking weights (EM responsibilities).
    context : feature table for linear models, rows aligned with batch slots.
    optimizer : AdaGrad, optional
        Accumulator state to continue from.
    """
    opt = opt or OptimizerConfig()
    batch = as_batch(dataset, n_items)
    if batch.n_rows == 0:
        raise EmptyDataset("no rankings to fit")
    if model is None:
        model = FreeUtilityModel(np.zeros(batch.n_slots))
    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (batch.n_rows,) or np.any(weights < 0):
            raise ValidationError("weights must be non-negative, one per ranking")
    total_weight = float(batch.n_rows if weights is None else weights.sum())
    to_w, back = _param_maps(model, context)

    def objective(theta):
        value, g, _ = batch.value_and_grad(to_w(theta), quad, weights)
        return -value, -back(g)

    start = time.perf_counter()
    res = minimize_adagrad(objective, _get_params(model), opt, optimizer,
                           grad_scale=max(total_weight, 1e-300))
    return FitResult(_with_params(model, res.x), res.loss_trace, res.converged,
                     res.n_evals, res.optimizer, time.perf_counter() - start)


# ----------------------------------------------------------------------------
# clustering initialization


def ranking_distance(a: PartitionedPreference, b: PartitionedPreference) -> float:
    """RMS difference of relative block ranks over the items both rankings contain.

    Rankings with no common item are at distance 1.0.
    """
    ra, rb = a.relative_ranks(), b.relative_ranks()
    shared = ra.keys() & rb.keys()
    if not shared:
        return 1.0
    return float(np.sqrt(np.mean([(ra[i] - rb[i]) ** 2 for i in shared])))


def relative_rank_matrix(rows: Sequence[Sequence[PartitionedPreference]], n_items: int) -> np.ndarray:
    """One row per ranking; NaN where the ranking does not mention the item."""
    X = np.full((len(rows), n_items), np.nan)
    for j, row in enumerate(rows):
        for pp in row:
            for i, r in pp.relative_ranks().items():
                X[j, i] = r
    return X


def _partial_distances(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Distance of every row of X to every centroid, over jointly present coordinates."""
    out = np.empty((X.shape[0], C.shape[0]))
    present = ~np.isnan(X)
    Xz = np.where(present, X, 0.0)
    for r, c in enumerate(C):
        both = present & ~np.isnan(c)
        diff = np.where(both, Xz - np.nan_to_num(c), 0.0)
        cnt = both.sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            d = np.sqrt((diff ** 2).sum(axis=1) / cnt)
        d[cnt == 0] = 1.0
        out[:, r] = d
    return out


def _kmeans_once(X, k, rng, max_rounds):
    n = X.shape[0]
    centroids = [X[rng.integers(n)]]
    for _ in range(1, k):
        d = _partial_distances(X, np.array(centroids)).min(axis=1)
        p = d ** 2
        p = p / p.sum() if p.sum() > 0 else np.full(n, 1.0 / n)
        centroids.append(X[rng.choice(n, p=p)])
    C = np.array(centroids)
    labels = None
    present = ~np.isnan(X)
    Xz = np.where(present, X, 0.0)
    for _ in range(max_rounds):
        D = _partial_distances(X, C)
        new = D.argmin(axis=1)
        for r in range(k):
            if not np.any(new == r):
                # re-seed from the point farthest from its own centroid
                far = int(np.argmax(D[np.arange(n), new]))
                new[far] = r
                if not np.any(new == r):
                    raise DegenerateClustering(f"cluster {r} stayed empty")
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for r in range(k):
            m = labels == r
            cnt = present[m].sum(axis=0)
            with np.errstate(invalid="ignore", divide="ignore"):
                C[r] = np.where(cnt > 0, Xz[m].sum(axis=0) / cnt, np.nan)
    D = _partial_distances(X, C)
    inertia = float(np.sum(D[np.arange(n), labels] ** 2))
    return labels, C, inertia


def partial_kmeans(X: np.ndarray, k: int, rng, max_rounds: int = 100, n_init: int = 10):
    """K-means on vectors with missing coordinates.

    Distances use only coordinates present in both the row and the centroid;
    centroid coordinates are means over the rows that have that coordinate.
    Seeding is k-means++, repeated ``n_init`` times keeping the lowest
    inertia.  Returns ``(labels, centroids, inertia)``.
    """
    if X.shape[0] < k:
        raise ValidationError(f"need at least k={k} rankings, got {X.shape[0]}")
    best = None
    for _ in range(max(1, n_init)):
        run = _kmeans_once(X, k, rng, max_rounds)
        if best is None or run[2] < best[2]:
            best = run
    return best


def cluster_init(dataset, k: int, quad: QuadratureRule = DEFAULT_RULE,
                 opt: OptimizerConfig | None = None, seed=None, *,
                 n_items: int | None = None, rows=None):
    """Cluster rankings by relative-rank distance and fit one MNL per cluster.

    Returns ``(fits, labels)`` with one :class:`FitResult` per cluster.
    """
    rng = np.random.default_rng(seed)
    if rows is None:
        dataset = list(dataset)
        if not dataset:
            raise EmptyDataset("no rankings to cluster")
        rows = [decompose(pr) if isinstance(pr, PartialRanking) else [pr] for pr in dataset]
        batch = PreferenceBatch(rows, n_items)
    else:
        batch = as_batch(dataset, n_items)
    n_items = batch.n_slots
    if k == 1:
        labels = np.zeros(batch.n_rows, dtype=int)
    else:
        X = relative_rank_matrix(rows, n_items)
        labels, _, _ = partial_kmeans(X, k, rng)
    fits = [fit_single_mnl(batch, None, opt, quad, (labels == r).astype(float)) for r in range(k)]
    return fits, labels


# ----------------------------------------------------------------------------
# EM


@dataclass
class EMState:
    responsibilities: np.ndarray
    weights: np.ndarray
    params: list
    iteration: int = 0
    loglik_trace: list = field(default_factory=list)


@dataclass
class EMResult:
    mixture: MixtureModel
    state: EMState
    degenerate: bool
    inexact_m_steps: int
    init_labels: np.ndarray | None = None
    trace_rows: list = field(default_factory=list)


def e_step(loglik: np.ndarray, weights: np.ndarray):
    """Responsibilities and observed-data log-likelihood from an (n, k) log-likelihood matrix."""
    with np.errstate(divide="ignore"):
        joint = loglik + np.log(weights)
    norm = logsumexp(joint, axis=1)
    if np.any(np.isneginf(norm)):
        bad = np.flatnonzero(np.isneginf(norm))
        raise AllComponentsImpossible(f"{bad.size} observations have zero probability under every component")
    gamma = np.exp(joint - norm[:, None])
    gamma /= gamma.sum(axis=1, keepdims=True)
    return gamma, float(norm.sum())


def em_fit(dataset, k: int, B: int = 20, opt: OptimizerConfig | None = None,
           quad: QuadratureRule = DEFAULT_RULE, seed=None, *, init: str = "cluster",
           m_steps: int = 50, n_items: int | None = None,
           responsibility_floor: float = 1e-10, degenerate_threshold: float = 0.01,
           warm_optimizer: bool = True, tol: float = 0.0,
           on_iteration: Callable | None = None) -> EMResult:
    """Mixture of MNL by EM with NumGRB component likelihoods.

    ``init='cluster'`` fits one MNL per relative-rank K-means cluster;
    ``init='random'`` draws standard-normal utilities.  The M-step runs
    ``m_steps`` AdaGrad steps per component, warm-started from the previous
    round; with ``warm_optimizer`` the AdaGrad accumulators carry over too,
    otherwise each M-step starts a fresh accumulator.  Responsibilities below
    ``responsibility_floor`` are treated as zero in the M-step only.  With
    ``tol > 0`` the loop stops early once a round improves the observed
    log-likelihood by less than ``tol`` times its magnitude.
    """
    opt = opt or OptimizerConfig()
    rng = np.random.default_rng(seed)
    if isinstance(dataset, PreferenceBatch):
        rows = None
        batch = dataset
    else:
        rows = [decompose(pr) if isinstance(pr, PartialRanking) else [pr] for pr in dataset]
        batch = PreferenceBatch(rows, n_items)
    if batch.n_rows == 0:
        raise EmptyDataset("no rankings to fit")
    if batch.n_rows < k:
        raise ValidationError(f"need at least k={k} rankings")
    n = batch.n_rows

    init_labels = None
    if init == "cluster":
        if rows is None:
            raise ValidationError("clustering initialization needs the rankings, not a prebuilt batch")
        fits, init_labels = cluster_init(batch, k, quad, opt, rng, rows=rows)
        params = [f.model.params for f in fits]
        optimizers = [f.optimizer for f in fits]
    elif init == "random":
        params = [rng.standard_normal(batch.n_slots) for _ in range(k)]
        optimizers = [None] * k
    else:
        raise ValidationError(f"unknown init {init!r}")

    pi = np.full(k, 1.0 / k)
    state = EMState(np.full((n, k), 1.0 / k), pi, [p.copy() for p in params])
    m_opt = OptimizerConfig(opt.learning_rate, opt.epsilon, m_steps, opt.gradient_tolerance,
                            opt.monotone, opt.max_halvings)
    inexact = 0
    trace_rows = []
    start = time.perf_counter()

    def observe():
        ll = np.column_stack([batch.loglik(p, quad) for p in state.params])
        return e_step(ll, state.weights)

    for b in range(1, B + 1):
        gamma, obs = observe()
        state.responsibilities = gamma
        state.loglik_trace.append(obs)
        state.weights = gamma.mean(axis=0)
        for r in range(k):
            w_r = np.where(gamma[:, r] >= responsibility_floor, gamma[:, r], 0.0)
            if not w_r.any():
                continue
            fit = fit_single_mnl(batch, FreeUtilityModel(state.params[r]), m_opt, quad, w_r,
                                 optimizer=optimizers[r] if warm_optimizer else None)
            optimizers[r] = fit.optimizer
            state.params[r] = fit.model.params
            if not fit.converged:
                inexact += 1
        state.iteration = b
        row = {"iteration": b, "loglik": obs, "weights": state.weights.tolist(),
               "ms": 1000.0 * (time.perf_counter() - start)}
        trace_rows.append(row)
        log.debug("EM round %d: loglik %.6f weights %s", b, obs, np.round(state.weights, 4))
        if on_iteration is not None:
            on_iteration(state)
        trace = state.loglik_trace
        if tol > 0 and len(trace) >= 2 and trace[-1] - trace[-2] < tol * abs(trace[-1]):
            break
    if B > 0:
        gamma, obs = observe()
        state.responsibilities = gamma
        state.loglik_trace.append(obs)

    mixture = MixtureModel(state.weights / state.weights.sum(),
                           [FreeUtilityModel(p) for p in state.params])
    degenerate = bool(np.any(state.weights < degenerate_threshold))
    return EMResult(mixture, state, degenerate, inexact, init_labels, trace_rows)
