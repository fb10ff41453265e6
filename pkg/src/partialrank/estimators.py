"""scikit-learn style estimators wrapping the fitting routines."""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import ValidationError
from .likelihood import PreferenceBatch
from .netform.choice import EventLikelihoods, fit_network_mixture, parse_components
from .netform.evaluation import precision_at_k
from .netform.linear import fit_linear_choice, linear_scorer
from .poset import PartialRanking, decompose
from .quadrature import QuadratureRule
from .training import OptimizerConfig, e_step, em_fit, fit_single_mnl
from .validation import check_positive_int, check_rankings


def _rows(rankings):
    return [decompose(r) if isinstance(r, PartialRanking) else [r] for r in rankings]


class _QuadMixin:
    def _quad(self) -> QuadratureRule:
        return QuadratureRule(check_positive_int(self.quad_nodes, "quad_nodes", 2))

    def _opt(self, steps) -> OptimizerConfig:
        return OptimizerConfig(learning_rate=self.learning_rate, max_steps=steps,
                               gradient_tolerance=self.tol)


class MNLRanker(_QuadMixin, BaseEstimator):
    """Single Plackett-Luce model fit to partial rankings.

    Parameters
    ----------
    learning_rate : float
        Initial AdaGrad step.
    max_steps : int
    tol : float
        Stop once the per-ranking gradient's largest entry falls below this.
    quad_nodes : int
        Gauss-Legendre nodes for the block integrals.
    n_items : int, optional
        Item universe size; inferred from the data when omitted.

    Attributes
    ----------
    utilities_ : ndarray of shape (n_items,)
    loss_trace_ : list of float
    converged_ : bool
    """

    def __init__(self, learning_rate=0.5, max_steps=200, tol=1e-6, quad_nodes=128, n_items=None):
        self.learning_rate = learning_rate
        self.max_steps = max_steps
        self.tol = tol
        self.quad_nodes = quad_nodes
        self.n_items = n_items

    def fit(self, X, y=None, sample_weight=None):
        rankings, n = check_rankings(X, self.n_items)
        batch = PreferenceBatch(_rows(rankings), n)
        fit = fit_single_mnl(batch, None, self._opt(self.max_steps), self._quad(), sample_weight)
        self.utilities_ = fit.model.params
        self.n_items_ = n
        self.loss_trace_ = fit.loss_trace
        self.converged_ = fit.converged
        return self

    def score_samples(self, X) -> np.ndarray:
        """Log-likelihood of each ranking."""
        check_is_fitted(self, "utilities_")
        rankings, _ = check_rankings(X, self.n_items_)
        return PreferenceBatch(_rows(rankings), self.n_items_).loglik(self.utilities_, self._quad())

    def score(self, X, y=None) -> float:
        return float(np.mean(self.score_samples(X)))

    def transform(self, X) -> np.ndarray:
        return self.score_samples(X)[:, None]

    def predict(self, X=None) -> np.ndarray:
        """Items ordered from most to least preferred (ties by id)."""
        check_is_fitted(self, "utilities_")
        items = np.arange(self.n_items_)
        return items[np.lexsort((items, -self.utilities_))]


class MNLMixture(_QuadMixin, BaseEstimator):
    """Mixture of Plackett-Luce models fit by EM.

    Parameters
    ----------
    n_components : int
    n_rounds : int
        EM rounds.
    init : {'cluster', 'random'}
    m_steps : int
        AdaGrad steps per component in each M-step.
    random_state : int, optional

    Attributes
    ----------
    weights_ : ndarray of shape (n_components,)
    utilities_ : ndarray of shape (n_components, n_items)
    responsibilities_ : ndarray of shape (n_rankings, n_components)
    loglik_trace_ : list of float
    degenerate_ : bool
        True when some component's weight fell below 0.01.
    """

    def __init__(self, n_components=3, n_rounds=20, init="cluster", m_steps=50, learning_rate=0.5,
                 tol=1e-6, quad_nodes=128, random_state=None, n_items=None):
        self.n_components = n_components
        self.n_rounds = n_rounds
        self.init = init
        self.m_steps = m_steps
        self.learning_rate = learning_rate
        self.tol = tol
        self.quad_nodes = quad_nodes
        self.random_state = random_state
        self.n_items = n_items

    def fit(self, X, y=None):
        rankings, n = check_rankings(X, self.n_items)
        k = check_positive_int(self.n_components, "n_components")
        res = em_fit(rankings, k, check_positive_int(self.n_rounds, "n_rounds", 0),
                     self._opt(200), self._quad(), self.random_state, init=self.init,
                     m_steps=self.m_steps, n_items=n)
        self.result_ = res
        self.weights_ = res.mixture.weights
        self.utilities_ = np.stack([c.params for c in res.mixture.components])
        self.responsibilities_ = res.state.responsibilities
        self.loglik_trace_ = res.state.loglik_trace
        self.degenerate_ = res.degenerate
        self.n_items_ = n
        return self

    def _loglik(self, X) -> np.ndarray:
        check_is_fitted(self, "utilities_")
        rankings, _ = check_rankings(X, self.n_items_)
        batch = PreferenceBatch(_rows(rankings), self.n_items_)
        return np.column_stack([batch.loglik(u, self._quad()) for u in self.utilities_])

    def predict_proba(self, X) -> np.ndarray:
        return e_step(self._loglik(X), self.weights_)[0]

    def predict(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)

    def score_samples(self, X) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return logsumexp(self._loglik(X) + np.log(self.weights_), axis=1)

    def score(self, X, y=None) -> float:
        return float(np.mean(self.score_samples(X)))


class NetworkFormationMixture(_QuadMixin, BaseEstimator):
    """Attachment-mixture model of choice events on a fixed graph.

    Parameters
    ----------
    components : str or list of str
        Comma separated names from ``ua``, ``pa``, ``ua-fof``, ``pa-fof``.
    n_rounds, m_steps : int
        EM rounds and AdaGrad steps for the shared exponent per round.
    alpha0 : float
        Starting exponent.
    naive : bool
        Use independent top-one choice likelihoods instead of partitioned
        preferences.

    Attributes
    ----------
    weights_ : ndarray
    alpha_ : float
    component_names_ : list of str
    """

    def __init__(self, components="ua,pa,ua-fof,pa-fof", n_rounds=30, m_steps=50, alpha0=0.5,
                 naive=False, learning_rate=0.5, tol=1e-6, quad_nodes=128):
        self.components = components
        self.n_rounds = n_rounds
        self.m_steps = m_steps
        self.alpha0 = alpha0
        self.naive = naive
        self.learning_rate = learning_rate
        self.tol = tol
        self.quad_nodes = quad_nodes

    def fit(self, X, y=None, graph=None, degrees=None):
        if graph is None:
            raise ValidationError("fit needs the graph the events were formed on")
        specs = parse_components(self.components)
        res = fit_network_mixture(X, graph, specs, B=self.n_rounds, m_steps=self.m_steps,
                                  alpha0=self.alpha0, opt=self._opt(self.m_steps),
                                  quad=self._quad(), naive=self.naive, degrees=degrees)
        self.result_ = res
        self.weights_ = res.weights
        self.params_ = dict(res.params)
        self.alpha_ = res.alpha
        self.component_names_ = [s.name for s in specs]
        self.loglik_trace_ = res.loglik_trace
        return self

    def predict_proba(self, X, graph=None, degrees=None) -> np.ndarray:
        check_is_fitted(self, "weights_")
        if graph is None:
            raise ValidationError("predict_proba needs the graph")
        lik = EventLikelihoods(X, graph, degrees=degrees, quad=self._quad(), naive=self.naive)
        ll = np.column_stack([lik.loglik(s, self.params_.get(s.binding, 1.0))
                              for s in self.result_.specs])
        return e_step(ll, self.weights_)[0]

    def predict(self, X, graph=None, degrees=None) -> np.ndarray:
        return self.predict_proba(X, graph, degrees).argmax(axis=1)


class LinearChoiceModel(_QuadMixin, BaseEstimator):
    """Link choice with utility linear in structural and node features.

    Attributes
    ----------
    coef_ : ndarray
    model_ : LinearUtilityModel
    """

    def __init__(self, features=("log_degree", "has_degree"), learning_rate=0.5, max_steps=200,
                 tol=1e-6, quad_nodes=128):
        self.features = features
        self.learning_rate = learning_rate
        self.max_steps = max_steps
        self.tol = tol
        self.quad_nodes = quad_nodes

    def fit(self, X, y=None, graph=None):
        if graph is None:
            raise ValidationError("fit needs the graph the events were formed on")
        features = tuple(self.features.split(",")) if isinstance(self.features, str) else tuple(self.features)
        fit = fit_linear_choice(graph, list(X), features, self._opt(self.max_steps), self._quad())
        self.model_ = fit.model
        self.coef_ = fit.model.coeffs
        self.loss_trace_ = fit.loss_trace
        return self

    def decision_function(self, event, candidates, graph) -> np.ndarray:
        check_is_fitted(self, "model_")
        return linear_scorer(self.model_, graph)(event, np.asarray(candidates))

    def score(self, X, y=None, graph=None, k: int = 1) -> float:
        """precision@k on events carrying negatives."""
        check_is_fitted(self, "model_")
        return precision_at_k(linear_scorer(self.model_, graph), list(X), [k])[k]
