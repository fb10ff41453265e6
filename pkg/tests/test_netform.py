import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from partialrank.exceptions import (
    AllComponentsImpossible,
    EmptyCandidates,
    InsufficientCandidates,
    MissingDegree,
    UnknownNode,
    ValidationError,
)
from partialrank.likelihood import naive_topone_log_likelihood
from partialrank.netform import (
    ChoiceEvent,
    ComponentSpec,
    DirectedGraph,
    EventLikelihoods,
    GrowthConfig,
    component_event_log_likelihood,
    event_to_partial_ranking,
    events_from_edges,
    fit_network_mixture,
    grow_network,
    negative_sample,
    precision_at_k,
    sample_negatives,
    structural_features,
)
from partialrank.netform.evaluation import event_precision, rank_candidates
from partialrank.netform.growth import attachment_utilities, scope_candidates
from partialrank.netform.linear import fit_linear_choice, linear_scorer
from partialrank.training import OptimizerConfig

UA, PA = ComponentSpec("ua"), ComponentSpec("pa")
UA_FOF, PA_FOF = ComponentSpec("ua", "fof"), ComponentSpec("pa", "fof")


@pytest.fixture(scope="module")
def small_net():
    return grow_network(GrowthConfig(r=0.5, p=0.5, init_nodes=200, init_edge_prob=0.03,
                                     hub_count=5, hub_boost=(10, 20), seed=3))


def path_graph():
    # 0 -> 1 -> 2 -> 3 and 2 -> 0
    return DirectedGraph(5, [(0, 1), (1, 2), (2, 3), (2, 0)])


def test_graph_basics():
    g = path_graph()
    assert g.n_edges == 4
    assert not g.add_edge(0, 1)
    assert g.in_degree().tolist() == [1, 1, 1, 1, 0]
    assert g.degree("total").tolist() == [2, 2, 3, 1, 0]
    assert g.friends_of_friends(0) == {2}
    assert g.non_targets(0).tolist() == [2, 3, 4]
    assert g.hop_distances(0).tolist() == [0, 1, 2, 3, 6]
    with pytest.raises(UnknownNode):
        g.has_edge(9, 0)
    with pytest.raises(ValidationError):
        g.add_edge(1, 1)


def test_with_events_adds_edges_to_a_copy():
    g = path_graph()
    grown = g.with_events([ChoiceEvent.from_chosen(0, [3, 4])])
    assert grown.has_edge(0, 4) and not g.has_edge(0, 4)


def test_event_validation():
    with pytest.raises(ValidationError):
        ChoiceEvent.from_chosen(1, [1, 2])
    with pytest.raises(ValidationError):
        ChoiceEvent(0, ((1, 2), (2,)))
    with pytest.raises(ValidationError):
        ChoiceEvent.from_chosen(0, [1], scope="city")
    with pytest.raises(ValidationError):
        ChoiceEvent.from_chosen(0, [1], negatives=[1])
    with pytest.raises(ValidationError):
        ChoiceEvent.from_chosen(0, [1], candidates=[2, 3])


def test_event_to_ranking_two_blocks():
    ev = ChoiceEvent.from_chosen(0, [3, 7])
    pp = event_to_partial_ranking(ev, range(1, 11))
    assert pp.partitions == ((3, 7), (1, 2, 4, 5, 6, 8, 9, 10))


def test_event_to_ranking_windows():
    pp = event_to_partial_ranking(ChoiceEvent(0, ((3,), (7,))), range(1, 11))
    assert pp.partitions[:2] == ((3,), (7,)) and pp.M == 3


def test_event_choosing_everything_is_uninformative():
    pp = event_to_partial_ranking(ChoiceEvent.from_chosen(0, [1, 2]), [1, 2])
    assert pp.M == 1
    with pytest.raises(EmptyCandidates):
        event_to_partial_ranking(ChoiceEvent.from_chosen(0, []), [])
    with pytest.raises(ValidationError):
        event_to_partial_ranking(ChoiceEvent.from_chosen(0, [1]))


def test_uniform_one_of_ten():
    ev = ChoiceEvent.from_chosen(0, [4], candidates=range(1, 11))
    g = DirectedGraph(11)
    assert component_event_log_likelihood(ev, UA, 1.0, g) == pytest.approx(math.log(0.1), abs=1e-10)


def test_preferential_degree_share():
    g = DirectedGraph(3)
    ev = ChoiceEvent.from_chosen(0, [1], candidates=[1, 2])
    ll = component_event_log_likelihood(ev, PA, 1.0, g, degrees=[0, 8, 2])
    assert ll == pytest.approx(math.log(0.8), abs=1e-10)


def test_scope_violation_is_impossible():
    g = path_graph()
    ev = ChoiceEvent.from_chosen(0, [4], scope="fof")
    assert component_event_log_likelihood(ev, PA_FOF, 1.0, g, degrees=np.ones(5)) == -np.inf
    assert component_event_log_likelihood(ev, UA_FOF, 1.0, g) == -np.inf
    assert np.isfinite(component_event_log_likelihood(ev, UA, 1.0, g))


def test_zero_degree_target_impossible_under_pa():
    ev = ChoiceEvent.from_chosen(0, [4])
    assert component_event_log_likelihood(ev, PA, 1.0, path_graph()) == -np.inf


def test_degree_validation():
    with pytest.raises(MissingDegree):
        EventLikelihoods([ChoiceEvent.from_chosen(0, [1])], path_graph(), degrees=[1, 2])


def test_component_spec_parsing():
    assert ComponentSpec.parse("PA-FoF") == PA_FOF
    assert ComponentSpec.parse("ua").name == "ua"
    with pytest.raises(ValidationError):
        ComponentSpec.parse("xx")


@given(st.floats(-5, 5))
def test_event_likelihood_shift_invariance(c):
    g = DirectedGraph(6)
    ev = ChoiceEvent.from_chosen(0, [2, 5], candidates=range(1, 6))
    d = np.array([1.0, 3.0, 7.0, 2.0, 5.0, 4.0])
    # shifting log-degree by c is scaling degrees by e^c
    a = component_event_log_likelihood(ev, PA, 1.3, g, degrees=d)
    b = component_event_log_likelihood(ev, PA, 1.3, g, degrees=d * math.exp(c / 1.3))
    assert a == pytest.approx(b, abs=1e-9)


def test_likelihood_monotone_in_alpha_for_high_degree_choices():
    g = DirectedGraph(6)
    ev = ChoiceEvent.from_chosen(0, [4, 5], candidates=range(1, 6))
    d = np.array([1.0, 1.0, 2.0, 3.0, 8.0, 9.0])
    vals = [component_event_log_likelihood(ev, PA, a, g, degrees=d) for a in np.linspace(0, 2, 9)]
    assert np.all(np.diff(vals) > 0)


@given(st.integers(2, 30), st.floats(-2, 2), st.data())
def test_naive_matches_numgrb_for_single_choice(n, scale, data):
    chosen = data.draw(st.integers(1, n))
    d = np.arange(n + 1, dtype=float) + 1.0
    g = DirectedGraph(n + 1)
    ev = ChoiceEvent.from_chosen(0, [chosen], candidates=range(1, n + 1))
    a = component_event_log_likelihood(ev, PA, scale, g, degrees=d)
    b = component_event_log_likelihood(ev, PA, scale, g, degrees=d, naive=True)
    assert a == pytest.approx(b, abs=1e-9)
    assert b == pytest.approx(naive_topone_log_likelihood([chosen], range(1, n + 1), scale * np.log(d)))


def test_alpha_derivative_matches_differences(small_net):
    g, events = small_net
    lik = EventLikelihoods(events[:60], g)
    weights = np.linspace(0.2, 1.0, lik.n_events)
    for spec in (PA, PA_FOF):
        for naive in (False, True):
            lik.naive = naive
            _, d = lik.weighted_value_and_dalpha(spec, 0.8, weights)
            up = lik.weighted_value_and_dalpha(spec, 0.8 + 1e-5, weights)[0]
            down = lik.weighted_value_and_dalpha(spec, 0.8 - 1e-5, weights)[0]
            assert d == pytest.approx((up - down) / 2e-5, rel=1e-4)


def test_growth_collapses_to_pa():
    _, events = grow_network(GrowthConfig(r=1.0, p=0.0, seed=0))
    assert {ev.label for ev in events} == {"pa"}
    assert {ev.scope for ev in events} == {"global"}


def test_default_growth_shape_and_determinism():
    g1, ev1 = grow_network(GrowthConfig(seed=5))
    g2, ev2 = grow_network(GrowthConfig(seed=5))
    assert ev1 == ev2 and list(g1.edges()) == list(g2.edges())
    assert len(ev1) == 500
    assert all(len(ev.chosen) <= 5 for ev in ev1)


def test_growth_events_respect_scopes(small_net):
    g, events = small_net
    for ev in events:
        cand = set(scope_candidates(g, ev.source, ev.scope).tolist())
        assert set(ev.chosen) <= cand
        if ev.scope == "fof":
            assert set(ev.chosen) <= g.friends_of_friends(ev.source)
        if ev.scope == "global":
            assert len(ev.chosen) == 5


def test_growth_config_validation():
    with pytest.raises(ValidationError):
        GrowthConfig(r=1.5)
    with pytest.raises(ValidationError):
        GrowthConfig(hub_boost=(5, 1))
    assert GrowthConfig(r=0.2, p=0.2).component_weights.sum() == pytest.approx(1.0)


def test_preferential_choices_track_degree():
    # draw 50,000 choices from frozen degrees and compare with proportions
    rng = np.random.default_rng(0)
    d = np.array([1, 2, 3, 5, 8, 13, 21], dtype=float)
    u = attachment_utilities(d, "pa", 1.0)
    n = 50_000
    draws = np.argmax(u + rng.gumbel(size=(n, d.size)), axis=1)
    freq = np.bincount(draws, minlength=d.size)
    p = d / d.sum()
    se = np.sqrt(n * p * (1 - p))
    assert np.all(np.abs(freq - n * p) < 3 * se)


def test_attachment_utilities():
    assert attachment_utilities([0, 1, 4], "ua").tolist() == [1.0, 1.0, 1.0]
    pa = attachment_utilities([0, 1, 4], "pa", 2.0)
    assert pa[0] == -np.inf and pa[2] == pytest.approx(2 * math.log(4))


def test_structural_features():
    g = DirectedGraph(6, [(0, 1), (1, 2), (3, 0), (2, 4)])
    names = ("log_degree", "has_degree", "reciprocal", "is_fof", "hop_2", "hop_3", "hop_4", "hop_5", "hop_6plus")
    f = dict(zip(names, structural_features(g, 0, 5)))
    assert f["log_degree"] == 0 and f["has_degree"] == 0 and f["hop_6plus"] == 1
    assert dict(zip(names, structural_features(g, 0, 3)))["reciprocal"] == 1
    f = dict(zip(names, structural_features(g, 0, 2)))
    assert f["is_fof"] == 1 and f["hop_2"] == 1 and f["hop_3"] == 0
    assert dict(zip(names, structural_features(g, 0, 4)))["hop_3"] == 1
    with pytest.raises(UnknownNode):
        structural_features(g, 0, 9)


def test_negative_sampling():
    g = path_graph()
    ev = ChoiceEvent.from_chosen(0, [3])
    out = negative_sample(DirectedGraph(200, [(0, 1)]), ChoiceEvent.from_chosen(0, [3]), 100, seed=1)
    assert len(out.evaluation_candidates()) == 101
    assert not {0, 1, 3} & set(out.negatives)
    again = negative_sample(DirectedGraph(200, [(0, 1)]), ChoiceEvent.from_chosen(0, [3]), 100, seed=1)
    assert out.negatives == again.negatives
    with pytest.warns(UserWarning):
        assert negative_sample(g, ev, 0).evaluation_candidates() == (3,)
    with pytest.raises(InsufficientCandidates):
        negative_sample(g, ev, 3)


def test_precision_oracle_and_cap():
    events = [ChoiceEvent.from_chosen(0, [3], negatives=[1, 2]),
              ChoiceEvent.from_chosen(1, [0, 2], negatives=[3])]
    oracle = lambda ev, cand: np.where(np.isin(cand, ev.chosen), np.inf, 0.0)
    res = precision_at_k(oracle, events, [1, 3, 5])
    assert res[1] == 1.0
    # k=5 caps at the candidate count (3): event one has 1/3, event two 2/3
    assert res[5] == pytest.approx(0.5)


def test_ties_break_by_id():
    assert rank_candidates([5, 2, 9], [1.0, 1.0, 0.0]).tolist() == [2, 5, 9]


def test_constant_scores_give_chance_precision():
    rng = np.random.default_rng(0)
    events = []
    for _ in range(3000):
        ids = rng.permutation(50)[:21]
        events.append(ChoiceEvent.from_chosen(100, ids[:1].tolist(), negatives=ids[1:].tolist()))
    res = precision_at_k(np.zeros(101), events, [1])
    assert res[1] == pytest.approx(1 / 21, abs=0.015)


@given(st.integers(1, 5), st.integers(0, 8), st.lists(st.floats(-3, 3), min_size=13, max_size=13))
def test_precision_invariants(c, neg, scores):
    ev = ChoiceEvent.from_chosen(20, list(range(c)), negatives=list(range(c, c + neg)))
    ks = list(range(1, 9))
    p = event_precision(ev, np.asarray(scores[:c + neg]), ks)
    hits = [min(k, c + neg) * p[k] for k in ks]
    assert all(0 <= p[k] <= 1 for k in ks)
    assert np.all(np.diff(hits) >= -1e-12)
    assert max(hits) <= c + 1e-12


def test_sample_negatives_stream_is_seeded(small_net):
    g, events = small_net
    a = sample_negatives(g, events[:5], 10, seed=2)
    b = sample_negatives(g, events[:5], 10, seed=2)
    assert [e.negatives for e in a] == [e.negatives for e in b]


def test_fit_mixture_on_collapsed_pa(small_net):
    g, events = grow_network(GrowthConfig(r=1.0, p=0.0, init_nodes=300, init_edge_prob=0.02,
                                          hub_count=5, hub_boost=(20, 30), seed=1))
    res = fit_network_mixture(events, g, [PA], B=5, m_steps=50)
    assert res.weights == pytest.approx([1.0])
    assert abs(res.alpha - 1.0) < 0.25


def test_fit_mixture_invariants(small_net):
    g, events = small_net
    rows = []
    res = fit_network_mixture(events, g, B=4, on_iteration=rows.append)
    assert res.weights.sum() == pytest.approx(1.0)
    assert np.allclose(res.responsibilities.sum(axis=1), 1.0)
    assert [r["iteration"] for r in rows] == [1, 2, 3, 4]
    assert np.all(np.diff(res.loglik_trace) > -1e-6)


def test_impossible_event_raises():
    g = path_graph()
    ev = ChoiceEvent.from_chosen(0, [4], scope="fof")
    with pytest.raises(AllComponentsImpossible):
        fit_network_mixture([ev], g, [PA_FOF], B=1)


def test_ingest_windows():
    edges = [(0, 1, 0), (0, 2, 10), (0, 3, 12), (0, 4, 25), (1, 2, 11), (0, 1, 15)]
    g, events = events_from_edges(edges, 5, start=10, end=30, window=10)
    assert g.n_edges == 1
    by_src = {e.source: e for e in events}
    assert by_src[0].windows == ((2, 3), (4,))
    assert by_src[1].windows == ((2,),)
    with pytest.raises(ValidationError):
        events_from_edges(edges, 5, 10, 5, 1)


def test_linear_choice_learns_degree_preference(small_net):
    g, events = grow_network(GrowthConfig(r=1.0, p=0.0, init_nodes=300, init_edge_prob=0.02,
                                          hub_count=5, hub_boost=(20, 30), seed=2))
    events = sample_negatives(g, events, 30, seed=0)
    fit = fit_linear_choice(g, events, ("log_degree", "has_degree"), OptimizerConfig(max_steps=100))
    assert fit.model.coeffs[0] > 0.5
    scorer = linear_scorer(fit.model, g)
    assert precision_at_k(scorer, events, [1])[1] > precision_at_k(np.zeros(g.n_nodes), events, [1])[1]
