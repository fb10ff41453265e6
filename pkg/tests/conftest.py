import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from partialrank.poset import PartitionedPreference, build_partial_ranking

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def posets(draw, max_items=7, min_items=1):
    """Random DAG: relations only go from lower to higher position in a hidden order."""
    n = draw(st.integers(min_items, max_items))
    order = draw(st.permutations(range(n)))
    pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)
             if draw(st.booleans())]
    return build_partial_ranking(range(n), pairs)


@st.composite
def partitioned(draw, max_items=6, min_items=2):
    n = draw(st.integers(min_items, max_items))
    items = draw(st.permutations(range(n)))
    cuts = sorted(draw(st.sets(st.integers(1, n - 1), max_size=n - 1))) if n > 1 else []
    bounds = [0, *cuts, n]
    return PartitionedPreference([items[a:b] for a, b in zip(bounds, bounds[1:])])


def utility_vectors(n, lo=-2.0, hi=2.0):
    return st.lists(st.floats(lo, hi, allow_nan=False), min_size=n, max_size=n).map(np.array)


@pytest.fixture
def two_component_poset():
    return build_partial_ranking([1, 2, 3, 4, 5], [(3, 2), (3, 5), (4, 1)])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
