import numpy as np
import pytest

from synclandscape.graphs import WeightedGraph


def random_weighted_graph(n, rng, density=0.5):
    """Symmetric graph with uniform(0.1, 2) weights on a random edge subset."""
    mask = np.triu(rng.random((n, n)) < density, 1)
    w = np.where(mask, rng.uniform(0.1, 2.0, (n, n)), 0.0)
    return WeightedGraph(w + w.T)


def random_instances(count, n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        g = random_weighted_graph(n, rng, density=rng.uniform(0.2, 0.9))
        out.append((g, rng.uniform(-np.pi, 3 * np.pi, n)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def two_disjoint_edges():
    w = np.zeros((4, 4))
    w[0, 1] = w[1, 0] = 1.0
    w[2, 3] = w[3, 2] = 1.0
    return WeightedGraph(w)


def single_edge():
    return WeightedGraph(np.array([[0.0, 1.0], [1.0, 0.0]]))
