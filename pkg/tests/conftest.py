import itertools

import networkx as nx
import numpy as np
import pytest

from zfpf.graph import DependencyGraph


def from_nx(g: nx.Graph) -> DependencyGraph:
    g = nx.convert_node_labels_to_integers(g)
    return DependencyGraph.from_edges(g.number_of_nodes(), list(g.edges()))


def brute_connected(g: nx.Graph, max_size: int) -> set[tuple[int, ...]]:
    out = set()
    for size in range(1, min(max_size, g.number_of_nodes()) + 1):
        for s in itertools.combinations(sorted(g.nodes()), size):
            if nx.is_connected(g.subgraph(s)):
                out.add(s)
    return out


def small_graphs(max_n: int):
    """Every graph on at most ``max_n`` vertices up to isomorphism (n <= 7)."""
    for g in nx.graph_atlas_g():
        if 0 < g.number_of_nodes() <= max_n:
            yield g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


PAULI_Z = np.diag([1.0, -1.0]).astype(complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
