"""Synthetic multiplicative families for engine tests."""

import itertools

import numpy as np

from zfpf.family import TableFamily
from zfpf.graph import components, induced_subgraph, subset_is_connected


def random_multiplicative_family(graph, order, alpha, rng, scale=0.5):
    """Random lambda on connected subsets, extended multiplicatively.

    For a connected S, lambda_{S, l} is random when |S| <= alpha l and zero
    otherwise. A disconnected S gets the Cauchy product of its components'
    series, which is what f_{G1 + G2} = f_{G1} f_{G2} forces.
    """
    table = {}
    n = graph.n
    for size in range(1, n + 1):
        for s in itertools.combinations(range(n), size):
            if subset_is_connected(graph, s):
                lam = np.zeros(order + 1, dtype=complex)
                for ell in range(1, order + 1):
                    if size <= alpha * ell:
                        lam[ell] = scale * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                table[s] = lam
    for size in range(2, n + 1):
        for s in itertools.combinations(range(n), size):
            if s in table:
                continue
            parts = components(induced_subgraph(graph, s))
            lam = np.zeros(order + 1, dtype=complex)
            lam[0] = 1
            for part in parts:
                lam = np.convolve(lam, table[tuple(s[i] for i in part)])[: order + 1]
            table[s] = lam
    return TableFamily(graph, table, alpha=alpha)
