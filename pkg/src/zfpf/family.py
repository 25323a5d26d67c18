"""Bounded families and the cluster-coefficient engine.

A family attaches to every induced subgraph G[S] of a host dependency graph
a sequence lambda_{G[S], l} such that

    f_G(z) = f_G(0) + sum_l (sum_S lambda_{G[S], l}) z**l.

The engine turns these into coefficients zeta_{G[S], l} through

    zeta_{S,l} = lambda_{S,l} - sum_{s<l} (s/l) sum_{L u T = S} zeta_{L,s} lambda_{T,l-s}

and sums them over connected subsets to get the Taylor series of log f_G.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import numpy as np

from .errors import ContractError, DomainError
from .graph import DependencyGraph, Subset, enumerate_connected_subsets, subset_is_connected
from .series import TaylorSeries, newton_log, series_compose, series_multiply  # noqa: F401

log = logging.getLogger(__name__)


class BoundedFamily(ABC):
    """Contract a model satisfies to plug into the coefficient engine.

    Subclasses hold the host graph and implement :meth:`_lambda_series`. The
    values must describe the normalized function f_G / f_G(0), must vanish on
    the empty set, and must vanish at order l whenever |S| > alpha * l.
    """

    alpha: int = 1

    def __init__(self, graph: DependencyGraph, alpha: int = 1):
        if alpha < 1:
            raise DomainError("alpha must be a positive integer")
        self.graph = graph
        self.alpha = alpha
        self._lambda_cache: dict[Subset, np.ndarray] = {}

    def f0(self, n_vertices: int) -> float:
        return 1.0

    @abstractmethod
    def _lambda_series(self, subset: Subset, order: int) -> np.ndarray:
        """Array of length order+1 with lambda_{G[subset], l} at index l (index 0 unused)."""

    def lambda_series(self, subset: Subset, order: int) -> np.ndarray:
        cached = self._lambda_cache.get(subset)
        if cached is not None and cached.size > order:
            return cached[: order + 1]
        if not subset:
            return np.zeros(order + 1, dtype=complex)
        values = np.asarray(self._lambda_series(subset, order), dtype=complex)
        self._lambda_cache.setdefault(subset, values)
        return values[: order + 1]

    def lam(self, subset: Subset, order: int) -> complex:
        return complex(self.lambda_series(tuple(subset), order)[order])


class TableFamily(BoundedFamily):
    """Family given by an explicit table {subset: lambda array}; absent subsets are zero."""

    def __init__(self, graph: DependencyGraph, table: dict, alpha: int = 1, f0: float = 1.0):
        super().__init__(graph, alpha)
        self.table = {tuple(k): np.asarray(v, dtype=complex) for k, v in table.items()}
        self._f0 = f0

    def f0(self, n_vertices: int) -> float:
        return self._f0

    def _lambda_series(self, subset, order):
        out = np.zeros(order + 1, dtype=complex)
        values = self.table.get(subset)
        if values is not None:
            k = min(values.size, order + 1)
            out[:k] = values[:k]
            out[0] = 0
        return out


class ZetaTable:
    """Memo of zeta series keyed by vertex subset, all truncated at one order."""

    def __init__(self, order: int):
        self.order = order
        self._data: dict[Subset, np.ndarray] = {}

    def get(self, subset: Subset):
        return self._data.get(subset)

    def put(self, subset: Subset, values: np.ndarray) -> np.ndarray:
        # first writer wins; concurrent writers compute identical arrays
        return self._data.setdefault(subset, values)

    def __contains__(self, subset: Subset) -> bool:
        return subset in self._data

    def __len__(self) -> int:
        return len(self._data)


def _submasks(mask: int):
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def _subset_of(members: Subset, mask: int) -> Subset:
    return tuple(v for i, v in enumerate(members) if mask >> i & 1)


def zeta_series(
    family: BoundedFamily,
    subset: Subset,
    order: int,
    table: ZetaTable | None = None,
    shortcut: bool = True,
) -> np.ndarray:
    """zeta_{G[S], l} for l = 0..order (index 0 is zero).

    With ``shortcut`` (the default) S must induce a connected subgraph and
    only connected L enter the covering-pair sum; without it every subset is
    computed by the full recurrence, which is how the structural zeros are
    checked.
    """
    subset = tuple(subset)
    if table is None:
        table = ZetaTable(order)
    elif table.order < order:
        raise ContractError(f"zeta table holds order {table.order}, need {order}")
    hit = table.get(subset)
    if hit is not None:
        return hit[: order + 1]
    if not subset:
        return np.zeros(order + 1, dtype=complex)
    g = family.graph
    if shortcut and not subset_is_connected(g, subset):
        raise ContractError(f"subset {subset} does not induce a connected subgraph")
    m = table.order
    alpha = family.alpha
    size = len(subset)
    zeta = np.zeros(m + 1, dtype=complex)
    if shortcut and size > alpha * m:
        return table.put(subset, zeta)[: order + 1]

    full = (1 << size) - 1
    # lam[mask] = lambda series of G[S restricted to mask]
    lam = np.zeros((full + 1, m + 1), dtype=complex)
    for mask in range(1, full + 1):
        lam[mask] = family.lambda_series(_subset_of(subset, mask), m)
    lam[:, 0] = 0
    # cover[X] = sum over T with X <= T <= S of lam[T]  (superset sums)
    cover = lam.copy()
    for i in range(size):
        bit = 1 << i
        for mask in range(full + 1):
            if not mask & bit:
                cover[mask] += cover[mask | bit]

    # pairs (L, T) with L a proper subset of S: T ranges over supersets of S \ L
    known = np.zeros(m + 1, dtype=complex)
    weights = np.arange(m + 1)
    for lmask in _submasks(full):
        if lmask == full:
            continue
        lsub = _subset_of(subset, lmask)
        if shortcut and not subset_is_connected(g, lsub):
            continue
        if shortcut and len(lsub) > alpha * (m - 1):
            continue
        zl = zeta_series(family, lsub, m, table, shortcut)
        if shortcut and not zl.any():
            continue
        known += np.convolve(weights * zl, cover[full ^ lmask])[: m + 1]

    # pairs with L = S: T is any subset of S, a self-referential convolution
    own = cover[0]
    lam_s = lam[full]
    for ell in range(1, m + 1):
        acc = known[ell]
        if ell > 1:
            acc += np.dot(weights[1:ell] * zeta[1:ell], own[ell - 1 : 0 : -1])
        zeta[ell] = lam_s[ell] - acc / ell
    return table.put(subset, zeta)[: order + 1]


def zeta(family: BoundedFamily, subset: Subset, order: int, table: ZetaTable | None = None) -> complex:
    if order < 1:
        raise DomainError("order must be >= 1")
    return complex(zeta_series(family, subset, order, table)[order])


def log_taylor(family: BoundedFamily, order: int, threads: int = 1) -> TaylorSeries:
    """Taylor series of log f_G at the origin, truncated at ``order``.

    The constant term is ln f_G(0); coefficient l is the sum of zeta_{G[S], l}
    over connected S with |S| <= alpha * l, accumulated in index order.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    g = family.graph
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = math.log(family.f0(g.n))
    if g.n == 0:
        return TaylorSeries(coeffs)
    max_size = min(family.alpha * order, g.n)
    index = enumerate_connected_subsets(g, max_size)
    subsets = list(index)
    table = ZetaTable(order)
    log.debug("log_taylor: %d connected subsets up to size %d", len(subsets), max_size)

    if threads > 1:
        # each size layer only depends on smaller subsets
        by_size: dict[int, list[Subset]] = {}
        for s in subsets:
            by_size.setdefault(len(s), []).append(s)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for size in sorted(by_size):
                list(pool.map(lambda s: zeta_series(family, s, order, table), by_size[size]))

    for s in subsets:
        coeffs[1:] += zeta_series(family, s, order, table)[1:]
    return TaylorSeries(coeffs)


def brute_force_log_taylor(family: BoundedFamily, order: int) -> TaylorSeries:
    """log f_G by summing lambda over all subsets, then Newton's identity.

    Exponential in n; an independent check of :func:`log_taylor` on small graphs.
    """
    g = family.graph
    f = np.zeros(order + 1, dtype=complex)
    f[0] = 1.0
    for size in range(1, g.n + 1):
        for s in combinations(range(g.n), size):
            f[1:] += family.lambda_series(s, order)[1:]
    out = newton_log(TaylorSeries(f)).coefficients.copy()
    out[0] = math.log(family.f0(g.n))
    return TaylorSeries(out)
