"""Vertex-labeled dependency graphs and connected-subset enumeration.

Subsets of vertices are always represented as sorted tuples of ints. That
representation is what the prefix tree keys on and what every cache in the
coefficient engine uses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import InputError

Subset = tuple[int, ...]


@dataclass(frozen=True)
class DependencyGraph:
    """Simple undirected graph whose vertices carry opaque byte labels.

    Attributes:
        adjacency: per-vertex neighbor tuples, sorted ascending.
        labels: one ``bytes`` label per vertex.
    """

    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[bytes, ...]

    def __post_init__(self):
        n = len(self.adjacency)
        if len(self.labels) != n:
            raise InputError(f"expected {n} labels, got {len(self.labels)}")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise InputError(f"neighbors of {v} must be sorted and unique")
            for u in nbrs:
                if u == v:
                    raise InputError(f"self-loop at vertex {v}")
                if not 0 <= u < n or v not in self.adjacency[u]:
                    raise InputError(f"edge ({v}, {u}) is not symmetric")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[bytes] | None = None,
    ) -> "DependencyGraph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        if labels is None:
            labels = [b""] * n
        return cls(tuple(tuple(sorted(s)) for s in nbrs), tuple(labels))

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


def _check_subset(n: int, subset: Sequence[int]) -> None:
    prev = -1
    for v in subset:
        if not 0 <= v < n:
            raise InputError(f"vertex {v} out of range [0, {n})")
        if v <= prev:
            raise InputError("subset must be sorted and duplicate-free")
        prev = v


def induced_subgraph(g: DependencyGraph, subset: Sequence[int]) -> DependencyGraph:
    """G[S], renumbered 0..|S|-1 in the order of ``subset``."""
    _check_subset(g.n, subset)
    pos = {v: i for i, v in enumerate(subset)}
    adjacency = tuple(
        tuple(sorted(pos[u] for u in g.adjacency[v] if u in pos)) for v in subset
    )
    return DependencyGraph(adjacency, tuple(g.labels[v] for v in subset))


def _reach(adjacency: Sequence[Sequence[int]], start: int, allowed) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in adjacency[v]:
            if u in allowed and u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def is_connected(g: DependencyGraph) -> bool:
    # the empty graph counts as connected
    if g.n <= 1:
        return True
    return len(_reach(g.adjacency, 0, range(g.n))) == g.n


def subset_is_connected(g: DependencyGraph, subset: Iterable[int]) -> bool:
    """Connectivity of G[S] without materializing the induced graph."""
    members = set(subset)
    if len(members) <= 1:
        return True
    return len(_reach(g.adjacency, next(iter(members)), members)) == len(members)


def components(g: DependencyGraph) -> list[list[int]]:
    out = []
    seen: set[int] = set()
    for v in range(g.n):
        if v not in seen:
            comp = _reach(g.adjacency, v, range(g.n))
            seen |= comp
            out.append(sorted(comp))
    return out


class PrefixTree:
    """Set of sorted vertex tuples stored as a trie of nested dicts."""

    _END = -1

    def __init__(self):
        self._root: dict = {}
        self._size = 0

    def insert(self, key: Subset) -> bool:
        """Insert ``key``; return True if it was not already present."""
        node = self._root
        for v in key:
            node = node.setdefault(v, {})
        if self._END in node:
            return False
        node[self._END] = True
        self._size += 1
        return True

    def __contains__(self, key: Subset) -> bool:
        node = self._root
        for v in key:
            node = node.get(v)
            if node is None:
                return False
        return self._END in node

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[Subset]:
        # depth-first over ascending children yields lexicographic order
        stack: list[tuple[dict, Subset]] = [(self._root, ())]
        while stack:
            node, prefix = stack.pop()
            if self._END in node:
                yield prefix
            for v in sorted((k for k in node if k != self._END), reverse=True):
                stack.append((node[v], prefix + (v,)))


@dataclass
class ConnectedSubsetIndex:
    """All connected vertex subsets of size <= ``max_size``.

    ``by_vertex[v][j - 1]`` is the prefix tree of connected j-subsets that
    contain ``v``. A subset appears once per member vertex there; iteration
    over the index yields each subset exactly once, grouped by its minimum
    vertex, then by size, then lexicographically.
    """

    n: int
    max_size: int
    by_vertex: list[list[PrefixTree]] = field(repr=False)

    def count(self, v: int, size: int) -> int:
        return len(self.by_vertex[v][size - 1])

    def __iter__(self) -> Iterator[Subset]:
        for v in range(self.n):
            for tree in self.by_vertex[v]:
                for s in tree:
                    if s[0] == v:
                        yield s

    def __len__(self) -> int:
        return sum(1 for _ in self)

    def __contains__(self, subset: Subset) -> bool:
        if not subset or len(subset) > self.max_size:
            return False
        return subset in self.by_vertex[subset[0]][len(subset) - 1]


def enumerate_connected_subsets(g: DependencyGraph, max_size: int) -> ConnectedSubsetIndex:
    """Build every connected S with 1 <= |S| <= max_size.

    Level j for root v is obtained from level j-1 by adding one neighbor of
    the current set; the prefix tree drops repeats.
    """
    if max_size < 1:
        raise InputError("max_size must be >= 1")
    by_vertex = []
    for v in range(g.n):
        levels = [PrefixTree()]
        levels[0].insert((v,))
        for _ in range(1, max_size):
            nxt = PrefixTree()
            for s in levels[-1]:
                members = set(s)
                frontier = {u for w in s for u in g.adjacency[w]} - members
                for u in frontier:
                    nxt.insert(tuple(sorted(members | {u})))
            if not len(nxt):
                break
            levels.append(nxt)
        while len(levels) < max_size:
            levels.append(PrefixTree())
        by_vertex.append(levels)
    return ConnectedSubsetIndex(g.n, max_size, by_vertex)
