"""Boolean CSPs with an external field as a (1, 1)-bounded family.

Z(field) = sum_{sigma in {0,1}^V} prod_e phi_e(sigma|_e) field^{|sigma|}.
Vertices of the dependency graph are variables; the coefficient of a variable
set U is the clause product at the assignment that is 1 on U and 0 elsewhere.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .family import BoundedFamily
from .graph import DependencyGraph
from .interpolate import EstimateReport, GoodRegion, estimate


@dataclass(frozen=True)
class Clause:
    """Constraint on sorted ``vars``; ``table`` lists values in lexicographic 0/1 order."""

    vars: tuple[int, ...]
    table: np.ndarray

    def __post_init__(self):
        vs = tuple(int(v) for v in self.vars)
        if not vs or list(vs) != sorted(set(vs)):
            raise InputError(f"clause variables must be non-empty, sorted and unique: {self.vars}")
        table = np.array(self.table, dtype=complex).reshape(-1)
        if table.size != 2 ** len(vs):
            raise InputError(f"clause on {vs} needs {2 ** len(vs)} table entries, got {table.size}")
        table.setflags(write=False)
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "table", table)

    def value_on_ones(self, ones) -> complex:
        """phi at the assignment that is 1 exactly on ``ones`` (outside variables pinned to 0)."""
        idx = 0
        for v in self.vars:
            idx = 2 * idx + (v in ones)
        return complex(self.table[idx])


@dataclass(frozen=True)
class CspFormula:
    n_vars: int
    clauses: tuple[Clause, ...]
    k: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        degree = [0] * self.n_vars
        for i, c in enumerate(self.clauses):
            if len(c.vars) > self.k:
                raise InputError(f"clause {i} has arity {len(c.vars)} > k = {self.k}")
            if c.vars[-1] >= self.n_vars:
                raise InputError(f"clause {i} mentions variable {c.vars[-1]} >= n_vars = {self.n_vars}")
            if c.table[0] != 1:
                raise InputError(
                    f"clause {i} has phi(0,...,0) = {c.table[0]}; rescale so it equals 1 "
                    "and fold the factor into a global constant"
                )
            for v in c.vars:
                degree[v] += 1
        for v, deg in enumerate(degree):
            if deg > self.d:
                raise InputError(f"variable {v} lies in {deg} > d = {self.d} clauses")


def hardcore(n: int, edges, fugacity_table=(1, 1, 1, 0)) -> CspFormula:
    """Independent sets of a graph: one clause per edge forbidding (1, 1)."""
    degree = [0] * n
    clauses = []
    for u, v in edges:
        a, b = sorted((u, v))
        clauses.append(Clause((a, b), fugacity_table))
        degree[a] += 1
        degree[b] += 1
    return CspFormula(n, tuple(clauses), k=2, d=max(max(degree, default=1), 1))


def clauses_by_variable(formula: CspFormula) -> list[list[Clause]]:
    touching: list[list[Clause]] = [[] for _ in range(formula.n_vars)]
    for c in formula.clauses:
        for v in c.vars:
            touching[v].append(c)
    return touching


def _label(v: int, clauses) -> bytes:
    parts = sorted(struct.pack("<I", c.vars.index(v)) + c.table.tobytes() for c in clauses)
    return b"".join(struct.pack("<I", len(p)) + p for p in parts)


def to_dependency_graph(formula: CspFormula) -> DependencyGraph:
    """One vertex per variable; co-occurring variables are adjacent."""
    edges = {(a, b) for c in formula.clauses for a in c.vars for b in c.vars if a < b}
    labels = [_label(v, cs) for v, cs in enumerate(clauses_by_variable(formula))]
    return DependencyGraph.from_edges(formula.n_vars, sorted(edges), labels)


def csp_lambda(formula: CspFormula, subset, order: int) -> complex:
    """Clause product at 1 on ``subset`` and 0 elsewhere when |subset| == order, else 0."""
    if len(subset) != order:
        return 0j
    ones = set(subset)
    value = 1 + 0j
    for c in formula.clauses:
        if ones.intersection(c.vars):
            value *= c.value_on_ones(ones)
    return value


class CspFamily(BoundedFamily):
    def __init__(self, formula: CspFormula):
        super().__init__(to_dependency_graph(formula), alpha=1)
        self.formula = formula
        self._touching = clauses_by_variable(formula)

    def _lambda_series(self, subset, order):
        out = np.zeros(order + 1, dtype=complex)
        if len(subset) <= order:
            ones = set(subset)
            seen: set[int] = set()
            value = 1 + 0j
            for v in subset:
                for c in self._touching[v]:
                    if id(c) not in seen:
                        seen.add(id(c))
                        value *= c.value_on_ones(ones)
            out[len(subset)] = value
        return out


def estimate_csp(formula: CspFormula, region: GoodRegion, field: complex, eps: float, delta: float,
                 M: float, threads: int = 1) -> EstimateReport:
    """Estimate Z(field); M must bound |log Z| on the region (not checked)."""
    return estimate(CspFamily(formula), region, field, eps, M, delta, threads=threads)
