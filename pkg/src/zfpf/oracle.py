"""Exact, exponential-cost reference values for everything the pipeline approximates."""

from __future__ import annotations

import itertools

import numpy as np

from ._config import matrix_cap
from .errors import CapabilityError, NumericError
from .quantum import Hamiltonian, TensorizedMeasurement, embed
from .series import TaylorSeries, newton_log

ORACLE_CAP = 2**12
CSP_MAX_VARS = 20


def _dimension(h: Hamiltonian, cap: int | None) -> int:
    dim = h.q**h.n_sites
    limit = matrix_cap(cap, ORACLE_CAP)
    if dim > limit:
        raise CapabilityError(f"dense dimension {dim} exceeds oracle cap {limit}")
    return dim


def assemble(h: Hamiltonian, cap: int | None = None) -> np.ndarray:
    """Dense sum of all terms, each tensored with identities off its support."""
    dim = _dimension(h, cap)
    out = np.zeros((dim, dim), dtype=complex)
    sites = range(h.n_sites)
    for term in h.terms:
        out += embed(term.matrix, term.support, sites, h.q)
    return out


def dense_measurement(o: TensorizedMeasurement | None, h: Hamiltonian) -> np.ndarray:
    if o is None or o.is_identity:
        return np.eye(h.q**h.n_sites, dtype=complex)
    return o.local(range(h.n_sites))


def exact_partition(h: Hamiltonian, o: TensorizedMeasurement | None, beta: complex,
                    cap: int | None = None) -> complex:
    """Tr[exp(-beta H) O] by Hermitian eigendecomposition."""
    mat = assemble(h, cap)
    evals, vecs = np.linalg.eigh(mat)
    weights = np.exp(-complex(beta) * evals)
    if o is None or o.is_identity:
        return complex(weights.sum())
    od = dense_measurement(o, h)
    # Tr[V diag(w) V^dag O] = sum_k w_k <v_k|O|v_k>
    diag = np.einsum("ik,ij,jk->k", vecs.conj(), od, vecs)
    return complex(np.dot(weights, diag))


def exact_f_series(h: Hamiltonian, o: TensorizedMeasurement | None, order: int,
                   cap: int | None = None) -> TaylorSeries:
    """f_l = (-1)^l Tr[H^l O] / (l! Tr O) for l = 0..order."""
    mat = assemble(h, cap)
    od = dense_measurement(o, h)
    tr_o = np.trace(od).real
    f = np.zeros(order + 1, dtype=complex)
    f[0] = 1.0
    power = np.eye(mat.shape[0], dtype=complex)
    for ell in range(1, order + 1):
        power = -(power @ mat) / ell
        f[ell] = np.trace(power @ od) / tr_o
    return TaylorSeries(f)


def exact_gibbs_distribution(h: Hamiltonian, beta: float, cap: int | None = None) -> np.ndarray:
    """diag(exp(-beta H)) / Tr exp(-beta H), indexed like the computational basis."""
    mat = assemble(h, cap)
    evals, vecs = np.linalg.eigh(mat)
    # shift by the ground energy; the normalization cancels it
    weights = np.exp(-float(beta) * (evals - evals.min()))
    diag = np.einsum("ik,k,ik->i", vecs, weights, vecs.conj()).real
    if diag.min() < -1e-12 * diag.max():
        raise NumericError(f"Gibbs diagonal has a negative entry {diag.min()}")
    diag = np.clip(diag, 0.0, None)
    return diag / diag.sum()


def index_to_assignment(index: int, n_sites: int, q: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n_sites):
        index, r = divmod(index, q)
        digits.append(r)
    return tuple(reversed(digits))


def assignment_to_index(sigma, q: int) -> int:
    index = 0
    for s in sigma:
        index = index * q + int(s)
    return index


def exact_csp_partition(formula, field: complex) -> complex:
    """sum over sigma in {0,1}^n of prod_e phi_e(sigma|_e) * field^{|sigma|}."""
    n = formula.n_vars
    if n > CSP_MAX_VARS:
        raise CapabilityError(f"{n} variables exceeds the enumeration cap {CSP_MAX_VARS}")
    field = complex(field)
    total = 0j
    for sigma in itertools.product((0, 1), repeat=n):
        weight = complex(field ** sum(sigma))
        for clause in formula.clauses:
            idx = 0
            for v in clause.vars:
                idx = 2 * idx + sigma[v]
            weight *= clause.table[idx]
            if weight == 0:
                break
        total += weight
    return total


def classical_partition(h: Hamiltonian, beta: complex) -> complex:
    """sum_sigma exp(-beta sum_j H_j(sigma)) for diagonal terms, by enumeration."""
    total = 0j
    for sigma in itertools.product(range(h.q), repeat=h.n_sites):
        energy = 0.0
        for term in h.terms:
            local = assignment_to_index([sigma[v] for v in term.support], h.q)
            energy += term.matrix[local, local].real
        total += np.exp(-complex(beta) * energy)
    return complex(total)


def exact_log_series(h: Hamiltonian, o: TensorizedMeasurement | None, order: int) -> TaylorSeries:
    """Ground-truth log series: Newton's identity applied to :func:`exact_f_series`."""
    return newton_log(exact_f_series(h, o, order))

