"""JSON schemas for Hamiltonians, measurements and CSP formulas.

Complex numbers are always ``[re, im]`` pairs. Matrices are flat row-major
lists of such pairs.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .csp import Clause, CspFormula
from .errors import InputError
from .quantum import Hamiltonian, LocalTerm, TensorizedMeasurement


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def to_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def from_pair(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise InputError(f"expected a complex number as [re, im], got {pair!r}")
    re, im = pair
    if not all(isinstance(x, (int, float)) and math.isfinite(x) for x in (re, im)):
        raise InputError(f"complex components must be finite numbers, got {pair!r}")
    return complex(re, im)


def _matrix(flat, dim: int, what: str) -> np.ndarray:
    if not isinstance(flat, list) or len(flat) != dim * dim:
        got = len(flat) if isinstance(flat, list) else type(flat).__name__
        raise InputError(f"{what}: expected {dim * dim} [re, im] entries, got {got}")
    return np.array([from_pair(p) for p in flat], dtype=complex).reshape(dim, dim)


def _field(data: dict, key: str, kind=int):
    if key not in data:
        raise InputError(f"missing field {key!r}")
    value = data[key]
    if kind is int and not (isinstance(value, int) and not isinstance(value, bool)):
        raise InputError(f"field {key!r} must be an integer")
    return value


def hamiltonian_from_dict(data: dict) -> Hamiltonian:
    q = _field(data, "q")
    n = _field(data, "n_sites")
    terms = []
    for j, t in enumerate(_field(data, "terms", list)):
        support = t.get("support")
        if not isinstance(support, list) or not all(isinstance(v, int) for v in support):
            raise InputError(f"term {j}: support must be a list of integers")
        dim = q ** len(support)
        terms.append(LocalTerm(tuple(support), _matrix(t.get("matrix"), dim, f"term {j} matrix")))
    return Hamiltonian(n, q, tuple(terms), _field(data, "k"), _field(data, "d"))


def hamiltonian_to_dict(h: Hamiltonian) -> dict:
    return {
        "q": h.q, "n_sites": h.n_sites, "k": h.k, "d": h.d,
        "terms": [
            {"support": list(t.support), "matrix": [to_pair(z) for z in t.matrix.reshape(-1)]}
            for t in h.terms
        ],
    }


def measurement_from_dict(data: dict, n_sites: int, q: int) -> TensorizedMeasurement:
    if data.get("identity") is True:
        return TensorizedMeasurement.identity(n_sites, q)
    sites = data.get("sites")
    if not isinstance(sites, list):
        raise InputError('measurement must be {"identity": true} or {"sites": [...]}')
    mats = tuple(_matrix(s, q, f"measurement site {v}") for v, s in enumerate(sites))
    return TensorizedMeasurement(n_sites, q, mats)


def csp_from_dict(data: dict) -> CspFormula:
    clauses = []
    for i, c in enumerate(_field(data, "clauses", list)):
        vs = c.get("vars")
        if not isinstance(vs, list) or not all(isinstance(v, int) for v in vs):
            raise InputError(f"clause {i}: vars must be a list of integers")
        table = c.get("table")
        if not isinstance(table, list):
            raise InputError(f"clause {i}: table must be a list of [re, im] pairs")
        clauses.append(Clause(tuple(vs), [from_pair(p) for p in table]))
    return CspFormula(_field(data, "n_vars"), tuple(clauses), _field(data, "k"), _field(data, "d"))


def csp_to_dict(f: CspFormula) -> dict:
    return {
        "n_vars": f.n_vars, "k": f.k, "d": f.d,
        "clauses": [{"vars": list(c.vars), "table": [to_pair(z) for z in c.table]} for c in f.clauses],
    }


def load_model(path):
    """Hamiltonian or CspFormula, told apart by their required keys."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    try:
        if "n_sites" in data:
            return hamiltonian_from_dict(data)
        if "n_vars" in data:
            return csp_from_dict(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None
    raise InputError(f"{path}: neither a Hamiltonian (n_sites) nor a CSP formula (n_vars)")
