import math

import numpy as np
import pytest

from zfpf import oracle
from zfpf.csp import CspFormula, hardcore
from zfpf.errors import CapabilityError
from zfpf.interpolate import truncation_error_bound
from zfpf.quantum import Hamiltonian, LocalTerm, beta0, random_hamiltonian

from conftest import PAULI_X, PAULI_Z


def test_assemble_examples():
    m = np.array([[1, 2j], [-2j, 3]])
    h = Hamiltonian(1, 2, (LocalTerm((0,), m),), 1, 1)
    assert np.allclose(oracle.assemble(h), m)
    assert np.allclose(oracle.assemble(Hamiltonian(2, 2, (), 1, 1)), np.zeros((4, 4)))
    a, b = np.diag([0.5, -1.0]), PAULI_X
    two = Hamiltonian(2, 2, (LocalTerm((0,), a), LocalTerm((1,), b)), 1, 1)
    expected = sorted(x + y for x in (0.5, -1.0) for y in (1.0, -1.0))
    assert np.allclose(np.linalg.eigvalsh(oracle.assemble(two)), expected)


def test_exact_partition_examples():
    assert oracle.exact_partition(Hamiltonian(3, 2, (), 1, 1), None, 1.0) == pytest.approx(8)
    z = Hamiltonian(1, 2, (LocalTerm((0,), PAULI_Z),), 1, 1)
    assert oracle.exact_partition(z, None, 1.0) == pytest.approx(2 * math.cosh(1), rel=1e-14)
    assert 2 * math.cosh(1) == pytest.approx(3.0861613, abs=1e-7)
    hp = Hamiltonian(2, 2, (LocalTerm((0, 1), np.diag([2.0, 1.0, 4.0, 2.0])),), 2, 1)
    assert oracle.exact_partition(hp, None, 1.0) == pytest.approx(0.656866, abs=1e-6)


def test_exact_f_series_examples():
    z = Hamiltonian(1, 2, (LocalTerm((0,), PAULI_Z),), 1, 1)
    assert np.allclose(oracle.exact_f_series(z, None, 4).coefficients, [1, 0, 0.5, 0, 1 / 24])
    assert np.allclose(oracle.exact_f_series(Hamiltonian(2, 2, (), 1, 1), None, 3).coefficients, [1, 0, 0, 0])
    h = random_hamiltonian(3, np.random.default_rng(1))
    mat = oracle.assemble(h)
    assert oracle.exact_f_series(h, None, 1)[1] == pytest.approx(-np.trace(mat) / 8)


def test_gibbs_distribution_examples():
    uniform = oracle.exact_gibbs_distribution(Hamiltonian(2, 2, (), 1, 1), 0.5)
    assert np.allclose(uniform, 0.25)
    z = Hamiltonian(1, 2, (LocalTerm((0,), PAULI_Z),), 1, 1)
    b = 0.7
    assert np.allclose(oracle.exact_gibbs_distribution(z, b), np.array([math.exp(-b), math.exp(b)]) / (2 * math.cosh(b)))
    for seed in range(5):
        p = oracle.exact_gibbs_distribution(random_hamiltonian(4, np.random.default_rng(seed)), 3.0)
        assert abs(p.sum() - 1) <= 1e-12 and p.min() >= 0


def test_csp_partition_examples():
    assert oracle.exact_csp_partition(hardcore(4, [(0, 1), (1, 2), (2, 3)]), 1) == 8
    assert oracle.exact_csp_partition(CspFormula(5, (), 1, 1), 0.3) == pytest.approx(1.3**5)
    assert oracle.exact_csp_partition(hardcore(4, [(0, 1), (1, 2)]), 0) == 1
    with pytest.raises(CapabilityError):
        oracle.exact_csp_partition(CspFormula(21, (), 1, 1), 0.1)


def test_index_round_trip():
    for i in range(27):
        assert oracle.assignment_to_index(oracle.index_to_assignment(i, 3, 3), 3) == i


def test_log_series_evaluates_to_partition_within_truncation():
    for seed in range(4):
        h = random_hamiltonian(3, np.random.default_rng(seed))
        b0 = beta0(2, 2, h.max_term_norm())
        m, delta, M = 40, 0.3, 3.0
        beta = (1 - delta) * b0 * np.exp(0.7j)
        log_z = oracle.exact_log_series(h, None, m)(beta) + 3 * math.log(2)
        exact = oracle.exact_partition(h, None, beta)
        assert abs(log_z - np.log(exact)) <= truncation_error_bound(M, delta, m)
