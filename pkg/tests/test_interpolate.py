import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zfpf.csp import CspFamily, hardcore
from zfpf.errors import CapabilityError, DomainError, InputError, RegimeError
from zfpf.family import TableFamily
from zfpf.graph import DependencyGraph
from zfpf.interpolate import (compose_family, convex_region, custom_region, disc, estimate,
                              poly_zero_free_bound, required_order, strip_constants, strip_map,
                              truncation_error_bound)
from zfpf.quantum import Hamiltonian, LocalTerm, QuantumFamily

from conftest import PAULI_Z


def segment_distance(p, beta):
    t = np.clip((p * np.conj(beta)).real / abs(beta) ** 2, 0.0, 1.0)
    return np.abs(p - t * beta)


def test_required_order_examples():
    assert required_order(4, 0.5, 0.01) == math.ceil(2 * math.log(800)) == 14
    assert required_order(0.005, 0.5, 0.01) == 1
    assert required_order(4, 0.1, 0.001) == math.ceil(10 * math.log(40000)) == 106


def test_required_order_monotone():
    assert required_order(4, 0.1, 1e-2) <= required_order(4, 0.1, 1e-3)
    assert required_order(4, 0.2, 1e-3) <= required_order(4, 0.1, 1e-3)
    assert required_order(8, 0.1, 1e-3) >= required_order(4, 0.1, 1e-3)
    with pytest.raises(DomainError):
        required_order(0, 0.1, 0.1)


def test_truncation_error_bound_examples():
    assert truncation_error_bound(1, 0.5, 0) == pytest.approx(1.0)
    assert truncation_error_bound(1, 0.9, 10) == pytest.approx(0.1**11 / 0.9, rel=1e-12)
    values = [truncation_error_bound(3, 0.2, m) for m in range(50)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_strip_constants_quarter():
    c, n, rho = strip_constants(0.25)
    assert c == pytest.approx(1 - math.exp(-4), rel=1e-14)
    assert rho == pytest.approx((1 - math.exp(-5)) / (1 - math.exp(-4)), rel=1e-14)
    # the closed form evaluates to 1.011794
    assert rho == pytest.approx(1.01176, abs=1e-4)
    assert n == math.floor(5 * math.exp(5))


def test_strip_map_endpoints_and_containment():
    beta, delta = 0.7 + 0.3j, 0.5
    region = strip_map(beta, delta)
    assert abs(region.h(0)) < 1e-15
    assert abs(region.h(region.z_target) - beta) < 1e-10
    rng = np.random.default_rng(1)
    r = np.sqrt(rng.uniform(0, 1, 500))
    z = r * np.exp(2j * np.pi * rng.uniform(0, 1, 500))
    assert segment_distance(region.h(z), beta).max() < delta


def test_strip_map_errors():
    with pytest.raises(DomainError):
        strip_map(0, 0.5)
    with pytest.raises(DomainError):
        strip_map(1, 1.5)
    with pytest.raises(CapabilityError):
        strip_map(1, 0.01)


def test_compose_family_examples():
    g = DependencyGraph.from_edges(1, [])
    base = TableFamily(g, {(0,): [0, 1, 0, 0, 0]})
    assert np.allclose(compose_family(base, disc(0.3), 4).lambda_series((0,), 4), [0, 0.3, 0, 0, 0])
    ident = custom_region([1], target=0.5, z_target=0.5)
    assert np.allclose(compose_family(base, ident, 4).lambda_series((0,), 4), [0, 1, 0, 0, 0])
    h = custom_region([1, 1], target=0.75, z_target=0.5)
    assert np.allclose(compose_family(base, h, 4).lambda_series((0,), 4), [0, 1, 1, 0, 0])


def test_compose_family_disc_matches_general_path():
    g = DependencyGraph.from_edges(1, [])
    base = TableFamily(g, {(0,): [0, 1, -2, 0.5, 3]})
    fast = compose_family(base, disc(0.4), 4).lambda_series((0,), 4)
    slow = compose_family(base, custom_region([0.4], 0.2, 0.5), 4).lambda_series((0,), 4)
    assert np.allclose(fast, slow, atol=1e-15)


def single_z():
    return QuantumFamily(Hamiltonian(1, 2, (LocalTerm((0,), PAULI_Z),), 1, 1))


def test_estimate_cosh():
    rep = estimate(single_z(), disc(0.5), 0.25, 1e-3, M=1, delta=0.5)
    assert abs(rep.value / math.cosh(0.25) - 1) <= 1e-3
    assert rep.order == required_order(1, 0.5, 5e-4)
    assert rep.truncation_bound == truncation_error_bound(1, 0.5, rep.order)


def test_estimate_at_zero_is_f0():
    rep = estimate(single_z(), disc(0.5), 0, 1e-3, M=1, delta=0.5)
    assert rep.value == 1 and rep.log_value == 0


def test_estimate_hardcore_p4():
    fam = CspFamily(hardcore(4, [(0, 1), (1, 2), (2, 3)]))
    M = poly_zero_free_bound(2, 0.2 / 0.5, 1)  # roots of 1+4x+3x^2 are -1/3 and -1
    rep = estimate(fam, disc(0.2), 0.1, 1e-3, M=M, delta=0.5)
    assert abs(rep.value / 1.43 - 1) <= 1e-3


def test_estimate_through_custom_map():
    # h(z) = 0.5 z + 0.25 z^2 maps the unit disc into |w| < 0.75, where cosh has no zeros
    region = custom_region([0.5, 0.25], target=0.3, z_target=(-0.5 + math.sqrt(0.25 + 0.3)) / 0.5)
    assert abs(region.h(region.z_target) - 0.3) < 1e-14
    rep = estimate(single_z(), region, 0.3, 1e-4, M=1.0, delta=0.1)
    assert abs(rep.value / math.cosh(0.3) - 1) <= 1e-4


def test_strip_estimate_hits_order_cap():
    # the strip query sits at 1 - |z| ~ 1e-3, so m runs to the thousands
    region = strip_map(0.8, 0.5)
    with pytest.raises(CapabilityError):
        estimate(single_z(), region, 0.8, 1e-3, M=2.0, delta=1 - abs(region.z_target))


def test_estimate_outside_region():
    with pytest.raises(RegimeError):
        estimate(single_z(), disc(0.5), 0.49, 1e-3, M=1, delta=0.5)
    with pytest.raises(InputError):
        estimate(single_z(), strip_map(0.8, 0.5), 0.3, 1e-3, M=1, delta=0.001)


def test_convex_region_contains_segment():
    # the unit disc around 0.2 has boundary distance 1 - |z - 0.2|
    x = 0.5 + 0.3j
    region = convex_region(x, lambda z: 1 - abs(z - 0.2))
    assert abs(region.h(region.z_target) - x) < 1e-10
    rng = np.random.default_rng(3)
    z = np.sqrt(rng.uniform(0, 1, 300)) * np.exp(2j * np.pi * rng.uniform(0, 1, 300))
    assert (np.abs(region.h(z) - 0.2) < 1).all()


def test_poly_zero_free_bound():
    assert poly_zero_free_bound(3, 0.5, 2) == pytest.approx(3 * math.log(2) + math.log(2))
    with pytest.raises(DomainError):
        poly_zero_free_bound(3, 1.0, 1)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 1.5), st.floats(0, 2 * math.pi), st.floats(0.4, 0.95))
def test_strip_map_endpoints_property(mod, arg, frac):
    beta = cmath.rect(mod, arg)
    delta = min(frac, 0.99) * min(1.0, 4 * mod / 1.2)
    try:
        region = strip_map(beta, delta)
    except CapabilityError:
        return
    assert abs(region.h(region.z_target) - beta) < 1e-10
