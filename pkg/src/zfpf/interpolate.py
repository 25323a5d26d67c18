"""Good regions, truncation orders and the multiplicative estimator.

The estimator pulls a zero-free function back to the unit disc through a map
h with h(0) = 0, truncates the Taylor series of log(f o h) at the order the
truncation bound asks for, and evaluates it at the preimage of the query.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import CapabilityError, DomainError, InputError, NumericError, RegimeError
from .family import BoundedFamily, log_taylor
from .series import TaylorSeries, series_power_table

STRIP_DEGREE_CAP = 10**6
# the power table of a non-disc map costs O(m^2) memory and O(m^3) time
COMPOSE_ORDER_CAP = 2048
_PREIMAGE_TOL = 1e-12


@dataclass
class GoodRegion:
    """A disc map h (Taylor coefficients at 0, h(0) = 0) into a target region.

    ``kind`` is one of "disc", "strip", "convex", "custom". For discs any
    query x has preimage x / radius; the other kinds are built for a single
    query ``target`` whose preimage is ``z_target``.
    """

    kind: str
    coefficients: Callable[[int], np.ndarray]
    z_target: complex | None = None
    target: complex | None = None
    radius: float | None = None
    gamma: float = 1.0
    params: dict = field(default_factory=dict)

    def h_coefficients(self, order: int) -> np.ndarray:
        """h_0..h_order (h_0 = 0)."""
        c = np.asarray(self.coefficients(order), dtype=complex)
        out = np.zeros(order + 1, dtype=complex)
        k = min(order + 1, c.size)
        out[:k] = c[:k]
        return out

    def h(self, z, order: int | None = None):
        """Evaluate the map (vectorized over z) using coefficients up to ``order``."""
        if order is None:
            order = self.degree()
        c = self.h_coefficients(order)
        return np.polynomial.polynomial.polyval(np.asarray(z), c)

    def degree(self) -> int:
        return int(self.params.get("degree", 1))

    def preimage(self, x: complex) -> complex:
        x = complex(x)
        if x == 0:
            return 0j
        if self.kind == "disc":
            return x / self.radius
        if self.target is not None and abs(x - self.target) <= _PREIMAGE_TOL * max(1.0, abs(x)):
            return self.z_target
        raise InputError(f"{self.kind} region was built for query {self.target}, not {x}")


def disc(radius: float) -> GoodRegion:
    """The disc of the given radius; h(z) = radius * z."""
    if not radius > 0 or not math.isfinite(radius):
        raise DomainError(f"disc radius must be positive and finite, got {radius}")

    def coeffs(order):
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = radius
        return c

    return GoodRegion("disc", coeffs, radius=radius, params={"degree": 1})


def custom_region(h_coefficients, target: complex, z_target: complex, gamma: float = 1.0) -> GoodRegion:
    """Region given directly by the coefficients h_1, h_2, ... of a disc map."""
    c = np.concatenate([[0], np.asarray(h_coefficients, dtype=complex)])
    if abs(z_target) >= 1:
        raise DomainError("the preimage of the query must lie in the open unit disc")
    return GoodRegion(
        "custom", lambda order: c[: order + 1], z_target=complex(z_target),
        target=complex(target), gamma=gamma, params={"degree": c.size - 1},
    )


def strip_constants(delta_prime: float) -> tuple[float, int, float]:
    """(C, N, rho) of the polynomial mapping a slightly enlarged disc into a strip of [0, 1]."""
    c = 1.0 - math.exp(-1.0 / delta_prime)
    n = math.floor((1.0 + 1.0 / delta_prime) * math.exp(1.0 + 1.0 / delta_prime))
    rho = (1.0 - math.exp(-1.0 - 1.0 / delta_prime)) / c
    return c, n, rho


def strip_map(beta: complex, delta: float) -> GoodRegion:
    """Polynomial map of the unit disc into the delta-neighborhood of [0, beta].

    p(z) = beta * q(rho z) where q(w) = sum_{k<=N} (C w)^k / k normalized so
    that q(1) = 1; hence p(0) = 0 and p(1/rho) = beta.
    """
    beta = complex(beta)
    if beta == 0:
        raise DomainError("strip map needs a nonzero endpoint")
    if not 0 < delta < 1:
        raise DomainError(f"strip width must lie in (0, 1), got {delta}")
    dp = delta / (4 * abs(beta))
    # exp(1 + 1/dp) alone passes the cap long before it overflows
    if 1.0 + 1.0 / dp > math.log(STRIP_DEGREE_CAP):
        raise CapabilityError(f"strip width {delta} too narrow for |beta| = {abs(beta)}")
    c, n, rho = strip_constants(dp)
    if n > STRIP_DEGREE_CAP:
        raise CapabilityError(f"strip polynomial degree {n} exceeds cap {STRIP_DEGREE_CAP}")
    k = np.arange(1, n + 1)
    with np.errstate(under="ignore"):
        raw = np.power(c, k) / k
        scaled = np.power(c * rho, k) / k
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[1:] = beta * scaled / raw.sum()

    return GoodRegion(
        "strip", lambda order: coeffs[: order + 1], z_target=1.0 / rho, target=beta,
        gamma=1.0, params={"degree": n, "beta": beta, "delta": delta,
                           "delta_prime": dp, "C": c, "rho": rho},
    )


def convex_region(x: complex, boundary_distance: Callable[[complex], float]) -> GoodRegion:
    """Disc map for a convex region containing 0, built around the segment [0, x].

    ``boundary_distance(z)`` returns the distance from z to the boundary. For
    a convex region the segment's distance is the smaller endpoint distance,
    and the strip of half that width about [0, x] stays inside the region.
    """
    x = complex(x)
    d = min(boundary_distance(0j), boundary_distance(x))
    if not d > 0:
        raise RegimeError("0 and x must lie in the interior of the region")
    if x == 0:
        return disc(d / 2)
    region = strip_map(x, min(d / 2, 0.5))
    region.kind = "convex"
    return region


def required_order(M: float, delta: float, eps: float) -> int:
    """Smallest m = ceil((1/delta) ln(M/(delta eps))), clamped below at 1."""
    if not M > 0 or not math.isfinite(M):
        raise DomainError(f"M must be positive, got {M}")
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    if not 0 < eps < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {eps}")
    m = math.ceil(math.log(M / (delta * eps)) / delta)
    return max(m, 1)


def truncation_error_bound(M: float, delta: float, m: int) -> float:
    """(M / delta) (1 - delta)^(m + 1)."""
    return M / delta * (1.0 - delta) ** (m + 1)


def poly_zero_free_bound(degree: int, b: float, p0: complex) -> float:
    """M for a polynomial with no zeros in the unit disc, on the disc of radius b < 1."""
    if not 0 < b < 1:
        raise DomainError(f"b must lie in (0, 1), got {b}")
    return degree * math.log(1.0 / (1.0 - b)) + abs(cmath.log(p0))


class ComposedFamily(BoundedFamily):
    """The family of f o h: lambda^h_{H,k} = sum_{l<=k} [z^k] h(z)^l * lambda_{H,l}."""

    def __init__(self, base: BoundedFamily, region: GoodRegion, order: int):
        super().__init__(base.graph, base.alpha)
        self.base = base
        self.region = region
        self.order = order
        h = region.h_coefficients(order)
        if h[0] != 0:
            raise DomainError("a region map must fix the origin")
        if region.kind == "disc":
            self._diag = region.radius ** np.arange(order + 1)
            self._powers = None
        else:
            if order > COMPOSE_ORDER_CAP:
                raise CapabilityError(
                    f"order {order} through a {region.kind} map exceeds the cap {COMPOSE_ORDER_CAP}")
            self._diag = None
            self._powers = series_power_table(TaylorSeries(h), order)

    def f0(self, n_vertices):
        return self.base.f0(n_vertices)

    def _lambda_series(self, subset, order):
        if order > self.order:
            raise DomainError(f"composed family was built to order {self.order}")
        lam = self.base.lambda_series(subset, order)
        if self._diag is not None:
            return lam * self._diag[: order + 1]
        return lam @ self._powers[: order + 1, : order + 1]


def compose_family(family: BoundedFamily, region: GoodRegion, order: int) -> BoundedFamily:
    return ComposedFamily(family, region, order)


@dataclass
class EstimateReport:
    value: complex
    log_value: complex
    order: int
    truncation_bound: float
    elapsed_ms: float
    beta0: float | None = None
    warnings: list[str] = field(default_factory=list)


def estimate(
    family: BoundedFamily,
    region: GoodRegion,
    x: complex,
    eps: float,
    M: float,
    delta: float,
    threads: int = 1,
) -> EstimateReport:
    """Estimate f_G(x) within multiplicative error eps.

    Correctness rests on f_G being M-zero-free on the region; that is
    assumed, not checked. Half of eps goes to truncation, half is left as
    slack for floating-point evaluation.
    """
    start = time.perf_counter()
    z = region.preimage(x)
    if abs(z) > 1 - delta + _PREIMAGE_TOL:
        raise RegimeError(f"query {x} has preimage |z| = {abs(z):.6g} > 1 - delta = {1 - delta:.6g}")
    m = required_order(M, delta, eps / 2)
    series = log_taylor(compose_family(family, region, m), m, threads=threads)
    log_value = series(z)
    if not (math.isfinite(log_value.real) and math.isfinite(log_value.imag)):
        raise NumericError("log-series evaluation overflowed; is the function M-zero-free here?")
    try:
        value = cmath.exp(log_value)
    except OverflowError as exc:
        raise NumericError(f"exp overflow at log value {log_value}") from exc
    return EstimateReport(
        value=value,
        log_value=log_value,
        order=m,
        truncation_bound=truncation_error_bound(M, delta, m),
        elapsed_ms=(time.perf_counter() - start) * 1e3,
    )
