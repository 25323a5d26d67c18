"""Truncated power series about the origin with complex coefficients."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class TaylorSeries:
    """Coefficients c_0..c_m of a power series truncated at order m."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex).reshape(-1)
        if c.size == 0:
            raise DomainError("a series needs at least the constant term")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def of(cls, coefficients, order: int | None = None) -> "TaylorSeries":
        c = np.asarray(coefficients, dtype=complex).reshape(-1)
        if order is not None:
            c = _fit(c, order)
        return cls(c)

    @property
    def order(self) -> int:
        return self.coefficients.size - 1

    def __len__(self) -> int:
        return self.coefficients.size

    def __getitem__(self, k):
        return self.coefficients[k]

    def truncate(self, order: int) -> "TaylorSeries":
        return TaylorSeries(_fit(self.coefficients, order))

    def __add__(self, other: "TaylorSeries") -> "TaylorSeries":
        m = min(self.order, other.order)
        return TaylorSeries(self.coefficients[: m + 1] + other.coefficients[: m + 1])

    def __mul__(self, other: "TaylorSeries") -> "TaylorSeries":
        return series_multiply(self, other)

    def __call__(self, z: complex) -> complex:
        """Horner evaluation of the truncated polynomial."""
        acc = 0j
        for c in self.coefficients[::-1]:
            acc = acc * z + c
        return complex(acc)

    def allclose(self, other: "TaylorSeries", rtol=1e-12, atol=0.0) -> bool:
        return self.order == other.order and bool(
            np.allclose(self.coefficients, other.coefficients, rtol=rtol, atol=atol)
        )


def _fit(c: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros(order + 1, dtype=complex)
    k = min(order + 1, c.size)
    out[:k] = c[:k]
    return out


def series_multiply(a: TaylorSeries, b: TaylorSeries, order: int | None = None) -> TaylorSeries:
    """Cauchy product truncated at ``order`` (default: the smaller input order)."""
    if order is None:
        order = min(a.order, b.order)
    prod = np.convolve(a.coefficients, b.coefficients)
    return TaylorSeries(_fit(prod, order))


def series_power_table(b: TaylorSeries, order: int) -> np.ndarray:
    """Rows ell = 0..order hold the coefficients of b(z)**ell up to z**order."""
    base = _fit(b.coefficients, order)
    table = np.zeros((order + 1, order + 1), dtype=complex)
    table[0, 0] = 1.0
    for ell in range(1, order + 1):
        table[ell] = np.convolve(table[ell - 1], base)[: order + 1]
    return table


def series_compose(a: TaylorSeries, b: TaylorSeries, order: int | None = None) -> TaylorSeries:
    """a(b(z)) truncated at ``order``; requires b(0) = 0."""
    if b.coefficients[0] != 0:
        raise DomainError("composition needs an inner series with zero constant term")
    if order is None:
        order = min(a.order, b.order)
    inner = _fit(b.coefficients, order)
    acc = np.zeros(order + 1, dtype=complex)
    for c in _fit(a.coefficients, order)[::-1]:
        acc = np.convolve(acc, inner)[: order + 1]
        acc[0] += c
    return TaylorSeries(acc)


def newton_log(f: TaylorSeries) -> TaylorSeries:
    """Series of log f from the series of f, via Newton's identity.

    The constant term must be real and positive; the recurrence is run on
    f / f(0) and log f(0) is put back as g_0.
    """
    c0 = complex(f.coefficients[0])
    if c0.imag != 0 or not c0.real > 0:
        raise DomainError(f"log series needs a real positive constant term, got {c0}")
    fn = f.coefficients / c0.real
    m = f.order
    g = np.zeros(m + 1, dtype=complex)
    g[0] = math.log(c0.real)
    k = np.arange(m + 1)
    for n in range(1, m + 1):
        # n g_n = n f_n - sum_{k=1}^{n-1} k g_k f_{n-k}
        acc = np.dot(k[1:n] * g[1:n], fn[n - 1 : 0 : -1]) if n > 1 else 0
        g[n] = fn[n] - acc / n
    return TaylorSeries(g)


def series_exp(g: TaylorSeries) -> TaylorSeries:
    """exp of a series, the inverse of :func:`newton_log` (same recurrence)."""
    m = g.order
    f = np.zeros(m + 1, dtype=complex)
    f[0] = cmath.exp(g.coefficients[0])
    k = np.arange(m + 1)
    for n in range(1, m + 1):
        # n f_n = sum_{k=1}^{n} k g_k f_{n-k}
        f[n] = np.dot(k[1 : n + 1] * g.coefficients[1 : n + 1], f[n - 1 :: -1][:n]) / n
    return TaylorSeries(f)
