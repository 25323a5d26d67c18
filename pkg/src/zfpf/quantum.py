"""Local Hamiltonians under tensorized measurement.

Conventions: Z_{H,O}(beta) = Tr[exp(-beta H) O]; sites are numbered
0..n-1 and basis states are ordered lexicographically with site 0 the most
significant digit. A term's matrix is indexed the same way over its own
(sorted) support.
"""

from __future__ import annotations

import cmath
import math
import struct
from dataclasses import dataclass, field

import numpy as np

from ._config import matrix_cap
from .errors import CapabilityError, InputError, NumericError, RegimeError
from .family import BoundedFamily
from .graph import DependencyGraph
from .interpolate import EstimateReport, GoodRegion, disc, estimate

DP_CAP = 2**14
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class LocalTerm:
    support: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        support = tuple(int(v) for v in self.support)
        if not support or list(support) != sorted(set(support)):
            raise InputError(f"term support must be non-empty, sorted and unique: {self.support}")
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InputError(f"term on {support} needs a square matrix, got shape {mat.shape}")
        if not np.allclose(mat, mat.conj().T, rtol=0, atol=HERMITIAN_TOL):
            raise InputError(f"term on {support} is not Hermitian")
        mat.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "matrix", mat)

    def norm(self) -> float:
        """Spectral norm from the Hermitian eigenvalues."""
        return float(np.max(np.abs(np.linalg.eigvalsh(self.matrix))))


@dataclass(frozen=True)
class Hamiltonian:
    """Sum of local Hermitian terms on n_sites q-level sites; a (k, d)-Hamiltonian."""

    n_sites: int
    q: int
    terms: tuple[LocalTerm, ...]
    k: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.q < 2:
            raise InputError(f"q must be >= 2, got {self.q}")
        if self.n_sites < 0 or self.k < 1 or self.d < 1:
            raise InputError("n_sites must be >= 0 and k, d >= 1")
        degree = [0] * self.n_sites
        for j, term in enumerate(self.terms):
            if len(term.support) > self.k:
                raise InputError(f"term {j} acts on {len(term.support)} > k = {self.k} sites")
            if term.support[-1] >= self.n_sites:
                raise InputError(f"term {j} support {term.support} exceeds n_sites = {self.n_sites}")
            expected = self.q ** len(term.support)
            if term.matrix.shape[0] != expected:
                raise InputError(f"term {j} matrix has dimension {term.matrix.shape[0]}, expected {expected}")
            for v in term.support:
                degree[v] += 1
        for v, deg in enumerate(degree):
            if deg > self.d:
                raise InputError(f"site {v} lies in {deg} > d = {self.d} terms")

    def max_term_norm(self) -> float:
        return max((t.norm() for t in self.terms), default=0.0)


@dataclass(frozen=True)
class TensorizedMeasurement:
    """O = tensor product of per-site q x q positive operators; ``sites=None`` is the identity."""

    n_sites: int
    q: int
    sites: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        if self.sites is None:
            return
        mats = []
        if len(self.sites) != self.n_sites:
            raise InputError(f"measurement has {len(self.sites)} site operators, expected {self.n_sites}")
        for v, m in enumerate(self.sites):
            m = np.array(m, dtype=complex)
            if m.shape != (self.q, self.q):
                raise InputError(f"site {v} operator has shape {m.shape}, expected ({self.q}, {self.q})")
            if not np.allclose(m, m.conj().T, rtol=0, atol=HERMITIAN_TOL):
                raise InputError(f"site {v} operator is not Hermitian")
            if np.linalg.eigvalsh(m).min() < -HERMITIAN_TOL:
                raise InputError(f"site {v} operator is not positive semidefinite")
            if not np.trace(m).real > 0:
                raise InputError(f"site {v} operator has non-positive trace")
            m.setflags(write=False)
            mats.append(m)
        object.__setattr__(self, "sites", tuple(mats))

    @classmethod
    def identity(cls, n_sites: int, q: int) -> "TensorizedMeasurement":
        return cls(n_sites, q, None)

    @property
    def is_identity(self) -> bool:
        return self.sites is None

    def site(self, v: int) -> np.ndarray:
        if self.sites is None:
            return np.eye(self.q, dtype=complex)
        return self.sites[v]

    def trace(self) -> float:
        if self.sites is None:
            return float(self.q) ** self.n_sites
        return math.prod(np.trace(m).real for m in self.sites)

    def log_trace(self) -> float:
        if self.sites is None:
            return self.n_sites * math.log(self.q)
        return sum(math.log(np.trace(m).real) for m in self.sites)

    def local(self, sites) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for v in sites:
            out = np.kron(out, self.site(v))
        return out

    def pinned(self, v: int, j: int) -> "TensorizedMeasurement":
        """O * M_{v,j}: site v multiplied by the projector onto |j>."""
        proj = np.zeros((self.q, self.q), dtype=complex)
        proj[j, j] = 1.0
        mats = [self.site(u) for u in range(self.n_sites)]
        mats[v] = mats[v] @ proj
        return TensorizedMeasurement(self.n_sites, self.q, tuple(mats))


@dataclass(frozen=True)
class SiteAssignment:
    sigma: tuple[int, ...]
    seed: int | None = None


def term_label(term: LocalTerm) -> bytes:
    rounded = np.round(term.matrix, 14) + 0.0  # + 0.0 folds -0.0 into 0.0
    return struct.pack("<I", len(term.support)) + rounded.astype(np.complex128).tobytes()


def to_dependency_graph(h: Hamiltonian) -> DependencyGraph:
    """One vertex per term; terms are adjacent when their supports intersect."""
    by_site: list[list[int]] = [[] for _ in range(h.n_sites)]
    for j, term in enumerate(h.terms):
        for v in term.support:
            by_site[v].append(j)
    edges = {(a, b) for group in by_site for a in group for b in group if a < b}
    return DependencyGraph.from_edges(len(h.terms), sorted(edges), [term_label(t) for t in h.terms])


def embed(matrix: np.ndarray, support, sites, q: int) -> np.ndarray:
    """Lift a term acting on ``support`` to the sorted site list ``sites``."""
    sites = list(sites)
    pos = {v: i for i, v in enumerate(sites)}
    r, k = len(sites), len(support)
    rest = [i for i, v in enumerate(sites) if v not in set(support)]
    full = np.kron(matrix, np.eye(q ** (r - k), dtype=complex))
    if r == 0:
        return full
    current = [pos[v] for v in support] + rest
    inv = list(np.argsort(current))
    t = full.reshape((q,) * (2 * r)).transpose(inv + [r + a for a in inv])
    return t.reshape(q**r, q**r)


def _lambda_dp(terms, measurement: TensorizedMeasurement, order: int, cap: int) -> np.ndarray:
    """lambda_{U', l} for every sub-multiset U' of ``terms`` (by bitmask) and l <= order.

    Runs the surjection-sum dynamic program on A_{S,l} = (-1)^l H_{S,l} / l!:
        A_{S,l} = -(1/l) sum_{j in S} H_j (A_{S,l-1} + A_{S minus j, l-1}),
    and takes the measurement-normalized trace on the joint support.
    """
    q = measurement.q
    t = len(terms)
    sites = sorted({v for term in terms for v in term.support})
    dim = q ** len(sites)
    if dim > cap:
        raise CapabilityError(f"joint support of {len(sites)} sites needs dimension {dim} > cap {cap}")
    hs = np.stack([embed(term.matrix, term.support, sites, q) for term in terms])
    n_masks = 1 << t
    out = np.zeros((n_masks, order + 1), dtype=complex)
    prev = np.zeros((n_masks, dim, dim), dtype=complex)
    prev[0] = np.eye(dim)
    if measurement.is_identity:
        def traces(stack):
            return np.einsum("mii->m", stack) / dim
    else:
        o_local = measurement.local(sites)
        tr_o = np.trace(o_local).real

        def traces(stack):
            return np.einsum("mij,ji->m", stack, o_local) / tr_o
    masks_with = [np.array([m for m in range(n_masks) if m >> j & 1]) for j in range(t)]
    for ell in range(1, order + 1):
        cur = np.zeros_like(prev)
        for j in range(t):
            idx = masks_with[j]
            cur[idx] += hs[j] @ (prev[idx] + prev[idx ^ (1 << j)])
        cur *= -1.0 / ell
        out[:, ell] = traces(cur)
        prev = cur
    out[0] = 0
    return out


def quantum_lambda(terms, measurement: TensorizedMeasurement, order: int, cap: int | None = None) -> complex:
    """lambda_{G,l} for the dependency graph on ``terms`` (zero when |terms| > l)."""
    terms = list(terms)
    if not terms or len(terms) > order:
        return 0j
    table = _lambda_dp(terms, measurement, order, matrix_cap(cap, DP_CAP))
    return complex(table[-1, order])


class QuantumFamily(BoundedFamily):
    """f_G(z) = Tr[exp(-z sum_{j in G} H_j) O] / Tr[O]; alpha = 1."""

    def __init__(self, hamiltonian: Hamiltonian, measurement: TensorizedMeasurement | None = None,
                 cap: int | None = None):
        super().__init__(to_dependency_graph(hamiltonian), alpha=1)
        if measurement is None:
            measurement = TensorizedMeasurement.identity(hamiltonian.n_sites, hamiltonian.q)
        if measurement.n_sites != hamiltonian.n_sites or measurement.q != hamiltonian.q:
            raise InputError("measurement and Hamiltonian disagree on n_sites or q")
        self.hamiltonian = hamiltonian
        self.measurement = measurement
        self.cap = matrix_cap(cap, DP_CAP)

    def _lambda_series(self, subset, order):
        table = _lambda_dp([self.hamiltonian.terms[j] for j in subset], self.measurement, order, self.cap)
        # one run yields every subset of ``subset``; keep them all
        for mask in range(1, table.shape[0] - 1):
            sub = tuple(v for i, v in enumerate(subset) if mask >> i & 1)
            self._lambda_cache.setdefault(sub, table[mask])
        return table[-1]


def beta0(k: int, d: int, h: float) -> float:
    """Radius 1/(5 e d k h) of the disc on which |log Z/Tr O| <= n is guaranteed."""
    if not (k > 0 and d > 0 and h > 0):
        raise InputError("k, d and h must be positive")
    return 1.0 / (5.0 * math.e * d * k * h)


def estimate_partition(
    hamiltonian: Hamiltonian,
    measurement: TensorizedMeasurement | None,
    beta: complex,
    eps: float,
    delta: float,
    region: GoodRegion | None = None,
    M: float | None = None,
    threads: int = 1,
    cap: int | None = None,
) -> EstimateReport:
    """Estimate Z_{H,O}(beta) within multiplicative error eps.

    By default the region is the disc of radius beta0 and M = n_sites, which
    licenses any |beta| <= (1 - delta) beta0. Supplying ``region`` and ``M``
    overrides both; zero-freeness is then the caller's claim.
    """
    if measurement is None:
        measurement = TensorizedMeasurement.identity(hamiltonian.n_sites, hamiltonian.q)
    beta = complex(beta)
    h = hamiltonian.max_term_norm()
    log_tr = measurement.log_trace()
    if h == 0:
        # no interaction: Z = Tr O exactly
        return EstimateReport(value=complex(measurement.trace()), log_value=complex(log_tr), order=0,
                              truncation_bound=0.0, elapsed_ms=0.0, beta0=None)
    b0 = beta0(hamiltonian.k, hamiltonian.d, h)
    if region is None:
        if abs(beta) > (1 - delta) * b0 * (1 + 1e-12):
            raise RegimeError(f"|beta| = {abs(beta):.6g} exceeds (1 - delta) beta0 = {(1 - delta) * b0:.6g}")
        region = disc(b0)
    if M is None:
        M = float(max(hamiltonian.n_sites, 1))
    family = QuantumFamily(hamiltonian, measurement, cap)
    rep = estimate(family, region, beta, eps, M, delta, threads=threads)
    log_value = rep.log_value + log_tr
    rep.log_value = log_value
    rep.value = cmath.exp(log_value)
    rep.beta0 = b0
    return rep


class GibbsSampler:
    """Site-by-site sampler for the computational-basis Gibbs distribution.

    Each site's conditional weights are estimates of pinned partition
    functions at error eps / (10 n). The estimator is deterministic, so
    estimates are memoized by the pinned prefix and reused across samples.
    """

    def __init__(self, hamiltonian: Hamiltonian, beta: float, eps: float, delta: float = 0.1,
                 threads: int = 1, cap: int | None = None):
        if isinstance(beta, complex) or not beta > 0:
            raise RegimeError(f"sampling needs a real positive beta, got {beta}")
        h = hamiltonian.max_term_norm()
        if h > 0:
            b0 = beta0(hamiltonian.k, hamiltonian.d, h)
            if beta > (1 - delta) * b0 * (1 + 1e-12):
                raise RegimeError(f"beta = {beta:.6g} exceeds (1 - delta) beta0 = {(1 - delta) * b0:.6g}")
        self.hamiltonian = hamiltonian
        self.beta = float(beta)
        self.eps = eps
        self.eps0 = eps / (10 * max(hamiltonian.n_sites, 1))
        self.delta = delta
        self.threads = threads
        self.cap = cap
        self._weights: dict[tuple[int, ...], np.ndarray] = {}

    def site_weights(self, prefix: tuple[int, ...]) -> np.ndarray:
        """Clamped estimates max(Re z_{v,j}, 0), j in [q], for v = len(prefix)."""
        prefix = tuple(prefix)
        cached = self._weights.get(prefix)
        if cached is not None:
            return cached
        ham = self.hamiltonian
        base = TensorizedMeasurement.identity(ham.n_sites, ham.q)
        for u, j in enumerate(prefix):
            base = base.pinned(u, j)
        v = len(prefix)
        weights = np.zeros(ham.q)
        for j in range(ham.q):
            rep = estimate_partition(ham, base.pinned(v, j), self.beta, self.eps0, self.delta,
                                     threads=self.threads, cap=self.cap)
            weights[j] = max(rep.value.real, 0.0)
        if not weights.sum() > 0:
            raise NumericError(f"all conditional weights vanish at site {v} (prefix {prefix})")
        self._weights[prefix] = weights
        return weights

    def chain_probability(self, sigma) -> float:
        """Probability that the sampler outputs ``sigma``."""
        p = 1.0
        for v, j in enumerate(sigma):
            w = self.site_weights(tuple(sigma[:v]))
            p *= w[j] / w.sum()
        return p

    def draw(self, rng: np.random.Generator) -> tuple[int, ...]:
        sigma: list[int] = []
        for _ in range(self.hamiltonian.n_sites):
            w = self.site_weights(tuple(sigma))
            cdf = np.cumsum(w)
            u = rng.random() * cdf[-1]
            sigma.append(int(np.searchsorted(cdf, u, side="right")))
        return tuple(sigma)

    def sample(self, count: int, seed: int) -> list[tuple[int, ...]]:
        rng = make_rng(seed)
        return [self.draw(rng) for _ in range(count)]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_gibbs(hamiltonian: Hamiltonian, beta: float, eps: float, seed: int,
                 delta: float = 0.1) -> SiteAssignment:
    sampler = GibbsSampler(hamiltonian, beta, eps, delta)
    return SiteAssignment(sampler.draw(make_rng(seed)), seed)


def random_hamiltonian(n_sites: int, rng: np.random.Generator, q: int = 2, k: int = 2, d: int = 2,
                       max_norm: float = 1.0, max_terms: int | None = None) -> Hamiltonian:
    """Random (k, d)-Hamiltonian with term norms in [0.2, 1] * max_norm.

    Terms mostly act on k sites; at most ``max_terms`` (default n_sites) terms.
    """
    if max_terms is None:
        max_terms = n_sites
    capacity = [d] * n_sites
    terms = []
    for _ in range(20 * max(max_terms, 1)):
        if len(terms) >= max_terms:
            break
        free = [v for v in range(n_sites) if capacity[v] > 0]
        if not free:
            break
        size = k if rng.random() < 0.75 else int(rng.integers(1, k + 1))
        size = min(size, len(free))
        support = tuple(sorted(int(v) for v in rng.choice(free, size=size, replace=False)))
        dim = q**size
        x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        mat = (x + x.conj().T) / 2
        mat *= rng.uniform(0.2, 1.0) * max_norm / np.max(np.abs(np.linalg.eigvalsh(mat)))
        terms.append(LocalTerm(support, mat))
        for v in support:
            capacity[v] -= 1
    return Hamiltonian(n_sites, q, tuple(terms), k, d)
