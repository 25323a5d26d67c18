"""Deterministic approximation of zero-free partition functions.

Quantum (k, d)-local Hamiltonians under tensorized measurements and Boolean
CSPs with an external field, via cluster coefficients on the dependency graph
and Taylor interpolation. ``zfpf.oracle`` holds exact exponential-cost
references.
"""

from .errors import (CapabilityError, ContractError, DomainError, InputError, NumericError,
                     RegimeError, ZfpfError)
from .family import BoundedFamily, TableFamily, log_taylor, zeta
from .graph import DependencyGraph, components, enumerate_connected_subsets, induced_subgraph, is_connected
from .interpolate import EstimateReport, GoodRegion, disc, estimate, required_order, strip_map
from .quantum import Hamiltonian, LocalTerm, QuantumFamily, TensorizedMeasurement, beta0, \
    estimate_partition, sample_gibbs
from .csp import Clause, CspFamily, CspFormula, estimate_csp, hardcore
from .series import TaylorSeries, newton_log

__version__ = "0.1.0"
