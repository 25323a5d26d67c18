"""Exception hierarchy. Each class carries the CLI exit status it maps to."""


class ZfpfError(Exception):
    exit_code = 1


class InputError(ZfpfError, ValueError):
    """Malformed or out-of-range input (bad JSON, non-Hermitian term, ...)."""

    exit_code = 2


class DomainError(InputError):
    """A numeric argument lies outside the domain of the operation."""


class ContractError(InputError):
    """A caller broke an engine precondition, e.g. asked for zeta of a disconnected set."""


class RegimeError(ZfpfError):
    """The query point lies outside the region where the estimate is licensed."""

    exit_code = 3


class CapabilityError(ZfpfError):
    """The instance exceeds a configured size cap."""

    exit_code = 4


class NumericError(ZfpfError, ArithmeticError):
    """Non-finite intermediate values or a degenerate sampling step."""

    exit_code = 5
