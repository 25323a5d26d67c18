import os

from .errors import InputError

CAP_ENV = "ZFPF_MATRIX_CAP"


def matrix_cap(explicit: int | None, default: int) -> int:
    """Dimension cap: explicit argument, else $ZFPF_MATRIX_CAP, else ``default``."""
    if explicit is not None:
        return int(explicit)
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"{CAP_ENV} must be positive")
    return value
