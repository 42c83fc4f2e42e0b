"""Package-wide defaults, overridable through environment variables."""

import os

ENV_TOL = "SIDLATTICE_TOL"
ENV_BACKEND = "SIDLATTICE_BACKEND"

_DEFAULT_TOL = 1e-8


def default_tol() -> float:
    """Default comparison tolerance; override with ``SIDLATTICE_TOL``."""
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return _DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_TOL} must parse as a float, got {raw!r}") from exc
    if value <= 0.0:
        raise ValueError(f"{ENV_TOL} must be positive, got {value}")
    return value


def backend() -> str:
    """Numeric backend for hot kernels: ``numba`` (default) or ``numpy``."""
    choice = os.environ.get(ENV_BACKEND, "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(f"{ENV_BACKEND} must be 'numba' or 'numpy', got {choice!r}")
    return choice
