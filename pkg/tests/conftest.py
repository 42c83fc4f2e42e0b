import math

import numpy as np
import pytest

from sidlattice import (
    DiagonalPart,
    IncompatibilityObservable,
    KernelFamilySpec,
    Subspace,
    VanHoveObservable,
    VanHoveState,
    build_kernel,
    from_vectors,
    make_grid,
)

_acceptance_lines = []


@pytest.fixture
def acceptance_recorder():
    """Record one pass/fail line per acceptance criterion for the summary."""

    def record(num, desc, passed):
        _acceptance_lines.append((num, desc, passed))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc, passed in sorted(_acceptance_lines):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[criterion {num}] {status}: {desc}")


def haar_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_subspace(rng, d, rank=None):
    if rank is None:
        rank = int(rng.integers(0, d + 1))
    if rank == 0:
        return Subspace.zero(d)
    return Subspace(d, haar_unitary(rng, d)[:, :rank])


def random_density(rng, d):
    from sidlattice import DensityState

    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ a.conj().T
    return DensityState(rho / np.trace(rho).real)


def line(*coords):
    return from_vectors(len(coords), [np.array(coords, dtype=complex)])


def obs_matrix(obs):
    """Dense sampled matrix of a van Hove observable on its grid."""
    return np.diag(obs.diag.values).astype(complex) \
        + obs.grid.spacing * obs.kernel.values


def brute_expectation(rho, obs, t):
    """Direct double-sum expectation oracle (no anti-diagonal regrouping)."""
    g = rho.grid
    phase = np.exp(1j * t * (g.nodes[:, None] - g.nodes[None, :]))
    kernel_term = g.spacing**2 * np.sum(
        np.conjugate(rho.kernel.values) * obs.kernel.values * phase)
    diag_term = g.spacing * np.sum(rho.diag.values * obs.diag.values)
    return diag_term + kernel_term


def gaussian_scenario(omega_max=20.0, n_points=256, sigma=math.sqrt(2.0),
                      mu=10.0, Sigma=2.0):
    """State and incompatibility observable with exact decay exp(-t^2/2)."""
    grid = make_grid(omega_max, n_points)
    spec = KernelFamilySpec("gaussian_band", sigma=sigma, mu=mu, Sigma=Sigma)
    kernel = build_kernel(grid, spec)
    diag = DiagonalPart(grid, np.exp(-0.5 * ((grid.nodes - mu) / 3.0) ** 2))
    rho = VanHoveState.normalized(diag, kernel)
    return grid, rho, IncompatibilityObservable(kernel)


def linear_vs_gaussian_pair(grid, sigma=math.sqrt(2.0), mu=10.0, Sigma=2.0):
    """Diag-only linear observable against a gaussian-band kernel observable."""
    o1 = VanHoveObservable.diag_only(DiagonalPart(grid, grid.nodes))
    spec = KernelFamilySpec("gaussian_band", sigma=sigma, mu=mu, Sigma=Sigma)
    o2 = VanHoveObservable.kernel_only(build_kernel(grid, spec))
    return o1, o2
