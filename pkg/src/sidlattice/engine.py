"""Heisenberg-picture evolution, commutator kernels, and expectation decay.

Observables evolve while states stay fixed: evolution multiplies the
regular kernel by unit-modulus phases exp(i (omega - omega') t) and leaves
the diagonal profile alone. The commutator of two such observables has no
singular part; scaled by -i it is the Hermitian incompatibility observable
whose expectation value decays whenever the paired state/kernel profile is
integrable in nu = omega - omega'.

On the uniform grid the phases depend only on the node-index difference,
so expectation values are evaluated by collapsing the weighted kernel onto
its anti-diagonals (the nu profile) and summing one oscillatory factor per
offset. That regrouping is exact, keeps roundoff at the 1e-13 level even
for strongly cancelling late-time sums, and is the hot path accelerated in
:mod:`sidlattice._accel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _accel
from .errors import UnsupportedFamily, WindowExceeded
from .spectral import (
    DiagonalPart,
    FrequencyGrid,
    KernelFamilySpec,
    RegularKernel,
    VanHoveObservable,
    VanHoveState,
    _require_same_grid,
    check_hermitian,
)

INCOMPATIBILITY_HERMITIAN_TOL = 1e-10
DEFAULT_THRESHOLD_RATIO = math.exp(-1.0)
DEFAULT_SUSTAIN = 10


@dataclass(frozen=True, eq=False)
class IncompatibilityObservable:
    """Hermitian observable -i [O1, O2]; kernel only, the singular part cancels."""

    kernel: RegularKernel

    def __post_init__(self):
        if not check_hermitian(self.kernel, INCOMPATIBILITY_HERMITIAN_TOL):
            raise ValueError("incompatibility kernel is not Hermitian at 1e-10")

    @property
    def grid(self) -> FrequencyGrid:
        return self.kernel.grid

    def to_observable(self) -> VanHoveObservable:
        return VanHoveObservable(DiagonalPart.zeros(self.grid), self.kernel)


@dataclass(frozen=True, eq=False)
class ExpectationSeries:
    """Sampled expectation values of an incompatibility observable.

    Times must stay inside half the grid recurrence time 2*pi/spacing;
    beyond it the discrete model turns quasi-periodic and stops tracking
    the continuum decay.
    """

    times: np.ndarray
    values: np.ndarray
    recurrence_time: float

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64, copy=True)
        values = np.array(self.values, dtype=np.complex128, copy=True)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be matching 1-d arrays")
        if times.size < 1 or np.any(np.diff(times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if times[-1] > 0.5 * self.recurrence_time:
            raise WindowExceeded(
                f"series reaches t={times[-1]}, beyond half the recurrence "
                f"time {self.recurrence_time}")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def initial_magnitude(self) -> float:
        return float(abs(self.values[0]))


def evolve(obs: VanHoveObservable, t: float) -> VanHoveObservable:
    """Heisenberg evolution by time t: phase the kernel, keep the diagonal."""
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    phases = np.exp(1j * t * obs.grid.nodes)
    evolved = _accel.apply_phase(np.ascontiguousarray(obs.kernel.values), phases)
    return VanHoveObservable(obs.diag, RegularKernel(obs.grid, evolved))


def commutator_kernel(o1: VanHoveObservable, o2: VanHoveObservable) -> RegularKernel:
    """Regular kernel of [O1, O2]; anti-Hermitian, singular part identically zero.

    The diagonal profiles enter through difference cross terms
    (d1(w) - d1(w')) K2 - (d2(w) - d2(w')) K1, and the kernels through the
    composed difference K1 o K2 - K2 o K1.
    """
    grid = _require_same_grid(o1.grid, o2.grid)
    d1 = o1.diag.values
    d2 = o2.diag.values
    k1 = o1.kernel.values
    k2 = o2.kernel.values
    cross = (d1[:, None] - d1[None, :]) * k2 - (d2[:, None] - d2[None, :]) * k1
    mixing = grid.spacing * (k1 @ k2 - k2 @ k1)
    return RegularKernel(grid, cross + mixing)


def incompatibility_observable(o1: VanHoveObservable,
                               o2: VanHoveObservable) -> IncompatibilityObservable:
    """Hermitian D = -i [O1, O2] built from the commutator kernel."""
    ck = commutator_kernel(o1, o2)
    return IncompatibilityObservable(RegularKernel(ck.grid, -1j * ck.values))


def _nu_offsets(grid: FrequencyGrid) -> np.ndarray:
    n = grid.n_points
    return grid.spacing * np.arange(-(n - 1), n, dtype=np.float64)


def _kernel_profile(rho: VanHoveState, kernel: RegularKernel) -> np.ndarray:
    weights = np.conjugate(rho.kernel.values) * kernel.values
    profile = _accel.nu_profile(np.ascontiguousarray(weights))
    return rho.grid.spacing**2 * profile


def expectation(rho: VanHoveState, obs: VanHoveObservable, t: float) -> complex:
    """Expectation value of the observable evolved to time t, in the state rho.

    The singular sector contributes the time-independent quadrature of
    rho(omega) O(omega); the regular sector contributes the double
    quadrature of conj(rho(w, w')) O(w, w') exp(i (w - w') t). The result
    is real (to 1e-10) whenever both arguments are Hermitian.
    """
    grid = _require_same_grid(rho.grid, obs.grid)
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    diag_term = grid.spacing * float(np.dot(rho.diag.values, obs.diag.values))
    profile = _kernel_profile(rho, obs.kernel)
    kernel_term = _accel.phase_series(
        profile, _nu_offsets(grid), np.array([t], dtype=np.float64))[0]
    return diag_term + complex(kernel_term)


def expectation_series(rho: VanHoveState, incompat: IncompatibilityObservable,
                       t_max: float, n_samples: int) -> ExpectationSeries:
    """Uniformly sampled expectation of the incompatibility observable.

    Raises WindowExceeded when t_max goes past half the recurrence time
    2*pi/spacing, where the discrete spectrum can no longer emulate the
    continuum limit.
    """
    grid = _require_same_grid(rho.grid, incompat.grid)
    if not (math.isfinite(t_max) and t_max > 0.0):
        raise ValueError(f"t_max must be positive, got {t_max}")
    if n_samples < 2:
        raise ValueError(f"need at least 2 samples, got {n_samples}")
    recurrence = grid.recurrence_time
    if t_max > 0.5 * recurrence:
        raise WindowExceeded(
            f"t_max={t_max} exceeds half the recurrence time "
            f"{recurrence} (limit {0.5 * recurrence})")
    times = np.linspace(0.0, t_max, int(n_samples))
    profile = _kernel_profile(rho, incompat.kernel)
    values = _accel.phase_series(profile, _nu_offsets(grid), times)
    return ExpectationSeries(times, values, recurrence)


def decoherence_time(series: ExpectationSeries,
                     threshold_ratio: float = DEFAULT_THRESHOLD_RATIO,
                     sustain: int = DEFAULT_SUSTAIN) -> Optional[float]:
    """First sampled time with |value| sustained below a fraction of |value(0)|.

    The drop must hold for ``sustain`` consecutive samples. Returns None when
    never sustained inside the window; a series that starts at exactly zero
    magnitude is degenerate and reports time 0.
    """
    if not 0.0 < threshold_ratio < 1.0:
        raise ValueError(f"threshold_ratio must be in (0, 1), got {threshold_ratio}")
    if sustain < 1:
        raise ValueError(f"sustain must be at least 1, got {sustain}")
    if series.initial_magnitude == 0.0:
        return 0.0
    below = np.abs(series.values) <= threshold_ratio * series.initial_magnitude
    for j in range(below.size - sustain + 1):
        if below[j:j + sustain].all():
            return float(series.times[j])
    return None


def combined_decay_rate(rho_spec: KernelFamilySpec,
                        obs_spec: KernelFamilySpec) -> tuple[str, float]:
    """Reduced decay parameter for a state/observable kernel family pair.

    Two gaussian_band profiles multiply to a Gaussian of width sigma_c with
    1/sigma_c^2 = 1/sigma1^2 + 1/sigma2^2. For two lorentz_band profiles the
    same reduced combination gamma_c = gamma1 gamma2 / (gamma1 + gamma2) is
    used; it is exact in the limit where one width dominates (the broad
    profile is flat across the narrow one) and approximate otherwise.
    """
    if rho_spec.family != obs_spec.family:
        raise UnsupportedFamily(
            f"analytic decay needs matching families, got {rho_spec.family} "
            f"and {obs_spec.family}")
    if rho_spec.family == "gaussian_band":
        sigma_c = math.sqrt(1.0 / (rho_spec.sigma**-2 + obs_spec.sigma**-2))
        return "gaussian", sigma_c
    if rho_spec.family == "lorentz_band":
        gamma_c = rho_spec.gamma * obs_spec.gamma / (rho_spec.gamma + obs_spec.gamma)
        return "lorentz", gamma_c
    raise UnsupportedFamily(
        f"no analytic decay form for family {rho_spec.family!r}")


def analytic_decay(kind: str, rate: float, times) -> np.ndarray:
    """Closed-form normalized decay |<D(t)>/<D(0)>| for a known profile kind.

    gaussian: exp(-rate^2 t^2 / 2). lorentz: exp(-rate |t|), accurate up to
    the O(rate/omega_max) truncation of the Lorentzian tails by the window.
    """
    times = np.asarray(times, dtype=np.float64)
    if kind == "gaussian":
        return np.exp(-0.5 * (rate * times) ** 2)
    if kind == "lorentz":
        return np.exp(-rate * np.abs(times))
    raise UnsupportedFamily(f"unknown analytic decay kind {kind!r}")


def analytic_oracle(rho_spec: KernelFamilySpec, obs_spec: KernelFamilySpec,
                    times) -> np.ndarray:
    """Normalized decay profile for a gaussian_band or lorentz_band pair."""
    kind, rate = combined_decay_rate(rho_spec, obs_spec)
    return analytic_decay(kind, rate, times)
