"""Discretized continuous-spectrum objects: grids, kernels, quadrature.

Frequencies live on a uniform midpoint grid over ``[0, omega_max]``; an
observable is a real diagonal profile plus a regular two-frequency kernel
sampled on that grid. All integrals are midpoint sums (exact for constants
and linear integrands, O(spacing^2) for smooth ones, and spectrally
accurate for profiles that decay inside the window).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import _accel
from .errors import (
    GridMismatch,
    LengthMismatch,
    NonPositiveRange,
    SupportOverflowWarning,
    TooFewPoints,
    UnsupportedFamily,
)
from .settings import default_tol

MAX_GRID_POINTS = 4096
ENVELOPE_LEAK_LIMIT = 1e-6
STATE_NORM_TOL = 1e-10

KERNEL_FAMILIES = ("gaussian_band", "lorentz_band", "rect_band", "random_bandlimited")
_RANDOM_MODES = 6


def _frozen_array(values, dtype, shape=None) -> np.ndarray:
    out = np.array(values, dtype=dtype, copy=True, order="C")
    if shape is not None and out.shape != shape:
        raise LengthMismatch(f"expected shape {shape}, got {out.shape}")
    if not np.all(np.isfinite(out.view(np.float64) if out.dtype == np.complex128 else out)):
        raise ValueError("samples must be finite")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform midpoint discretization of the frequency window [0, omega_max]."""

    omega_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.omega_max) and self.omega_max > 0.0):
            raise NonPositiveRange(f"omega_max must be positive, got {self.omega_max}")
        if self.n_points < 2:
            raise TooFewPoints(f"need at least 2 points, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return self.omega_max / self.n_points

    @cached_property
    def nodes(self) -> np.ndarray:
        """Midpoint nodes (k + 1/2) * spacing, k = 0 .. n_points - 1."""
        nodes = (np.arange(self.n_points) + 0.5) * self.spacing
        nodes.setflags(write=False)
        return nodes

    @property
    def recurrence_time(self) -> float:
        """Quasi-period 2*pi/spacing the uniform discretization imposes."""
        return 2.0 * math.pi / self.spacing


def make_grid(omega_max: float, n_points: int,
              max_points: int = MAX_GRID_POINTS) -> FrequencyGrid:
    """Build a midpoint frequency grid, capped at desk scale by default."""
    if n_points > max_points:
        raise ValueError(f"n_points={n_points} exceeds the dense-storage cap {max_points}")
    return FrequencyGrid(float(omega_max), int(n_points))


@dataclass(frozen=True, eq=False)
class DiagonalPart:
    """Real samples f(omega_k) of a singular diagonal profile."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values",
            _frozen_array(self.values, np.float64, (self.grid.n_points,)))

    @classmethod
    def zeros(cls, grid: FrequencyGrid) -> "DiagonalPart":
        return cls(grid, np.zeros(grid.n_points))

    @classmethod
    def from_function(cls, grid: FrequencyGrid, fn) -> "DiagonalPart":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=np.float64))


@dataclass(frozen=True, eq=False)
class RegularKernel:
    """Complex samples K(omega_k, omega_l) of a regular two-frequency kernel."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        n = self.grid.n_points
        object.__setattr__(
            self, "values", _frozen_array(self.values, np.complex128, (n, n)))

    @classmethod
    def zeros(cls, grid: FrequencyGrid) -> "RegularKernel":
        return cls(grid, np.zeros((grid.n_points, grid.n_points), dtype=np.complex128))


def _require_same_grid(*grids: FrequencyGrid) -> FrequencyGrid:
    first = grids[0]
    for g in grids[1:]:
        if g != first:
            raise GridMismatch(f"grids differ: {first} vs {g}")
    return first


@dataclass(frozen=True, eq=False)
class VanHoveObservable:
    """Observable with a singular diagonal part plus a regular kernel.

    The kernel must be Hermitian within the default tolerance and the
    diagonal profile real, so the whole operator is self-adjoint.
    """

    diag: DiagonalPart
    kernel: RegularKernel

    def __post_init__(self):
        _require_same_grid(self.diag.grid, self.kernel.grid)
        if not check_hermitian(self.kernel, default_tol()):
            raise ValueError("observable kernel is not Hermitian within tolerance")

    @property
    def grid(self) -> FrequencyGrid:
        return self.diag.grid

    @classmethod
    def diag_only(cls, diag: DiagonalPart) -> "VanHoveObservable":
        return cls(diag, RegularKernel.zeros(diag.grid))

    @classmethod
    def kernel_only(cls, kernel: RegularKernel) -> "VanHoveObservable":
        return cls(DiagonalPart.zeros(kernel.grid), kernel)


@dataclass(frozen=True, eq=False)
class VanHoveState:
    """State functional: nonnegative normalized diagonal plus Hermitian kernel."""

    diag: DiagonalPart
    kernel: RegularKernel

    def __post_init__(self):
        _require_same_grid(self.diag.grid, self.kernel.grid)
        if np.any(self.diag.values < 0.0):
            raise ValueError("state diagonal must be nonnegative")
        total = self.diag.grid.spacing * float(np.sum(self.diag.values))
        if abs(total - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state diagonal quadrature is {total}, expected 1")
        if not check_hermitian(self.kernel, default_tol()):
            raise ValueError("state kernel is not Hermitian within tolerance")

    @property
    def grid(self) -> FrequencyGrid:
        return self.diag.grid

    @classmethod
    def normalized(cls, diag: DiagonalPart, kernel: RegularKernel) -> "VanHoveState":
        """Rescale a nonnegative diagonal profile to unit quadrature."""
        total = diag.grid.spacing * float(np.sum(diag.values))
        if total <= 0.0:
            raise ValueError("state diagonal must have positive quadrature")
        return cls(DiagonalPart(diag.grid, diag.values / total), kernel)


@dataclass(frozen=True)
class KernelFamilySpec:
    """Parameters of a closed-form kernel family.

    ``sigma`` is the anti-diagonal (nu = omega - omega') width for the
    Gaussian and rect families, ``gamma`` the Lorentzian half width; ``mu``
    and ``Sigma`` locate the envelope along the mean frequency
    s = (omega + omega')/2. ``seed`` makes random_bandlimited reproducible.
    """

    family: str
    amplitude: float = 1.0
    sigma: Optional[float] = None
    gamma: Optional[float] = None
    mu: Optional[float] = None
    Sigma: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise UnsupportedFamily(
                f"unknown family {self.family!r}, expected one of {KERNEL_FAMILIES}")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        if self.family in ("gaussian_band", "rect_band", "random_bandlimited"):
            self._require_positive("sigma", self.sigma)
        if self.family == "lorentz_band":
            self._require_positive("gamma", self.gamma)
        self._require_positive("Sigma", self.Sigma)
        if self.mu is None or not math.isfinite(self.mu):
            raise ValueError(f"{self.family} needs a finite envelope center mu")
        if self.family == "random_bandlimited" and self.seed is None:
            raise ValueError("random_bandlimited needs a seed")

    @staticmethod
    def _require_positive(name: str, value):
        if value is None or math.isnan(value) or value <= 0.0:
            raise ValueError(f"width {name} must be strictly positive, got {value}")

    @classmethod
    def from_json(cls, doc: dict) -> "KernelFamilySpec":
        known = {"family", "amplitude", "sigma", "gamma", "mu", "Sigma", "seed"}
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown kernel spec keys: {sorted(extra)}")
        if "family" not in doc:
            raise ValueError("kernel spec needs a 'family' tag")
        return cls(**doc)

    def to_json(self) -> dict:
        doc = {"family": self.family, "amplitude": self.amplitude}
        for key in ("sigma", "gamma", "mu", "Sigma", "seed"):
            value = getattr(self, key)
            if value is not None:
                doc[key] = value
        return doc


def _warn_on_envelope_leak(grid: FrequencyGrid, spec: KernelFamilySpec) -> None:
    omega_max = grid.omega_max
    if spec.family == "rect_band":
        lo, hi = spec.mu - spec.Sigma, spec.mu + spec.Sigma
        inside = max(0.0, min(hi, omega_max) - max(lo, 0.0))
        leak = 1.0 - inside / (hi - lo)
    else:
        scale = spec.Sigma * math.sqrt(2.0)
        leak = 0.5 * (math.erfc(spec.mu / scale) + math.erfc((omega_max - spec.mu) / scale))
    if leak > ENVELOPE_LEAK_LIMIT:
        warnings.warn(
            f"{spec.family} envelope leaks {leak:.3e} of its mass outside "
            f"[0, {omega_max}]",
            SupportOverflowWarning,
            stacklevel=3,
        )


def _random_bandlimited(grid: FrequencyGrid, spec: KernelFamilySpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    n = grid.n_points
    phases = np.exp(
        2j * math.pi * np.outer(grid.nodes / grid.omega_max, np.arange(_RANDOM_MODES)))
    coeff = rng.standard_normal((_RANDOM_MODES, _RANDOM_MODES)) \
        + 1j * rng.standard_normal((_RANDOM_MODES, _RANDOM_MODES))
    coeff = 0.5 * (coeff + coeff.conj().T)
    base = phases @ coeff @ phases.conj().T / _RANDOM_MODES
    return 0.5 * (base + base.conj().T)


def build_kernel(grid: FrequencyGrid, spec: KernelFamilySpec) -> RegularKernel:
    """Sample a closed-form kernel family on the grid.

    gaussian_band is A * exp(-nu^2 / (2 sigma^2)) * exp(-(s - mu)^2 / (2 Sigma^2))
    with nu = omega - omega' and s = (omega + omega')/2; lorentz_band swaps the
    nu factor for gamma^2 / (nu^2 + gamma^2), rect_band for sharp indicator
    windows, and random_bandlimited modulates a seeded Hermitian mode mixture
    by the same envelopes. A SupportOverflowWarning is raised (not an error)
    when the s-envelope leaks more than 1e-6 of its mass outside the window.
    """
    _warn_on_envelope_leak(grid, spec)
    nodes = grid.nodes
    nu = nodes[:, None] - nodes[None, :]
    s = 0.5 * (nodes[:, None] + nodes[None, :])
    envelope = np.exp(-0.5 * ((s - spec.mu) / spec.Sigma) ** 2) \
        if spec.family != "rect_band" else (np.abs(s - spec.mu) <= spec.Sigma)

    if spec.family == "gaussian_band":
        values = spec.amplitude * np.exp(-0.5 * (nu / spec.sigma) ** 2) * envelope
    elif spec.family == "lorentz_band":
        values = spec.amplitude * spec.gamma**2 / (nu**2 + spec.gamma**2) * envelope
    elif spec.family == "rect_band":
        values = spec.amplitude * (np.abs(nu) <= spec.sigma) * envelope
    elif spec.family == "random_bandlimited":
        values = spec.amplitude * _random_bandlimited(grid, spec) \
            * np.exp(-0.5 * (nu / spec.sigma) ** 2) * envelope
    else:  # pragma: no cover - rejected at spec construction
        raise UnsupportedFamily(spec.family)
    return RegularKernel(grid, values.astype(np.complex128))


def quad1(grid: FrequencyGrid, samples) -> complex:
    """Midpoint quadrature of samples over the frequency window."""
    samples = np.asarray(samples)
    if samples.shape != (grid.n_points,):
        raise LengthMismatch(
            f"expected {grid.n_points} samples, got shape {samples.shape}")
    return complex(grid.spacing * np.sum(samples))


def kernel_compose(k1: RegularKernel, k2: RegularKernel) -> RegularKernel:
    """Kernel of the operator product: midpoint integral over the shared leg."""
    grid = _require_same_grid(k1.grid, k2.grid)
    return RegularKernel(grid, grid.spacing * (k1.values @ k2.values))


def hs_norm(kernel: RegularKernel) -> float:
    """Hilbert-Schmidt norm sqrt(spacing^2 * sum |K|^2); zero iff K = 0."""
    return float(kernel.grid.spacing * np.linalg.norm(kernel.values))


def check_hermitian(kernel: RegularKernel, tol: Optional[float] = None) -> bool:
    """True iff max |K(w, w') - conj(K(w', w))| <= tol."""
    tol = default_tol() if tol is None else tol
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return _accel.hermitian_residual(np.ascontiguousarray(kernel.values)) <= tol
