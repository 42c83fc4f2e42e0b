"""Executable diagnostics for the quantum-to-Boolean transition.

Unitary Heisenberg evolution preserves operator norms exactly, so the
decay of an incompatibility observable is visible only through
expectation values. This module quantifies that: the norm-versus-angle
sweep for line pairs, the first time a series stays observationally
compatible, the Boolean pointer lattice generated by the phase-free
diagonal sector, and the end-to-end emergence report.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .engine import (
    DEFAULT_SUSTAIN,
    DEFAULT_THRESHOLD_RATIO,
    ExpectationSeries,
    decoherence_time,
    evolve,
    expectation_series,
    incompatibility_observable,
)
from .errors import GridMismatch, LatticeTooLarge
from .lattice import (
    DEFAULT_MAX_ELEMENTS,
    PropertyLattice,
    Subspace,
    distributivity_defect,
    from_vectors,
    generate_lattice,
    incompatibility_norm,
    is_boolean,
    meet,
    ortho,
)
from .spectral import FrequencyGrid, VanHoveObservable, VanHoveState, hs_norm

MAX_LATTICE_AMBIENT_DIM = 64
HS_CONSTANCY_TOL = 1e-10
DEGENERACY_RTOL = 1e-10


class Verdict(str, enum.Enum):
    BOOLEANIZED = "BOOLEANIZED"
    NOT_REACHED = "NOT_REACHED"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class BinPartition:
    """Disjoint node-index bins covering a frequency grid.

    Edges are fence posts 0 = e_0 < e_1 < ... < e_B = n_points; bin i holds
    node indices [e_i, e_{i+1}).
    """

    grid: FrequencyGrid
    edges: tuple

    def __post_init__(self):
        edges = tuple(int(e) for e in self.edges)
        if len(edges) < 2 or edges[0] != 0 or edges[-1] != self.grid.n_points:
            raise ValueError(
                f"edges must run from 0 to {self.grid.n_points}, got {edges}")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError(f"edges must be strictly increasing, got {edges}")
        object.__setattr__(self, "edges", edges)

    @property
    def n_bins(self) -> int:
        return len(self.edges) - 1

    @classmethod
    def equal_bins(cls, grid: FrequencyGrid, n_bins: int) -> "BinPartition":
        if not 1 <= n_bins <= grid.n_points:
            raise ValueError(f"need 1 <= n_bins <= {grid.n_points}, got {n_bins}")
        edges = [round(i * grid.n_points / n_bins) for i in range(n_bins + 1)]
        return cls(grid, tuple(edges))


class AngleSweepRow(NamedTuple):
    theta: float
    incompatibility: float
    meet_rank: int
    first_defect: float


def angle_sweep(thetas: Iterable[float]) -> list[AngleSweepRow]:
    """Incompatibility of the line pair span{e0}, span{cos t e0 + sin t e1}.

    Tabulates the projector-commutator norm (sin t cos t), the rank of the
    exact meet (1 only at t = 0), and the first distributivity defect of the
    triple (a, b, ortho(b)). The norm varies continuously with the angle
    while the meet and the defect jump, which is why the norm is the
    continuous incompatibility diagnostic.
    """
    rows = []
    a = from_vectors(2, [np.array([1.0, 0.0])])
    for theta in thetas:
        if not 0.0 <= theta <= 0.5 * math.pi + 1e-12:
            raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
        b = from_vectors(2, [np.array([math.cos(theta), math.sin(theta)])])
        rows.append(AngleSweepRow(
            theta=float(theta),
            incompatibility=incompatibility_norm(a, b),
            meet_rank=meet(a, b).rank,
            first_defect=distributivity_defect(a, b, ortho(b))[0],
        ))
    return rows


def effective_compatibility(series: ExpectationSeries,
                            epsilon: float) -> Optional[float]:
    """First sampled time after which |<D(t)>| stays at or below epsilon."""
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    mags = np.abs(series.values)
    below = mags <= epsilon
    suffix_ok = np.logical_and.accumulate(below[::-1])[::-1]
    hits = np.flatnonzero(suffix_ok)
    if hits.size == 0:
        return None
    return float(series.times[hits[0]])


def _decimation_factor(n_points: int, max_dim: int) -> int:
    return max(1, math.ceil(n_points / max_dim))


def pointer_lattice(observables: Sequence[VanHoveObservable],
                    partition: BinPartition,
                    max_elements: int = DEFAULT_MAX_ELEMENTS,
                    max_ambient_dim: int = MAX_LATTICE_AMBIENT_DIM) -> PropertyLattice:
    """Boolean lattice generated by the bin projectors of the diagonal sector.

    The diagonal profiles carry no evolution phase and mutually commute, so
    the indicator projectors of the partition bins generate a Boolean
    algebra. Subspace algebra runs on a decimated copy of the grid (at most
    max_ambient_dim dimensions); decimation can shift a bin edge by at most
    one block.
    """
    for obs in observables:
        if obs.grid != partition.grid:
            raise GridMismatch("observable grid differs from the partition grid")
    n = partition.grid.n_points
    factor = _decimation_factor(n, max_ambient_dim)
    m = math.ceil(n / factor)
    dec_edges = [0]
    for e in partition.edges[1:-1]:
        dec_edges.append(min(m - 1, max(1, round(e / factor))))
    dec_edges.append(m)
    if any(b <= a for a, b in zip(dec_edges, dec_edges[1:])):
        raise ValueError(
            f"partition with edges {partition.edges} is too fine for the "
            f"decimated ambient dimension {m}")

    seeds = []
    eye = np.eye(m, dtype=np.complex128)
    for lo, hi in zip(dec_edges, dec_edges[1:]):
        seeds.append(Subspace(m, eye[:, lo:hi]))
    lat = generate_lattice(seeds, max_elements=max_elements, ambient_dim=m)
    if not lat.closed:
        raise LatticeTooLarge(
            f"pointer lattice closure exceeded max_elements={max_elements}")
    return lat


@dataclass(frozen=True, eq=False)
class EmergenceReport:
    """Outcome of one emergence run.

    The kernel norm of the incompatibility observable is conserved by the
    unitary evolution (checked to 1e-10 at construction); only the
    expectation series decays, and the verdict is BOOLEANIZED exactly when
    both decay times were reached inside the window and the pointer lattice
    is Boolean.
    """

    series: ExpectationSeries
    decoherence_time: Optional[float]
    effective_compatibility_time: Optional[float]
    hs_norm_initial: float
    hs_norm_final: float
    pointer_lattice_boolean: bool
    verdict: Verdict

    def __post_init__(self):
        if abs(self.hs_norm_initial - self.hs_norm_final) > HS_CONSTANCY_TOL:
            raise ValueError(
                "evolution must conserve the kernel norm: "
                f"{self.hs_norm_initial} vs {self.hs_norm_final}")
        if self.verdict is Verdict.BOOLEANIZED:
            if (self.decoherence_time is None
                    or self.effective_compatibility_time is None
                    or not self.pointer_lattice_boolean):
                raise ValueError(
                    "BOOLEANIZED requires both times reached and a Boolean "
                    "pointer lattice")

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "decoherence_time": self.decoherence_time,
            "effective_compatibility_time": self.effective_compatibility_time,
            "hs_norm_initial": self.hs_norm_initial,
            "hs_norm_final": self.hs_norm_final,
            "pointer_lattice_boolean": self.pointer_lattice_boolean,
            "series": {
                "times": self.series.times.tolist(),
                "re": self.series.values.real.tolist(),
                "im": self.series.values.imag.tolist(),
                "abs": np.abs(self.series.values).tolist(),
                "initial_magnitude": self.series.initial_magnitude,
                "recurrence_time": self.series.recurrence_time,
            },
        }


def _degeneracy_scale(o1: VanHoveObservable, o2: VanHoveObservable) -> float:
    k1 = hs_norm(o1.kernel)
    k2 = hs_norm(o2.kernel)
    d1 = float(np.ptp(o1.diag.values)) if o1.diag.values.size else 0.0
    d2 = float(np.ptp(o2.diag.values)) if o2.diag.values.size else 0.0
    return k1 * k2 + d1 * k2 + d2 * k1


def run_emergence(rho: VanHoveState,
                  o1: VanHoveObservable,
                  o2: VanHoveObservable,
                  partition: BinPartition,
                  t_max: float,
                  n_samples: int,
                  epsilon: float,
                  threshold_ratio: float = DEFAULT_THRESHOLD_RATIO,
                  sustain: int = DEFAULT_SUSTAIN,
                  max_elements: int = DEFAULT_MAX_ELEMENTS,
                  tol: Optional[float] = None) -> EmergenceReport:
    """Full pipeline: commutator, decay diagnostics, pointer lattice, verdict.

    DEGENERATE means the premise failed: the observables already commute
    (the incompatibility kernel vanishes relative to the operand scale), so
    there is nothing to decohere.
    """
    incompat = incompatibility_observable(o1, o2)
    hs_initial = hs_norm(incompat.kernel)
    series = expectation_series(rho, incompat, t_max, n_samples)
    hs_final = hs_norm(evolve(incompat.to_observable(), t_max).kernel)
    t_dec = decoherence_time(series, threshold_ratio, sustain)
    t_eff = effective_compatibility(series, epsilon)
    lat = pointer_lattice([o1, o2], partition, max_elements=max_elements)
    boolean = is_boolean(lat, tol)

    if hs_initial <= DEGENERACY_RTOL * _degeneracy_scale(o1, o2):
        verdict = Verdict.DEGENERATE
    elif t_dec is not None and t_eff is not None and boolean:
        verdict = Verdict.BOOLEANIZED
    else:
        verdict = Verdict.NOT_REACHED
    return EmergenceReport(
        series=series,
        decoherence_time=t_dec,
        effective_compatibility_time=t_eff,
        hs_norm_initial=hs_initial,
        hs_norm_final=hs_final,
        pointer_lattice_boolean=boolean,
        verdict=verdict,
    )
