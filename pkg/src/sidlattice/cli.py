"""Scenario-driven command line: simulate, lattice, emerge, oracle.

Configuration is a single JSON document (schema in the README). Output
formats are stable: CSV files always carry the header ``t,re,im,abs`` with
17-significant-digit values and LF line endings, JSON reports are emitted
with sorted keys. Exit codes: 0 success, 2 config error, 3 window guard,
4 lattice-law failure, 5 degenerate premise.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .emergence import BinPartition, Verdict, run_emergence
from .engine import (
    DEFAULT_SUSTAIN,
    DEFAULT_THRESHOLD_RATIO,
    ExpectationSeries,
    analytic_decay,
    combined_decay_rate,
    expectation_series,
    incompatibility_observable,
)
from .errors import ConfigError, SidLatticeError, UnsupportedFamily, WindowExceeded
from .lattice import (
    DensityState,
    Subspace,
    check_lattice_laws,
    compatibility_matrix,
    from_vectors,
    generate_lattice,
    is_boolean,
    kolmogorov_check,
)
from .spectral import (
    DiagonalPart,
    FrequencyGrid,
    KernelFamilySpec,
    RegularKernel,
    VanHoveObservable,
    VanHoveState,
    build_kernel,
    make_grid,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_WINDOW = 3
EXIT_LAWS = 4
EXIT_DEGENERATE = 5

DIAG_FAMILIES = ("linear", "constant", "gaussian", "zero")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {what} {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{what} {path} must hold a JSON object")
    return doc


def _write_series_csv(path: str, series: ExpectationSeries) -> None:
    lines = ["t,re,im,abs"]
    for t, v in zip(series.times, series.values):
        lines.append(f"{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(abs(v))}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cfg_get(doc: dict, key: str, kind, what: str, required: bool = True):
    if key not in doc:
        if required:
            raise ConfigError(f"missing {what} key {key!r}")
        return None
    value = doc[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if kind is dict and isinstance(value, dict):
        return value
    raise ConfigError(f"{what} key {key!r} must be a {kind.__name__}")


def _build_diag(grid: FrequencyGrid, doc: Optional[dict], what: str) -> DiagonalPart:
    if doc is None:
        return DiagonalPart.zeros(grid)
    if "samples" in doc:
        samples = doc["samples"]
        if not isinstance(samples, list) or len(samples) != grid.n_points:
            raise ConfigError(
                f"{what} diag samples must list {grid.n_points} numbers")
        return DiagonalPart(grid, np.asarray(samples, dtype=np.float64))
    family = doc.get("family")
    amplitude = float(doc.get("amplitude", 1.0))
    if family == "linear":
        return DiagonalPart(grid, amplitude * grid.nodes)
    if family == "constant":
        return DiagonalPart(grid, amplitude * np.ones(grid.n_points))
    if family == "zero":
        return DiagonalPart.zeros(grid)
    if family == "gaussian":
        try:
            mu = float(doc["mu"])
            width = float(doc["Sigma"])
        except KeyError as exc:
            raise ConfigError(f"{what} gaussian diag needs mu and Sigma") from exc
        if width <= 0:
            raise ConfigError(f"{what} gaussian diag needs Sigma > 0")
        return DiagonalPart(grid, amplitude * np.exp(-0.5 * ((grid.nodes - mu) / width) ** 2))
    raise ConfigError(
        f"{what} diag family must be one of {DIAG_FAMILIES} or explicit samples")


def _build_kernel(grid: FrequencyGrid, doc: Optional[dict], what: str) -> RegularKernel:
    if doc is None:
        return RegularKernel.zeros(grid)
    try:
        spec = KernelFamilySpec.from_json(doc)
    except (UnsupportedFamily, ValueError, TypeError) as exc:
        raise ConfigError(f"{what} kernel spec invalid: {exc}") from exc
    return build_kernel(grid, spec)


def _build_observable(grid: FrequencyGrid, doc: dict, what: str) -> VanHoveObservable:
    if not isinstance(doc, dict):
        raise ConfigError(f"{what} must be an object with diag/kernel")
    diag = _build_diag(grid, doc.get("diag"), what)
    kernel = _build_kernel(grid, doc.get("kernel"), what)
    try:
        return VanHoveObservable(diag, kernel)
    except ValueError as exc:
        raise ConfigError(f"{what} is not a valid observable: {exc}") from exc


@dataclass(frozen=True)
class Scenario:
    grid: FrequencyGrid
    rho: VanHoveState
    o1: VanHoveObservable
    o2: VanHoveObservable
    t_max: float
    n_samples: int
    decoherence_ratio: float
    epsilon: Optional[float]
    sustain: int
    n_bins: Optional[int]
    series_path: Optional[str]
    report_path: Optional[str]


def load_scenario(path: str, need_partition: bool) -> Scenario:
    doc = _load_json(path, "config")
    grid_doc = _cfg_get(doc, "grid", dict, "config")
    try:
        grid = make_grid(_cfg_get(grid_doc, "omega_max", float, "grid"),
                         _cfg_get(grid_doc, "n_points", int, "grid"))
    except (SidLatticeError, ValueError) as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc

    state_doc = _cfg_get(doc, "state", dict, "config")
    diag = _build_diag(grid, state_doc.get("diag"), "state")
    kernel = _build_kernel(grid, state_doc.get("kernel"), "state")
    try:
        rho = VanHoveState.normalized(diag, kernel)
    except ValueError as exc:
        raise ConfigError(f"invalid state: {exc}") from exc

    obs_doc = _cfg_get(doc, "observables", dict, "config")
    if "O1" not in obs_doc or "O2" not in obs_doc:
        raise ConfigError("observables block needs O1 and O2")
    o1 = _build_observable(grid, obs_doc["O1"], "O1")
    o2 = _build_observable(grid, obs_doc["O2"], "O2")

    time_doc = _cfg_get(doc, "time", dict, "config")
    t_max = _cfg_get(time_doc, "t_max", float, "time")
    n_samples = _cfg_get(time_doc, "n_samples", int, "time")
    if not (math.isfinite(t_max) and t_max > 0):
        raise ConfigError(f"t_max must be positive, got {t_max}")
    if n_samples < 2:
        raise ConfigError(f"n_samples must be at least 2, got {n_samples}")
    half = 0.5 * grid.recurrence_time
    if t_max > half:
        raise WindowExceeded(
            f"t_max={t_max} exceeds half the recurrence time: recurrence "
            f"2*pi/spacing = {grid.recurrence_time}, window limit {half}")

    thr_doc = doc.get("thresholds") or {}
    if not isinstance(thr_doc, dict):
        raise ConfigError("thresholds must be an object")
    ratio = float(thr_doc.get("decoherence_ratio", DEFAULT_THRESHOLD_RATIO))
    sustain = int(thr_doc.get("sustain", DEFAULT_SUSTAIN))
    epsilon = thr_doc.get("epsilon")
    if epsilon is not None:
        epsilon = float(epsilon)
        if epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {epsilon}")
    if not 0.0 < ratio < 1.0:
        raise ConfigError(f"decoherence_ratio must be in (0, 1), got {ratio}")
    if sustain < 1:
        raise ConfigError(f"sustain must be at least 1, got {sustain}")

    n_bins = None
    if need_partition:
        part_doc = doc.get("partition")
        if not isinstance(part_doc, dict):
            raise ConfigError("emerge needs a partition block with n_bins")
        n_bins = _cfg_get(part_doc, "n_bins", int, "partition",
                          required=False)
        if n_bins is None:
            n_bins = 4
        if not 1 <= n_bins <= grid.n_points:
            raise ConfigError(f"n_bins must be in [1, {grid.n_points}], got {n_bins}")
        if epsilon is None:
            raise ConfigError("emerge needs thresholds.epsilon")

    out_doc = doc.get("output") or {}
    if not isinstance(out_doc, dict):
        raise ConfigError("output must be an object")
    return Scenario(
        grid=grid, rho=rho, o1=o1, o2=o2, t_max=t_max, n_samples=n_samples,
        decoherence_ratio=ratio, epsilon=epsilon, sustain=sustain, n_bins=n_bins,
        series_path=out_doc.get("series"), report_path=out_doc.get("report"),
    )


def run_simulate(config_path: str, out_path: Optional[str]) -> int:
    scenario = load_scenario(config_path, need_partition=False)
    out_path = out_path or scenario.series_path
    if not out_path:
        raise ConfigError("simulate needs --out or output.series in the config")
    incompat = incompatibility_observable(scenario.o1, scenario.o2)
    series = expectation_series(
        scenario.rho, incompat, scenario.t_max, scenario.n_samples)
    _write_series_csv(out_path, series)
    return EXIT_OK


def _parse_subspaces(doc: dict) -> tuple[int, list[Subspace]]:
    if "dim" not in doc or "elements" not in doc:
        raise ConfigError("subspace document needs 'dim' and 'elements'")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ConfigError(f"dim must be a positive integer, got {dim!r}")
    elements = doc["elements"]
    if not isinstance(elements, list):
        raise ConfigError("'elements' must be a list of subspaces")
    spaces = []
    for k, vectors in enumerate(elements):
        if not isinstance(vectors, list):
            raise ConfigError(f"element {k} must be a list of column vectors")
        cols = []
        for vec in vectors:
            if not isinstance(vec, list) or len(vec) != dim:
                raise ConfigError(
                    f"element {k}: each column vector needs {dim} [re, im] pairs")
            try:
                cols.append(np.array([complex(re, im) for re, im in vec]))
            except (TypeError, ValueError) as exc:
                raise ConfigError(
                    f"element {k}: entries must be [re, im] pairs: {exc}") from exc
        spaces.append(from_vectors(dim, cols))
    return dim, spaces


def _parse_state(doc: dict, dim: int) -> DensityState:
    if "matrix" not in doc:
        raise ConfigError("state document needs a 'matrix' of [re, im] pairs")
    rows = doc["matrix"]
    try:
        mat = np.array([[complex(re, im) for re, im in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"state matrix entries must be [re, im] pairs: {exc}") from exc
    if mat.shape != (dim, dim):
        raise ConfigError(f"state matrix must be {dim} x {dim}, got {mat.shape}")
    try:
        return DensityState(mat)
    except (ValueError, SidLatticeError) as exc:
        raise ConfigError(f"invalid density state: {exc}") from exc


def run_lattice(input_path: str, state_path: Optional[str], report_path: str,
                max_elements: int) -> int:
    doc = _load_json(input_path, "subspace document")
    dim, seeds = _parse_subspaces(doc)
    lat = generate_lattice(seeds, max_elements=max_elements, ambient_dim=dim)

    report: dict = {
        "dim": dim,
        "input_elements": len(seeds),
        "n_elements": len(lat),
        "closed": lat.closed,
    }
    if not lat.closed:
        report.update({"laws": None, "boolean": None, "compatibility_matrix": None,
                       "kolmogorov": None,
                       "error": f"closure exceeded max_elements={max_elements}"})
        _write_json(report_path, report)
        print(f"lattice closure exceeded {max_elements} elements; "
              "laws not certified", file=sys.stderr)
        return EXIT_LAWS

    laws = check_lattice_laws(lat)
    report["laws"] = laws
    report["boolean"] = is_boolean(lat)
    report["compatibility_matrix"] = compatibility_matrix(lat).tolist()
    if state_path is not None:
        state = _parse_state(_load_json(state_path, "state document"), dim)
        kol = kolmogorov_check(state, lat)
        report["kolmogorov"] = {
            "max_residual": kol.max_residual,
            "pairs_checked": kol.pairs_checked,
            "violations": [list(v) for v in kol.violations],
        }
    else:
        report["kolmogorov"] = None
    _write_json(report_path, report)
    if not laws["all_pass"]:
        failing = [k for k, v in laws.items()
                   if k != "all_pass" and not v["pass"]]
        print(f"lattice law suite failed: {failing}", file=sys.stderr)
        return EXIT_LAWS
    return EXIT_OK


def run_emerge(config_path: str, report_path: Optional[str],
               series_path: Optional[str]) -> int:
    scenario = load_scenario(config_path, need_partition=True)
    report_path = report_path or scenario.report_path
    series_path = series_path or scenario.series_path
    if not report_path or not series_path:
        raise ConfigError(
            "emerge needs --report/--series or output.report/output.series")
    partition = BinPartition.equal_bins(scenario.grid, scenario.n_bins)
    report = run_emergence(
        scenario.rho, scenario.o1, scenario.o2, partition,
        scenario.t_max, scenario.n_samples, scenario.epsilon,
        threshold_ratio=scenario.decoherence_ratio, sustain=scenario.sustain)
    _write_json(report_path, report.to_json_dict())
    _write_series_csv(series_path, report.series)
    if report.verdict is Verdict.DEGENERATE:
        print("degenerate premise: the observables already commute",
              file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def run_oracle(family: str, params_json: str, t_list: str) -> int:
    try:
        params = json.loads(params_json)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--params is not valid JSON: {exc}") from exc
    if not isinstance(params, dict):
        raise ConfigError("--params must be a JSON object")
    try:
        times = np.array([float(x) for x in t_list.split(",") if x.strip() != ""])
    except ValueError as exc:
        raise ConfigError(f"--t must be a comma-separated list of times: {exc}") from exc
    if times.size == 0:
        raise ConfigError("--t must name at least one time")

    if family == "gaussian_band":
        kind = "gaussian"
        if "sigma_c" in params:
            rate = float(params["sigma_c"])
        else:
            try:
                spec1 = KernelFamilySpec(family, sigma=float(params["sigma1"]),
                                         mu=0.0, Sigma=1.0)
                spec2 = KernelFamilySpec(family, sigma=float(params["sigma2"]),
                                         mu=0.0, Sigma=1.0)
            except (KeyError, ValueError) as exc:
                raise ConfigError(
                    "gaussian_band oracle needs sigma_c or sigma1+sigma2") from exc
            kind, rate = combined_decay_rate(spec1, spec2)
    elif family == "lorentz_band":
        kind = "lorentz"
        if "gamma_c" in params:
            rate = float(params["gamma_c"])
        else:
            try:
                spec1 = KernelFamilySpec(family, gamma=float(params["gamma1"]),
                                         mu=0.0, Sigma=1.0)
                spec2 = KernelFamilySpec(family, gamma=float(params["gamma2"]),
                                         mu=0.0, Sigma=1.0)
            except (KeyError, ValueError) as exc:
                raise ConfigError(
                    "lorentz_band oracle needs gamma_c or gamma1+gamma2") from exc
            kind, rate = combined_decay_rate(spec1, spec2)
    else:
        raise ConfigError(
            f"oracle family must be gaussian_band or lorentz_band, got {family!r}")
    if not (math.isfinite(rate) and rate > 0):
        raise ConfigError(f"decay rate must be positive, got {rate}")

    values = analytic_decay(kind, rate, times)
    print("t,re,im,abs")
    for t, v in zip(times, values):
        print(f"{_fmt(t)},{_fmt(v)},{_fmt(0.0)},{_fmt(abs(v))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sidlattice",
        description="Commutator decay of van Hove observables and Boolean "
                    "property-lattice diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="sample <D(t)> and write a CSV series")
    p_sim.add_argument("--config", required=True, help="scenario config JSON")
    p_sim.add_argument("--out", help="CSV output path (falls back to output.series)")

    p_lat = sub.add_parser("lattice", help="close a subspace set and check lattice laws")
    p_lat.add_argument("--in", dest="input", required=True, help="subspace JSON document")
    p_lat.add_argument("--state", help="optional density state JSON for Kolmogorov residuals")
    p_lat.add_argument("--report", required=True, help="JSON report path")
    p_lat.add_argument("--max-elements", type=int, default=256,
                       help="closure cap (default 256)")

    p_em = sub.add_parser("emerge", help="full emergence run: report JSON plus series CSV")
    p_em.add_argument("--config", required=True, help="scenario config JSON")
    p_em.add_argument("--report", help="report path (falls back to output.report)")
    p_em.add_argument("--series", help="series CSV path (falls back to output.series)")

    p_or = sub.add_parser("oracle", help="closed-form decay samples for test harnesses")
    p_or.add_argument("--family", required=True, help="gaussian_band or lorentz_band")
    p_or.add_argument("--params", required=True,
                      help='JSON, e.g. {"sigma_c": 1.0} or {"gamma1": ..., "gamma2": ...}')
    p_or.add_argument("--t", required=True, help="comma-separated times")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return run_simulate(args.config, args.out)
        if args.command == "lattice":
            return run_lattice(args.input, args.state, args.report, args.max_elements)
        if args.command == "emerge":
            return run_emerge(args.config, args.report, args.series)
        if args.command == "oracle":
            return run_oracle(args.family, args.params, args.t)
        raise ConfigError(f"unknown command {args.command!r}")
    except WindowExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except SidLatticeError as exc:
        # ConfigError and any other domain precondition failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
