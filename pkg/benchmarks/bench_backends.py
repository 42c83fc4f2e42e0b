"""Time the numba kernels against the pure-numpy fallbacks.

Runs the nu-profile reduction, the oscillatory series evaluation, the
phase application, and the Hermiticity residual on a desk-scale kernel,
printing one row per (operation, backend). Invoke as

    python3 benchmarks/bench_backends.py [n_points] [n_times]
"""

import sys
import time

import numpy as np

from sidlattice import _accel


def _time(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> int:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2048
    n_times = int(sys.argv[2]) if len(sys.argv) > 2 else 201

    rng = np.random.default_rng(1234)
    kernel = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    kernel = 0.5 * (kernel + kernel.conj().T)
    nu = 0.01 * np.arange(-(n - 1), n, dtype=np.float64)
    times = np.linspace(0.0, 5.0, n_times)
    phases = np.exp(1j * 0.37 * np.arange(n, dtype=np.float64))

    pairs = [
        ("nu_profile", _accel.nu_profile_numba, _accel._nu_profile_py, (kernel,)),
        ("phase_series", _accel.phase_series_numba, _accel._phase_series_py, None),
        ("apply_phase", _accel.apply_phase_numba, _accel._apply_phase_py, (kernel, phases)),
        ("hermitian_residual", _accel.hermitian_residual_numba,
         _accel._hermitian_residual_py, (kernel,)),
    ]

    profile = _accel._nu_profile_py(kernel)
    print(f"kernel {n}x{n}, {n_times} time samples, numba available: {_accel.HAVE_NUMBA}")
    print(f"{'operation':<20} {'backend':<8} {'best [ms]':>12}")
    for name, numba_fn, numpy_fn, args in pairs:
        if args is None:
            args = (profile, nu, times)
        if numba_fn is not None:
            numba_fn(*args)  # compile before timing
            t_nb, r_nb = _time(numba_fn, *args)
            print(f"{name:<20} {'numba':<8} {1e3 * t_nb:>12.3f}")
        else:
            r_nb = None
        t_np, r_np = _time(numpy_fn, *args)
        print(f"{name:<20} {'numpy':<8} {1e3 * t_np:>12.3f}")
        if r_nb is not None:
            gap = np.max(np.abs(np.asarray(r_nb) - np.asarray(r_np)))
            if gap > 1e-9 * max(1.0, float(np.max(np.abs(np.asarray(r_np))))):
                print(f"  WARNING: backends disagree by {gap:.3e}")
                return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
