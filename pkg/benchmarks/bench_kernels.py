"""Compare the numba and numpy kernel paths.

Array kernels are timed side by side in this process.  The end-to-end
timing runs the imaginary-frequency total in two subprocesses, one with
MDCAVITY_DISABLE_NUMBA=1, since the flag is read at import time.

    python benchmarks/bench_kernels.py [--n 20000] [--repeat 20]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from mdcavity import _kernels as K

END_TO_END = (
    "import time; from mdcavity import CavityModel, eta_total_imaginary_freq, BACKEND;"
    "eta_total_imaginary_freq(CavityModel(omega_r=1.0));"
    "t=time.perf_counter(); v=eta_total_imaginary_freq(CavityModel(omega_r=2.0));"
    "print(BACKEND, time.perf_counter()-t, v)"
)


def bench_arrays(n: int, repeat: int) -> None:
    wr, ce, cm, k = 1.0, 0.25, 0.64, 1.7
    om = np.linspace(0.01, 6.0, n)
    om = om[np.abs(om - wr) > 1e-6]
    x = np.linspace(0.0, 25.0, n)
    ev = np.linspace(0.01, k - 0.01, n)  # evanescent zone only
    cases = [
        ("density", K._density_array_jit, K._density_array_np, (om, k, wr, ce, cm, 1, False)),
        ("density_theta", K._density_theta_array_jit, K._density_theta_array_np, (om, k, wr, ce, cm, 1, 1e-10)),
        ("imag_log", K._imag_log_array_jit, K._imag_log_array_np, (x, k, wr, ce, cm, 1, False)),
        ("evanescent_parts", K._evanescent_parts_array_jit, K._evanescent_parts_array_np, (ev, k, wr, ce, cm, 0)),
    ]
    print(f"{'kernel':<18}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}{'max |diff|':>14}")
    for name, fj, fn, args in cases:
        a, b = fj(*args), fn(*args)  # compiles the jit version
        diff = float(np.nanmax(np.abs(np.asarray(a) - np.asarray(b))))
        tj = min(timeit.repeat(lambda: fj(*args), number=1, repeat=repeat)) * 1e3
        tn = min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat)) * 1e3
        print(f"{name:<18}{tj:>12.3f}{tn:>12.3f}{tn / tj:>10.1f}{diff:>14.2e}")


def bench_end_to_end() -> None:
    print("\nimaginary-frequency total at W_r = 2 (after warm-up)")
    for flag in ("0", "1"):
        env = dict(os.environ, MDCAVITY_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        backend, secs, value = out.stdout.split()
        print(f"  {backend:<6} {float(secs):8.3f} s   eta = {value}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        sys.exit("numba is unavailable or disabled; nothing to compare")
    bench_arrays(args.n, args.repeat)
    bench_end_to_end()


if __name__ == "__main__":
    main()
