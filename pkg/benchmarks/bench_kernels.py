"""Compare the numba kernels with the pure-numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--grid 4096] [--repeat 20] [--specs 200]

The first table times each batch kernel directly from ``IMPLEMENTATIONS``.
The second runs the full Schwarz oracle in a subprocess per backend, since
the backend is fixed at import time by ``QUBIT_SCHWARZ_BACKEND``.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

import qubit_schwarz as qs
from qubit_schwarz import _kernels
from qubit_schwarz.search import oracle_grid

ORACLE_SNIPPET = """
import time, numpy as np, qubit_schwarz as qs
rng = np.random.default_rng(0)
plan = qs.SamplingPlan(grid_points={grid})
specs = []
for _ in range({specs}):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    specs.append(qs.build_general(0.25 * (a + a.conj().T), rng.normal(size=3)))
qs.check_schwarz_numeric(specs[0], plan)
start = time.perf_counter()
for s in specs:
    qs.check_schwarz_numeric(s, plan)
print((time.perf_counter() - start) / len(specs))
"""


def kernel_cases(grid):
    rng = np.random.default_rng(1)
    spec = qs.build_general(np.diag([1.0, 0.5, -0.2]), rng.normal(size=3))
    dual = _kernels.prepare_superop(spec.dual_superop())
    phi = _kernels.prepare_superop(qs.transposition_deformation(0.5).superop)
    g, c = (_kernels.prepare_real(a) for a in qs.lab_bloch_affine(spec))
    traceless = _kernels.traceless_from_params(oracle_grid(grid, "traceless"))
    full = _kernels.full_from_params(oracle_grid(grid, "full"))
    bloch = oracle_grid(grid, "bloch")
    return {
        "gen_defect_min_eig": (dual, traceless),
        "map_defect_min_eig": (phi, full),
        "bloch_quadratic": (g, c, bloch),
    }


def bench_kernels(grid, repeat):
    cases = kernel_cases(grid)
    backends = sorted(_kernels.IMPLEMENTATIONS)
    print(f"batch kernels, {grid} grid points, best of {repeat} (ms)")
    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, args in cases.items():
        times = {}
        for b in backends:
            fn = _kernels.IMPLEMENTATIONS[b][name]
            fn(*args)  # compile / warm caches
            times[b] = 1e3 * min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))
        speedup = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(f"{name:<22}" + "".join(f"{times[b]:>12.3f}" for b in backends) + f"{speedup:>10.1f}")


def bench_oracle(grid, specs):
    print(f"\nfull Schwarz oracle, {specs} random specs (ms per spec)")
    for backend in sorted(_kernels.IMPLEMENTATIONS):
        env = dict(os.environ, QUBIT_SCHWARZ_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", ORACLE_SNIPPET.format(grid=grid, specs=specs)],
                             env=env, capture_output=True, text=True, check=True)
        print(f"{backend:<8}{1e3 * float(out.stdout.strip()):>10.2f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=4096)
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--specs", type=int, default=200)
    args = parser.parse_args()
    bench_kernels(args.grid, args.repeat)
    bench_oracle(args.grid, args.specs)


if __name__ == "__main__":
    main()
