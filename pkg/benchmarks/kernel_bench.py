"""Benchmark the compiled kernel core against the NumPy fallback.

Times the per-gate kernels (generic two-sparse, specialized diagonal, CZ)
on an n-qubit state and a full 5x4 depth-40 circuit, for every importable
backend.  Run from a checkout as:

    python benchmarks/kernel_bench.py [--n 22] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from xebkit import kernels
from xebkit.circuit import MATRIX, GateKind, LatticeSpec, generate_circuit
from xebkit.statevector import init_state, threads


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_state(n, seed=7):
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    amps /= np.linalg.norm(amps)
    return amps


def bench_kernels(backend, name, n, repeats, nt):
    amps = random_state(n)
    q = n // 2
    t = MATRIX[GateKind.T]
    h = MATRIX[GateKind.H]
    t_generic = best_of(
        repeats, lambda: backend.two_sparse(amps, q, t[0, 0], t[0, 1], t[1, 0], t[1, 1], nt)
    )
    t_diag = best_of(repeats, lambda: backend.diag_unit(amps, q, t[1, 1], nt))
    t_two = best_of(
        repeats, lambda: backend.two_sparse(amps, q, h[0, 0], h[0, 1], h[1, 0], h[1, 1], nt)
    )
    t_cz = best_of(repeats, lambda: backend.cz(amps, q - 1, q, nt))
    print(f"  [{name}] T via generic 2x2 : {t_generic * 1e3:8.3f} ms")
    print(f"  [{name}] T via diag kernel : {t_diag * 1e3:8.3f} ms  "
          f"(specialization speedup {t_generic / t_diag:4.2f}x)")
    print(f"  [{name}] H two-sparse      : {t_two * 1e3:8.3f} ms")
    print(f"  [{name}] CZ                : {t_cz * 1e3:8.3f} ms")
    return t_generic, t_diag


def bench_circuit(name, repeats):
    import os

    from xebkit.statevector import apply_circuit

    circuit = generate_circuit(LatticeSpec(5, 4), 40, 0)
    os.environ["XEB_BACKEND"] = name  # informational; backend already imported

    def run(fuse):
        state = init_state(circuit.n)
        apply_circuit(state, circuit, fuse=fuse)

    t_plain = best_of(repeats, lambda: run(False))
    t_fused = best_of(repeats, lambda: run(True))
    print(f"  [{name}] 5x4 depth-40      : {t_plain:8.3f} s  (fused: {t_fused:.3f} s)")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=22)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    nt = threads()
    print(f"state size n={args.n} ({(16 << args.n) / 2**20:.0f} MiB), threads={nt}")
    available = kernels.backends()
    results = {}
    for name, backend in available.items():
        results[name] = bench_kernels(backend, name, args.n, args.repeats, nt)
    if "compiled" in results and "pure" in results:
        ratio = results["pure"][0] / results["compiled"][0]
        print(f"compiled vs pure generic kernel: {ratio:.2f}x")
    print(f"active backend: {kernels.BACKEND}")
    bench_circuit(kernels.BACKEND, max(2, args.repeats // 2))


if __name__ == "__main__":
    main()
