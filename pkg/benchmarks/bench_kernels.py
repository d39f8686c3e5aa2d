"""Timing comparison of the JIT kernels against the pure-numpy path.

Runs each hot kernel (tabu, SA, SVMC) on a representative workload through
the numba dispatcher and through the same source interpreted, and reports
wall times and speedups. The two paths consume identical pre-drawn randoms,
so they should also agree on the result; mismatches are flagged.

Usage: python benchmarks/bench_kernels.py [--repeats 3]
"""

import argparse
import time

import numpy as np

from subqubo import _kernels
from subqubo import build_qubo, generate_perfect, ising_from_qubo
from subqubo.annealer import make_pause_schedule
from subqubo.tabu import kick_plan, TabuParams


def time_call(fn, args_factory, repeats):
    best = np.inf
    result = None
    for _ in range(repeats):
        args = args_factory()
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def tabu_workload(n=256, iterations=4000):
    inst = generate_perfect(n, 1000, seed=1)
    qubo = build_qubo(inst)
    params = TabuParams(tenure=None, max_iterations=iterations,
                        stall_limit=iterations, seed=7)
    diag = np.diag(qubo.q).astype(np.float64)
    w = qubo.symmetric_offdiag().astype(np.float64)
    kick_period, n_kick, kick_u = kick_plan(params, n)
    tenure = max(10, n // 10)

    def factory():
        x = np.zeros(n)
        s = diag + w @ x
        return (diag, w, x, s, 0.0, tenure, iterations, iterations,
                0.0, False, kick_period, n_kick, kick_u)

    return factory, lambda out: float(out[1])


def sa_workload(n=128, reads_seed=9):
    inst = generate_perfect(n, 500, seed=2)
    model = ising_from_qubo(build_qubo(inst))
    j = model.coupler_matrix()
    h = model.h.astype(np.float64)
    sched = make_pause_schedule(20, 10, 40)
    svals = sched.sweep_fractions(100)
    betas = 1e-6 + svals * 1e-3
    rng = np.random.default_rng(reads_seed)
    s0 = (rng.integers(0, 2, size=n) * 2 - 1).astype(np.float64)
    log_u = np.log(1.0 - rng.random((svals.shape[0], n)))

    def factory():
        s = s0.copy()
        local = h + j @ s
        e = float(h @ s + 0.5 * s @ (j @ s))
        return (j, s, local, e, betas, log_u)

    return factory, lambda out: float(out[1])


def svmc_workload(n=64, reads_seed=11):
    inst = generate_perfect(n, 500, seed=3)
    model = ising_from_qubo(build_qubo(inst))
    j = model.coupler_matrix()
    h = model.h.astype(np.float64)
    sched = make_pause_schedule(20, 10, 40)
    svals = sched.sweep_fractions(100)
    betas = 1e-6 + svals * 1e-3
    rng = np.random.default_rng(reads_seed)
    prop = rng.uniform(-1.0, 1.0, size=(svals.shape[0], n))
    log_u = np.log(1.0 - rng.random((svals.shape[0], n)))

    def factory():
        sigma = np.ones(n)
        cls_local = h + j @ sigma
        cls_e = float(h @ sigma + 0.5 * sigma @ (j @ sigma))
        return (j, h, svals, betas, prop, log_u, sigma, cls_local, cls_e)

    return factory, lambda out: float(out[1])


KERNELS = [
    ("tabu", _kernels.tabu_core, _kernels.tabu_core_py, tabu_workload),
    ("sa", _kernels.sa_core, _kernels.sa_core_py, sa_workload),
    ("svmc", _kernels.svmc_core, _kernels.svmc_core_py, svmc_workload),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not _kernels.USING_NUMBA:
        print("numba is disabled or unavailable; both paths are interpreted.")

    print(f"{'kernel':<8} {'numba':>12} {'numpy':>12} {'speedup':>9}  agree")
    for name, fast, slow, workload in KERNELS:
        factory, energy_of = workload()
        fast(*factory())  # compile outside the timed runs
        t_fast, out_fast = time_call(fast, factory, args.repeats)
        t_slow, out_slow = time_call(slow, factory, args.repeats)
        agree = energy_of(out_fast) == energy_of(out_slow)
        print(f"{name:<8} {t_fast * 1e3:>10.2f}ms {t_slow * 1e3:>10.2f}ms "
              f"{t_slow / t_fast:>8.1f}x  {'yes' if agree else 'NO'}")


if __name__ == "__main__":
    main()
