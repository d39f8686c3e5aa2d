"""One-flip tabu search over QUBO problems.

Serves both as the classical full-problem baseline and as the subproblem
engine of the decomposition loop. The search is deterministic in
(problem, params, start): ties break to the lowest variable index and the
default start is the all-zeros assignment.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .model import as_binary_vector, qubo_energy


def default_tenure(n):
    """Common tabu practice: a tenth of the problem, at least 10."""
    return max(10, n // 10)


@dataclass(frozen=True)
class TabuParams:
    """Knobs of a tabu run. tenure=None derives max(10, n // 10) at solve time."""

    tenure: int | None = None
    max_iterations: int = 1000
    stall_limit: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1 or self.stall_limit < 1:
            raise ValueError("max_iterations and stall_limit must be positive")
        if self.tenure is not None:
            if self.tenure < 1:
                raise ValueError("tenure must be positive")
            if self.tenure >= self.max_iterations:
                raise ValueError("tenure must be < max_iterations")


@dataclass
class SolveResult:
    """Outcome of a solver run; energy always includes the problem offset."""

    assignment: np.ndarray
    energy: float
    iterations_used: int
    wall_time: float
    evaluations: int
    metadata: dict = field(default_factory=dict)


def flip_gain(qubo, x, i):
    """Energy change from flipping bit i, in O(n) without a full re-evaluation."""
    x = as_binary_vector(x, qubo.n)
    if not 0 <= i < qubo.n:
        raise ValueError(f"index {i} out of range for n={qubo.n}")
    q = qubo.q
    s = q[i, i] + q[i, i + 1:] @ x[i + 1:] + q[:i, i] @ x[:i]
    g = (1 - 2 * x[i]) * s
    return g.item() if isinstance(g, np.generic) else g


def gain_vector(qubo, x):
    """flip_gain for every index at once."""
    x = as_binary_vector(x, qubo.n)
    s = np.diag(qubo.q) + qubo.symmetric_offdiag() @ x
    return (1 - 2 * x) * s


def kick_plan(params, n):
    """Pre-drawn uniforms driving the diversification kicks.

    After kick_period non-improving moves the search flips the n_kick
    variables ranking lowest in the next row; rows derive from params.seed
    so a run is a pure function of (problem, params, start).
    """
    kick_period = max(2 * default_tenure(n) + 4, n)
    n_kick = max(1, n // 5)
    rows = params.max_iterations // kick_period + 2
    rng = np.random.default_rng(np.random.SeedSequence(params.seed,
                                                       spawn_key=(3,)))
    return kick_period, n_kick, rng.random((rows, n))


def tabu_search(qubo, params, start=None, target_energy=None):
    """Best assignment found by one-flip tabu search.

    A flipped variable stays tabu for `tenure` iterations unless flipping it
    would improve the best-known energy (aspiration); periodic seeded kicks
    (see kick_plan) break limit cycles. Stops at max_iterations, after
    stall_limit non-improving moves, or as soon as the best energy reaches
    target_energy (pass 0 for NPP problems, whose energy is a squared delta).
    """
    t0 = time.perf_counter()
    n = qubo.n
    if start is None:
        x0 = np.zeros(n, dtype=np.int64)
    else:
        x0 = as_binary_vector(start, n)
    tenure = params.tenure if params.tenure is not None else default_tenure(n)
    tenure = max(1, min(tenure, params.max_iterations - 1))

    diag = np.diag(qubo.q).astype(np.float64)
    w = qubo.symmetric_offdiag().astype(np.float64)
    xf = x0.astype(np.float64)
    s = diag + w @ xf
    e0 = float(xf @ (np.triu(w, k=1) @ xf) + diag @ xf)

    has_target = target_energy is not None
    target = float(target_energy) - float(qubo.offset) if has_target else 0.0
    kick_period, n_kick, kick_u = kick_plan(params, n)
    best_x, _, iterations, evaluations = _kernels.tabu_core(
        diag, w, xf, s, e0, tenure, params.max_iterations, params.stall_limit,
        target, has_target, kick_period, n_kick, kick_u)

    assignment = best_x.astype(np.int64)
    energy = qubo_energy(qubo, assignment)
    return SolveResult(assignment=assignment, energy=energy,
                       iterations_used=int(iterations),
                       wall_time=time.perf_counter() - t0,
                       evaluations=int(evaluations),
                       metadata={"backend": "tabu"})
