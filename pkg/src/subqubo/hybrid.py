"""Decomposition loop: clamp, solve a subproblem, merge, iterate.

Each round ranks variables by flip-gain magnitude (with a random exploration
fraction), clamps the rest, solves the sub-QUBO with a pluggable backend and
accepts the merged assignment only if the composite energy does not
increase. Tiny tabu subproblems are solved exactly by enumeration, which
removes heuristic noise where enumeration is cheap anyway.
"""

import json
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from . import annealer, chimera
from .model import (QuboMatrix, as_binary_vector, brute_force_minimum,
                    ising_from_qubo, qubo_energy, spins_to_binary)
from .tabu import SolveResult, TabuParams, gain_vector, tabu_search

BACKENDS = ("tabu", "sa", "svmc", "embedded_sa")

# below this size a tabu subproblem is enumerated exactly instead
ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class HybridParams:
    """Configuration of the decomposition loop.

    backend_params is passed to the chosen backend: tabu accepts tenure /
    max_iterations / stall_limit; sa and svmc accept the AnnealParams fields
    plus either a Schedule under "schedule" or anneal_time / pause_start /
    pause_duration; embedded_sa additionally accepts m and chain_strength.
    target_energy stops the loop early (0 is the NPP lower bound, energy
    being a squared delta); pass None to disable.
    """

    subproblem_size: int = 16
    backend: str = "tabu"
    max_rounds: int = 50
    stall_rounds: int = 50
    seed: int = 0
    backend_params: dict = field(default_factory=dict)
    random_fraction: float = 0.1
    target_energy: float | None = 0.0

    def __post_init__(self):
        if self.subproblem_size < 1:
            raise ValueError("subproblem_size must be >= 1")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if not 0 < self.stall_rounds <= self.max_rounds:
            raise ValueError("need 0 < stall_rounds <= max_rounds")
        if not 0.0 <= self.random_fraction <= 1.0:
            raise ValueError("random_fraction must be in [0, 1]")


@dataclass
class RoundRecord:
    round_index: int
    selected_variables: list
    energy_before: float
    energy_after: float
    backend_time: float


def write_round_trace(records, path):
    """One RoundRecord per line as JSON."""
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(asdict(rec), sort_keys=True))
            fh.write("\n")


def round_seed(seed, round_index):
    """Backend seed of a given round, derived from the loop seed."""
    ss = np.random.SeedSequence(seed, spawn_key=(1, round_index))
    return int(ss.generate_state(1, np.uint64)[0])


def _init_rng(seed):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, 0)))


def _selection_rng(seed):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(2, 0)))


def select_subproblem(qubo, x, k, rng, random_fraction=0.1):
    """k variable indices: top flip-gain magnitudes plus a random fraction.

    Indices are ranked by descending |flip_gain|, ties to the lowest index;
    round(k * random_fraction) slots go to uniform-random unselected indices
    to preserve exploration. k == n selects everything in natural order.
    """
    n = qubo.n
    if k > n:
        raise ValueError(f"subproblem size {k} exceeds problem size {n}")
    if k == n:
        return list(range(n))
    gains = np.abs(gain_vector(qubo, x))
    order = np.argsort(-gains, kind="stable")
    n_random = int(round(k * random_fraction))
    n_top = k - n_random
    chosen = list(order[:n_top])
    if n_random > 0:
        rest = order[n_top:]
        picks = rng.choice(rest.shape[0], size=n_random, replace=False)
        chosen.extend(rest[np.sort(picks)])
    return [int(i) for i in chosen]


def clamp(qubo, x, free):
    """Sub-QUBO over the free variables with the rest fixed at x.

    The sub-energy of any sub-assignment equals the full energy of the
    composite assignment; clamped contributions fold into the linear terms
    and the offset.
    """
    n = qubo.n
    free = list(free)
    if len(set(free)) != len(free) or any(not 0 <= i < n for i in free):
        raise ValueError("free indices must be distinct and in range")
    x = as_binary_vector(x, n)
    clamped = np.setdiff1d(np.arange(n), np.array(free, dtype=np.int64))
    w = qubo.symmetric_offdiag()
    diag = np.diag(qubo.q)

    if len(free) == 0:
        return QuboMatrix(q=np.zeros((0, 0), dtype=qubo.q.dtype),
                          offset=qubo_energy(qubo, x))

    free_ix = np.array(free, dtype=np.int64)
    lin = diag[free_ix] + w[np.ix_(free_ix, clamped)] @ x[clamped]
    sub = np.triu(w[np.ix_(free_ix, free_ix)], k=1)
    np.fill_diagonal(sub, lin)

    xc = x[clamped]
    wcc = np.triu(w[np.ix_(clamped, clamped)], k=1)
    offset = qubo.offset + diag[clamped] @ xc + xc @ (wcc @ xc)
    offset = offset.item() if isinstance(offset, np.generic) else offset
    return QuboMatrix(q=sub, offset=offset)


def initial_assignment(qubo, params):
    """Random start improved by a short full-problem tabu run."""
    rng = _init_rng(params.seed)
    x0 = rng.integers(0, 2, size=qubo.n).astype(np.int64)
    budget = TabuParams(max_iterations=max(100, 10 * qubo.n),
                        stall_limit=max(50, 2 * qubo.n))
    result = tabu_search(qubo, budget, start=x0,
                         target_energy=params.target_energy)
    return result.assignment


def _default_schedule(backend_params):
    if "schedule" in backend_params:
        return backend_params["schedule"]
    anneal_time = backend_params.get("anneal_time", 20.0)
    pause_duration = backend_params.get("pause_duration", 0.0)
    if pause_duration > 0:
        return annealer.make_pause_schedule(
            anneal_time, backend_params.get("pause_start", anneal_time / 2),
            pause_duration)
    return annealer.linear_schedule(anneal_time)


def _anneal_params(backend_params, seed, model):
    if "beta_start" in backend_params or "beta_end" in backend_params:
        beta_start = backend_params.get("beta_start", 0.1)
        beta_end = backend_params.get("beta_end", 5.0)
    else:
        beta_start, beta_end = annealer.suggest_beta_range(model)
    return annealer.AnnealParams(
        sweeps_per_microsecond=backend_params.get("sweeps_per_microsecond", 100),
        beta_start=beta_start, beta_end=beta_end, seed=seed,
        reads=backend_params.get("reads", 1))


def solve_subproblem(sub, backend, backend_params, seed, start):
    """Dispatch one sub-QUBO to the configured backend."""
    bp = backend_params
    if backend == "tabu":
        if sub.n <= ENUMERATION_LIMIT:
            assignment, energy = brute_force_minimum(sub)
            return SolveResult(assignment=assignment, energy=energy,
                               iterations_used=0, wall_time=0.0,
                               evaluations=2 ** sub.n,
                               metadata={"backend": "enumeration"})
        params = TabuParams(tenure=bp.get("tenure"),
                            max_iterations=bp.get("max_iterations",
                                                  max(100, 20 * sub.n)),
                            stall_limit=bp.get("stall_limit",
                                               max(50, 4 * sub.n)),
                            seed=seed)
        return tabu_search(sub, params, start=start, target_energy=None)

    model = ising_from_qubo(sub)
    schedule = _default_schedule(bp)
    params = _anneal_params(bp, seed, model)
    if backend == "sa":
        result = annealer.sa_solve(model, schedule, params)
    elif backend == "svmc":
        result = annealer.svmc_solve(model, schedule, params)
    else:  # embedded_sa
        m = bp.get("m", (sub.n + 3) // 4)
        target = chimera.chimera_graph(m)
        embedding = chimera.clique_embedding(sub.n, target)
        strength = bp.get("chain_strength",
                          1.5 * max(model.max_abs_coefficient(), 1.0))
        physical = chimera.embed_ising(model, embedding, strength, target)
        phys_result = annealer.sa_solve(physical, schedule, params)
        logical = chimera.unembed(phys_result.assignment, embedding)
        result = SolveResult(
            assignment=logical,
            energy=0.0,
            iterations_used=phys_result.iterations_used,
            wall_time=phys_result.wall_time,
            evaluations=phys_result.evaluations,
            metadata={"backend": "embedded_sa",
                      "chain_strength": strength,
                      "broken_chain_fraction": chimera.broken_chain_fraction(
                          phys_result.assignment, embedding)})
    x = spins_to_binary(result.assignment)
    result.assignment = x
    result.energy = qubo_energy(sub, x)
    return result


def decompose_solve(qubo, params):
    """Iterated subproblem decomposition of a QUBO.

    Returns (SolveResult, [RoundRecord]). The composite energy is
    nonincreasing across rounds; the loop stops at max_rounds, after
    stall_rounds rounds without improvement, or when target_energy is
    reached. Deterministic per seed.
    """
    t0 = time.perf_counter()
    n = qubo.n
    x = initial_assignment(qubo, params)
    energy = qubo_energy(qubo, x)
    rng = _selection_rng(params.seed)

    records = []
    evaluations = 0
    stall = 0
    k = min(params.subproblem_size, n)
    done = params.target_energy is not None and energy <= params.target_energy
    rounds = 0
    while not done and rounds < params.max_rounds:
        selected = select_subproblem(qubo, x, k, rng,
                                     random_fraction=params.random_fraction)
        sub = clamp(qubo, x, selected)
        sub_start = x[selected]
        tb = time.perf_counter()
        sub_result = solve_subproblem(sub, params.backend,
                                      params.backend_params,
                                      round_seed(params.seed, rounds),
                                      sub_start)
        backend_time = time.perf_counter() - tb
        evaluations += sub_result.evaluations

        candidate = x.copy()
        candidate[selected] = sub_result.assignment
        cand_energy = qubo_energy(qubo, candidate)
        before = energy
        if cand_energy <= energy:
            x = candidate
            energy = cand_energy
        records.append(RoundRecord(
            round_index=rounds, selected_variables=selected,
            energy_before=before, energy_after=energy,
            backend_time=backend_time))
        stall = 0 if energy < before else stall + 1
        rounds += 1
        if params.target_energy is not None and energy <= params.target_energy:
            break
        if stall >= params.stall_rounds:
            break

    result = SolveResult(assignment=x, energy=energy, iterations_used=rounds,
                         wall_time=time.perf_counter() - t0,
                         evaluations=evaluations,
                         metadata={"backend": params.backend,
                                   "rounds": rounds})
    return result, records
