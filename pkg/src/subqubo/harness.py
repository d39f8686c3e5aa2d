"""Desk-scale reproduction of the experimental protocol.

Three experiments: a size sweep (batches of perfect instances per size,
deltas summarized as saturated boxplot statistics), a pause-duration sweep
over a fixed instance (annealer backends under schedules built by
make_pause_schedule(20, 10, d), plus a zero-duration control arm), and a
runtime-scaling fit t = A * exp(x / B) in log space. Every cell derives its
seed from the master seed and its coordinates, so tables reproduce under
any execution order. Output is CSV only; plotting stays external.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import annealer
from .errors import DegenerateFitError, ResourceLimitError
from .hybrid import HybridParams, decompose_solve
from .instances import delta as partition_delta
from .instances import generate_perfect
from .model import build_qubo, ising_from_qubo, spins_to_binary

DEFAULT_SIZES = (8, 16, 32, 64, 128, 256)
DEFAULT_PAUSE_DURATIONS = (10.0, 40.0, 60.0, 100.0, 120.0)

PAUSE_ANNEAL_TIME = 20.0
PAUSE_START = 10.0


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: tuple = DEFAULT_SIZES
    datasets_per_size: int = 10
    max_value: int = 50
    solver: HybridParams = field(default_factory=HybridParams)
    repetitions: int = 5
    pause_durations: tuple = DEFAULT_PAUSE_DURATIONS
    saturation: float = 50.0
    master_seed: int = 0
    output_path: str = "."

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "pause_durations",
                           tuple(float(d) for d in self.pause_durations))
        if len(self.sizes) == 0:
            raise ValueError("sizes must be nonempty")
        if self.datasets_per_size < 1:
            raise ValueError("datasets_per_size must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


@dataclass
class FitResult:
    """Parameters of t = A * exp(x / B) with residuals in log space."""

    A: float
    B: float
    residuals: list


def cell_seed(master_seed, *coords):
    """Stable 64-bit seed for one sweep cell."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(c) for c in coords))
    return int(ss.generate_state(1, np.uint64)[0])


def _replace_seed(params, seed):
    return HybridParams(
        subproblem_size=params.subproblem_size, backend=params.backend,
        max_rounds=params.max_rounds, stall_rounds=params.stall_rounds,
        seed=seed, backend_params=params.backend_params,
        random_fraction=params.random_fraction,
        target_energy=params.target_energy)


def run_size_sweep(config):
    """Solve datasets_per_size perfect instances per size.

    Returns one row per (size, dataset) with the reached delta, energy and
    wall time. Solver resource errors mark the row failed instead of
    aborting the sweep.
    """
    rows = []
    for size in config.sizes:
        for idx in range(config.datasets_per_size):
            seed = cell_seed(config.master_seed, 0, size, idx)
            instance = generate_perfect(size, config.max_value, seed)
            row = {"size": size, "dataset_index": idx, "seed": seed,
                   "delta": "", "energy": "", "wall_time": "", "status": "ok"}
            try:
                qubo = build_qubo(instance)
                solver = _replace_seed(config.solver,
                                       cell_seed(config.master_seed, 1, size, idx))
                result, _ = decompose_solve(qubo, solver)
                row["delta"] = partition_delta(instance, result.assignment)
                row["energy"] = result.energy
                row["wall_time"] = result.wall_time
            except ResourceLimitError as exc:
                row["status"] = f"resource-error: {exc}"
            rows.append(row)
    return rows


def run_pause_sweep(config, instance):
    """Anneal the instance once per (pause duration, repetition) cell.

    The protocol: pause after 10 us of a 20 us ramp, so the plateau sits at
    s = 0.5, for each configured duration; a zero-duration control arm is
    always included (it coincides with an explicitly configured duration 0).
    The solver backend must be sa or svmc.
    """
    if len(config.pause_durations) == 0:
        raise ValueError("pause_durations must be nonempty")
    backend = config.solver.backend
    if backend not in ("sa", "svmc"):
        raise ValueError("pause sweep requires the sa or svmc backend")
    qubo = build_qubo(instance)
    model = ising_from_qubo(qubo)
    bp = config.solver.backend_params
    solve = annealer.sa_solve if backend == "sa" else annealer.svmc_solve

    if "beta_start" in bp or "beta_end" in bp:
        beta_start = bp.get("beta_start", 0.1)
        beta_end = bp.get("beta_end", 5.0)
    else:
        beta_start, beta_end = annealer.suggest_beta_range(model)

    rows = []
    durations = (0.0,) + tuple(d for d in config.pause_durations if d != 0)
    for d_idx, duration in enumerate(durations):
        if duration > 0:
            schedule = annealer.make_pause_schedule(PAUSE_ANNEAL_TIME,
                                                    PAUSE_START, duration)
        else:
            schedule = annealer.linear_schedule(PAUSE_ANNEAL_TIME)
        for rep in range(config.repetitions):
            seed = cell_seed(config.master_seed, 2, d_idx, rep)
            params = annealer.AnnealParams(
                sweeps_per_microsecond=bp.get("sweeps_per_microsecond", 100),
                beta_start=beta_start, beta_end=beta_end,
                seed=seed, reads=bp.get("reads", 1))
            result = solve(model, schedule, params)
            x = spins_to_binary(result.assignment)
            rows.append({"duration": duration, "repetition": rep,
                         "seed": seed,
                         "delta": partition_delta(instance, x),
                         "energy": result.energy,
                         "wall_time": result.wall_time,
                         "arm": "control" if duration == 0 else "pause"})
    return rows


def fit_exponential(points):
    """Least-squares fit of t = A * exp(x / B) via regression on ln t."""
    points = list(points)
    if len(points) < 3:
        raise ValueError("need at least 3 points to fit")
    x = np.array([float(p[0]) for p in points])
    t = np.array([float(p[1]) for p in points])
    if np.any(t <= 0):
        raise ValueError("all t values must be positive")
    logt = np.log(t)
    slope, intercept = np.polyfit(x, logt, 1)
    # flat data: the fitted variation across the x range is below float noise
    if not math.isfinite(slope) or abs(slope) * np.ptp(x) < 1e-12:
        raise DegenerateFitError("zero slope in log space; B would be infinite")
    a = float(np.exp(intercept))
    b = float(1.0 / slope)
    residuals = list(logt - (intercept + slope * x))
    return FitResult(A=a, B=b, residuals=residuals)


@dataclass
class BoxplotStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    saturated_values: list
    raw_values: list


def boxplot_stats(deltas, saturation):
    """Five-number summary after capping values at the saturation level.

    Values above the cap read as "bad solution"; quantiles use linear
    interpolation. The raw values ride along unmodified.
    """
    raw = [float(d) for d in deltas]
    if len(raw) == 0:
        raise ValueError("deltas must be nonempty")
    sat = [min(v, float(saturation)) for v in raw]
    arr = np.array(sat)
    q1, med, q3 = np.percentile(arr, [25, 50, 75])
    return BoxplotStats(min=float(arr.min()), q1=float(q1), median=float(med),
                        q3=float(q3), max=float(arr.max()),
                        saturated_values=sat, raw_values=raw)


def summarize_sweep(rows, key, saturation):
    """Boxplot statistics of the deltas grouped by the given row key."""
    groups = {}
    for row in rows:
        if row.get("status", "ok") != "ok" or row["delta"] == "":
            continue
        groups.setdefault(row[key], []).append(row["delta"])
    out = []
    for value in sorted(groups):
        stats = boxplot_stats(groups[value], saturation)
        out.append({key: value, "count": len(groups[value]),
                    "min": stats.min, "q1": stats.q1, "median": stats.median,
                    "q3": stats.q3, "max": stats.max})
    return out


def write_csv(rows, path, columns=None):
    """Rows of dicts to CSV with a header; column order is fixed."""
    if columns is None:
        columns = list(rows[0]) if rows else []
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)


def read_points_csv(path, x_column, t_column):
    """(x, t) pairs from a CSV file, grouped by x taking the median t."""
    groups = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row.get(x_column, "") == "" or row.get(t_column, "") == "":
                continue
            groups.setdefault(float(row[x_column]), []).append(float(row[t_column]))
    return [(x, float(np.median(ts))) for x, ts in sorted(groups.items())]
