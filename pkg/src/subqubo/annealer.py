"""Schedule-driven stochastic samplers emulating an annealing cycle.

A schedule is a piecewise-linear anneal fraction s(t) over microseconds,
optionally holding a pause plateau. Physical times map linearly onto Monte
Carlo sweeps (default 100 sweeps per microsecond), which preserves the
ratios of a pause protocol while running classically. Two backends share
the schedule semantics: temperature-ramped simulated annealing and a
spin-vector Monte Carlo walker with an explicit transverse term that fades
as s goes to 1.
"""

import json
import math
import time
from dataclasses import dataclass

import numpy as np

from .model import ising_energy
from .tabu import SolveResult


@dataclass(frozen=True)
class Schedule:
    """Piecewise-linear anneal fraction, from (0, 0) to (total_time, 1)."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple((float(t), float(s)) for t, s in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise ValueError("schedule needs at least two vertices")
        times = [t for t, _ in verts]
        svals = [s for _, s in verts]
        if verts[0] != (0.0, 0.0):
            raise ValueError("schedule must start at (0, 0)")
        if svals[-1] != 1.0:
            raise ValueError("schedule must end at s = 1")
        if any(t1 >= t2 for t1, t2 in zip(times, times[1:])):
            raise ValueError("vertex times must be strictly increasing")
        if any(s1 > s2 for s1, s2 in zip(svals, svals[1:])):
            raise ValueError("anneal fraction must be nondecreasing")

    @property
    def total_time(self):
        return self.vertices[-1][0]

    def s_at(self, t):
        """Interpolated anneal fraction; exact at vertices and on plateaus."""
        times = [v[0] for v in self.vertices]
        svals = [v[1] for v in self.vertices]
        return np.interp(t, times, svals)

    def pauses(self):
        """Consecutive vertex pairs holding s constant over a time interval."""
        return [(v1, v2) for v1, v2 in zip(self.vertices, self.vertices[1:])
                if v1[1] == v2[1]]

    def sweep_count(self, sweeps_per_microsecond):
        return int(round(self.total_time * sweeps_per_microsecond))

    def sweep_fractions(self, sweeps_per_microsecond):
        """s at each sweep, sweep k sampling the schedule at t = k / rate."""
        nsweeps = self.sweep_count(sweeps_per_microsecond)
        t = np.arange(nsweeps) / sweeps_per_microsecond
        return self.s_at(t)

    def to_json(self):
        return json.dumps([[t, s] for t, s in self.vertices])

    @classmethod
    def from_json(cls, text):
        pairs = json.loads(text)
        return cls(vertices=tuple((t, s) for t, s in pairs))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


def linear_schedule(anneal_time):
    return Schedule(vertices=((0.0, 0.0), (float(anneal_time), 1.0)))


def make_pause_schedule(anneal_time, pause_start, pause_duration):
    """Linear ramp interrupted by a plateau at s = pause_start / anneal_time.

    The pause extends the total time; the post-pause ramp resumes with the
    original slope. A zero-duration pause collapses to the plain ramp.
    """
    if not 0 < pause_start < anneal_time:
        raise ValueError("need 0 < pause_start < anneal_time")
    if pause_duration < 0:
        raise ValueError("pause_duration must be >= 0")
    if pause_duration == 0:
        return linear_schedule(anneal_time)
    s_p = pause_start / anneal_time
    return Schedule(vertices=(
        (0.0, 0.0),
        (float(pause_start), s_p),
        (float(pause_start + pause_duration), s_p),
        (float(anneal_time + pause_duration), 1.0),
    ))


@dataclass(frozen=True)
class AnnealParams:
    """Time-to-sweeps mapping, inverse-temperature ramp, seed, repetitions."""

    sweeps_per_microsecond: int = 100
    beta_start: float = 0.1
    beta_end: float = 5.0
    seed: int = 0
    reads: int = 1

    def __post_init__(self):
        if self.sweeps_per_microsecond < 1:
            raise ValueError("sweeps_per_microsecond must be >= 1")
        if not 0 < self.beta_start <= self.beta_end:
            raise ValueError("need beta_end >= beta_start > 0")
        if self.reads < 1:
            raise ValueError("reads must be >= 1")


def suggest_beta_range(model):
    """Problem-scaled inverse temperatures for the Metropolis backends.

    Hot end accepts the worst single-flip uphill move with probability 1/2;
    cold end suppresses the smallest coupling-scale move to about 1e-3.
    """
    j = model.coupler_matrix()
    dmax = 2.0 * float(np.max(np.abs(model.h) + np.abs(j).sum(axis=1)))
    nonzero = [abs(v) for v in model.couplers.values() if v != 0]
    nonzero += [abs(v) for v in model.h if v != 0]
    dmin = 2.0 * min(nonzero, default=1.0)
    if dmax <= 0:
        return 0.1, 5.0
    return math.log(2.0) / dmax, math.log(1000.0) / dmin


def _read_seed(seed, read_index):
    return np.random.SeedSequence(seed, spawn_key=(read_index,))


def _betas_for(schedule, params):
    svals = schedule.sweep_fractions(params.sweeps_per_microsecond)
    return svals, params.beta_start + svals * (params.beta_end - params.beta_start)


def sa_solve(model, schedule, params):
    """Simulated annealing under the schedule's temperature ramp.

    The inverse temperature at sweep k is beta_start + s(t_k) * (beta_end -
    beta_start). Returns the lowest-energy spin assignment seen across all
    sweeps and reads; deterministic per (model, schedule, params).
    """
    from . import _kernels

    t0 = time.perf_counter()
    n = model.n
    j = model.coupler_matrix()
    h = model.h.astype(np.float64)
    svals, betas = _betas_for(schedule, params)
    nsweeps = betas.shape[0]

    best_s = None
    best_e = math.inf
    read_energies = []
    for r in range(params.reads):
        rng = np.random.default_rng(_read_seed(params.seed, r))
        s = (rng.integers(0, 2, size=n) * 2 - 1).astype(np.float64)
        log_u = np.log(1.0 - rng.random((nsweeps, n)))
        local = h + j @ s
        e = float(h @ s + 0.5 * s @ (j @ s))
        rs, re = _kernels.sa_core(j, s, local, e, betas, log_u)
        read_energies.append(re + model.offset)
        if re < best_e:
            best_e = re
            best_s = rs
    assignment = best_s.astype(np.int64)
    energy = ising_energy(model, assignment)
    return SolveResult(assignment=assignment, energy=energy,
                       iterations_used=nsweeps * params.reads,
                       wall_time=time.perf_counter() - t0,
                       evaluations=nsweeps * n * params.reads,
                       metadata={"backend": "sa",
                                 "read_energies": read_energies})


def svmc_solve(model, schedule, params):
    """Spin-vector Monte Carlo with an explicit transverse-field term.

    Each spin is an angle in [0, pi]; the driving energy mixes a transverse
    part weighted 1-s with the problem part weighted s, and the Metropolis
    proposal width shrinks as s approaches 1. The returned assignment is the
    best projection sign(cos theta) by problem energy (zero projects to +1).
    """
    from . import _kernels

    t0 = time.perf_counter()
    n = model.n
    j = model.coupler_matrix()
    h = model.h.astype(np.float64)
    svals, betas = _betas_for(schedule, params)
    nsweeps = betas.shape[0]

    best_sigma = None
    best_e = math.inf
    read_energies = []
    for r in range(params.reads):
        rng = np.random.default_rng(_read_seed(params.seed, r))
        prop = rng.uniform(-1.0, 1.0, size=(nsweeps, n))
        log_u = np.log(1.0 - rng.random((nsweeps, n)))
        sigma = np.ones(n)
        cls_local = h + j @ sigma
        cls_e = float(h @ sigma + 0.5 * sigma @ (j @ sigma))
        rs, re = _kernels.svmc_core(j, h, svals, betas, prop, log_u, sigma,
                                    cls_local, cls_e)
        read_energies.append(re + model.offset)
        if re < best_e:
            best_e = re
            best_sigma = rs
    assignment = best_sigma.astype(np.int64)
    energy = ising_energy(model, assignment)
    return SolveResult(assignment=assignment, energy=energy,
                       iterations_used=nsweeps * params.reads,
                       wall_time=time.perf_counter() - t0,
                       evaluations=nsweeps * n * params.reads,
                       metadata={"backend": "svmc",
                                 "read_energies": read_energies})


def svmc_energy(model, theta, s):
    """Driving energy of an angle configuration at anneal fraction s.

    Exposed for direct inspection of the limits: at s=0 the minimum sits at
    theta = pi/2 everywhere; at s=1 it reduces to the classical Ising energy
    at the cos-theta extremes.
    """
    theta = np.asarray(theta, dtype=np.float64)
    ct = np.cos(theta)
    j = model.coupler_matrix()
    problem = float(model.h @ ct + 0.5 * ct @ (j @ ct))
    return -(1.0 - s) * float(np.sin(theta).sum()) + s * problem
