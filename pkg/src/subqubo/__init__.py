"""Number partitioning on emulated annealing hardware.

QUBO construction with an exact delta-squared energy identity, a tabu-search
baseline, schedule-driven annealing emulators with pause support, Chimera
clique embedding with majority-vote decoding, a Qbsolv-style decomposition
loop, and a reproducible experiment harness.
"""

from ._kernels import USING_NUMBA
from .annealer import (AnnealParams, Schedule, linear_schedule,
                       make_pause_schedule, sa_solve, suggest_beta_range,
                       svmc_solve)
from .chimera import (ChimeraGraph, Embedding, broken_chain_fraction,
                      chimera_graph, clique_embedding, embed_ising, unembed,
                      validate_embedding)
from .errors import CapacityError, DegenerateFitError, ResourceLimitError
from .harness import (BoxplotStats, ExperimentConfig, FitResult,
                      boxplot_stats, fit_exponential, run_pause_sweep,
                      run_size_sweep)
from .hybrid import (HybridParams, RoundRecord, clamp, decompose_solve,
                     select_subproblem)
from .instances import (NppInstance, delta, generate_perfect, histogram,
                        optimal_delta)
from .model import (IsingModel, QuboMatrix, binary_to_spins,
                    brute_force_minimum, build_qubo, ising_energy,
                    ising_from_qubo, qubo_energy, qubo_from_ising,
                    spins_to_binary)
from .tabu import SolveResult, TabuParams, flip_gain, gain_vector, tabu_search

__version__ = "0.1.0"

__all__ = [
    "AnnealParams", "BoxplotStats", "CapacityError", "ChimeraGraph",
    "DegenerateFitError", "Embedding", "ExperimentConfig", "FitResult",
    "HybridParams", "IsingModel", "NppInstance", "QuboMatrix",
    "ResourceLimitError", "RoundRecord", "Schedule", "SolveResult",
    "TabuParams", "USING_NUMBA", "binary_to_spins", "boxplot_stats",
    "broken_chain_fraction", "brute_force_minimum", "build_qubo",
    "chimera_graph", "clamp", "clique_embedding", "decompose_solve", "delta",
    "embed_ising", "fit_exponential", "flip_gain", "gain_vector",
    "generate_perfect", "histogram", "ising_energy", "ising_from_qubo",
    "linear_schedule", "make_pause_schedule", "optimal_delta", "qubo_energy",
    "qubo_from_ising", "run_pause_sweep", "run_size_sweep", "sa_solve",
    "select_subproblem", "spins_to_binary", "suggest_beta_range",
    "svmc_solve", "tabu_search", "unembed", "validate_embedding",
]
