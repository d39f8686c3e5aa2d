"""Command-line entry points.

Subcommands: generate, solve, size-sweep, pause-sweep, fit, embed. Each
accepts a JSON config via --config; explicit flags override config values.
Exit codes: 0 success, 2 invalid config or arguments, 3 solver resource
limit.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import harness
from .annealer import Schedule
from .chimera import chimera_graph, clique_embedding, validate_embedding
from .errors import ResourceLimitError
from .hybrid import HybridParams, decompose_solve, write_round_trace
from .instances import (NppInstance, delta as partition_delta,
                        generate_perfect, optimal_delta)
from .model import build_qubo

_HYBRID_KEYS = ("subproblem_size", "backend", "max_rounds", "stall_rounds",
                "seed", "backend_params", "random_fraction", "target_energy")


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("config file must hold a JSON object")
    return obj


def _hybrid_params(cfg):
    unknown = set(cfg) - set(_HYBRID_KEYS)
    if unknown:
        raise ValueError(f"unknown solver keys: {sorted(unknown)}")
    return HybridParams(**cfg)


def _merge(config, args, key, default=None):
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    return config.get(key, default)


def _cmd_generate(args):
    config = _load_config(args.config)
    n = int(_merge(config, args, "n", 16))
    max_value = int(_merge(config, args, "max_value", 50))
    seed = int(_merge(config, args, "seed", 0))
    count = int(_merge(config, args, "count", 1))
    out_dir = _merge(config, args, "out_dir", ".")
    os.makedirs(out_dir, exist_ok=True)
    for i in range(count):
        child = np.random.SeedSequence(seed, spawn_key=(i,))
        inst_seed = int(child.generate_state(1, np.uint64)[0]) if count > 1 else seed
        instance = generate_perfect(n, max_value, inst_seed)
        path = os.path.join(out_dir, f"npp_n{n}_{i:03d}.json")
        instance.save(path)
        print(path)
    return 0


def _solver_from(config, args):
    solver_cfg = dict(config.get("solver", {}))
    for key in ("backend", "subproblem_size", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            solver_cfg[key] = value
    backend_params = dict(solver_cfg.get("backend_params", {}))
    if getattr(args, "schedule_file", None):
        backend_params["schedule"] = Schedule.load(args.schedule_file)
    if backend_params:
        solver_cfg["backend_params"] = backend_params
    return _hybrid_params(solver_cfg)


def _cmd_solve(args):
    config = _load_config(args.config)
    instance = NppInstance.load(args.instance)
    solver = _solver_from(config, args)
    qubo = build_qubo(instance)
    result, records = decompose_solve(qubo, solver)
    d = partition_delta(instance, result.assignment)
    row = {"instance": os.path.basename(args.instance), "n": instance.n,
           "backend": solver.backend, "seed": solver.seed, "delta": d,
           "energy": result.energy, "rounds": result.iterations_used,
           "wall_time": result.wall_time}
    if args.oracle:
        row["oracle_delta"] = optimal_delta(instance)
    harness.write_csv([row], args.out)
    if args.trace:
        write_round_trace(records, args.trace)
    print(f"delta={d} energy={result.energy} rounds={result.iterations_used}")
    print(args.out)
    return 0


_CONFIG_KEYS = ("sizes", "datasets_per_size", "max_value", "repetitions",
                "pause_durations", "saturation", "master_seed", "output_path")


def _experiment_config(config, args):
    cfg = dict(config)
    solver = _hybrid_params(dict(cfg.pop("solver", {})))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    unknown = set(cfg) - set(_CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return harness.ExperimentConfig(solver=solver, **cfg)


def _cmd_size_sweep(args):
    config = _load_config(args.config)
    econfig = _experiment_config(config, args)
    rows = harness.run_size_sweep(econfig)
    os.makedirs(econfig.output_path, exist_ok=True)
    rows_path = os.path.join(econfig.output_path, "size_sweep.csv")
    harness.write_csv(rows, rows_path,
                      columns=["size", "dataset_index", "seed", "delta",
                               "energy", "wall_time", "status"])
    summary = harness.summarize_sweep(rows, "size", econfig.saturation)
    summary_path = os.path.join(econfig.output_path, "size_sweep_summary.csv")
    harness.write_csv(summary, summary_path,
                      columns=["size", "count", "min", "q1", "median", "q3",
                               "max"])
    print(rows_path)
    print(summary_path)
    return 0


def _cmd_pause_sweep(args):
    config = _load_config(args.config)
    econfig = _experiment_config(config, args)
    instance = NppInstance.load(args.instance)
    rows = harness.run_pause_sweep(econfig, instance)
    os.makedirs(econfig.output_path, exist_ok=True)
    rows_path = os.path.join(econfig.output_path, "pause_sweep.csv")
    harness.write_csv(rows, rows_path,
                      columns=["duration", "repetition", "seed", "delta",
                               "energy", "wall_time", "arm"])
    summary = harness.summarize_sweep(rows, "duration", econfig.saturation)
    summary_path = os.path.join(econfig.output_path, "pause_sweep_summary.csv")
    harness.write_csv(summary, summary_path,
                      columns=["duration", "count", "min", "q1", "median",
                               "q3", "max"])
    print(rows_path)
    print(summary_path)
    return 0


def _cmd_fit(args):
    config = _load_config(args.config)
    source = _merge(config, args, "input")
    x_column = _merge(config, args, "x_column", "size")
    t_column = _merge(config, args, "t_column", "wall_time")
    out = _merge(config, args, "out", "fit.csv")
    if source is None:
        raise ValueError("fit needs --input or an 'input' config key")
    points = harness.read_points_csv(source, x_column, t_column)
    fit = harness.fit_exponential(points)
    harness.write_csv([{"A": fit.A, "B": fit.B, "points": len(points)}],
                      out, columns=["A", "B", "points"])
    residuals_out = _merge(config, args, "residuals_out")
    if residuals_out:
        rows = [{"x": x, "t": t, "log_residual": r}
                for (x, t), r in zip(points, fit.residuals)]
        harness.write_csv(rows, residuals_out,
                          columns=["x", "t", "log_residual"])
    print(f"A={fit.A} B={fit.B}")
    print(out)
    return 0


def _cmd_embed(args):
    config = _load_config(args.config)
    m = _merge(config, args, "m")
    if m is None:
        raise ValueError("embed needs --m or an 'm' config key")
    target = chimera_graph(int(m))
    validate = _merge(config, args, "validate")
    if validate:
        from .chimera import Embedding
        embedding = Embedding.load(validate)
        edges = [(i, j) for i in range(embedding.n_logical)
                 for j in range(i + 1, embedding.n_logical)]
        report = validate_embedding(embedding, edges, target)
        for line in report.violations:
            print(f"violation: {line}")
        print("ok" if report.ok else "invalid")
        return 0 if report.ok else 2
    n = _merge(config, args, "n")
    if n is None:
        raise ValueError("embed needs --n unless validating")
    out = _merge(config, args, "out", "embedding.json")
    embedding = clique_embedding(int(n), target)
    embedding.save(out)
    print(out)
    edges_csv = _merge(config, args, "edges_csv")
    if edges_csv:
        target.save_edges_csv(edges_csv)
        print(edges_csv)
    return 0


def _int_list(text):
    return [int(v) for v in text.split(",") if v != ""]


def _float_list(text):
    return [float(v) for v in text.split(",") if v != ""]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="subqubo",
        description="Number partitioning via QUBO decomposition.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit NPP instance files")
    p.add_argument("--config")
    p.add_argument("--n", type=int)
    p.add_argument("--max-value", type=int, dest="max_value")
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("instance")
    p.add_argument("--config")
    p.add_argument("--backend", choices=("tabu", "sa", "svmc", "embedded_sa"))
    p.add_argument("--subproblem-size", type=int, dest="subproblem_size")
    p.add_argument("--schedule-file", dest="schedule_file")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="solve.csv")
    p.add_argument("--trace", help="write per-round JSON lines here")
    p.add_argument("--oracle", action="store_true",
                   help="also report the exact optimal delta")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("size-sweep", help="delta statistics across sizes")
    p.add_argument("--config")
    p.add_argument("--sizes", type=_int_list)
    p.add_argument("--datasets-per-size", type=int, dest="datasets_per_size")
    p.add_argument("--max-value", type=int, dest="max_value")
    p.add_argument("--saturation", type=float)
    p.add_argument("--master-seed", type=int, dest="master_seed")
    p.add_argument("--out-dir", dest="output_path")
    p.set_defaults(func=_cmd_size_sweep)

    p = sub.add_parser("pause-sweep", help="pause-duration study on one instance")
    p.add_argument("instance")
    p.add_argument("--config")
    p.add_argument("--pause-durations", type=_float_list, dest="pause_durations")
    p.add_argument("--repetitions", type=int)
    p.add_argument("--saturation", type=float)
    p.add_argument("--master-seed", type=int, dest="master_seed")
    p.add_argument("--out-dir", dest="output_path")
    p.set_defaults(func=_cmd_pause_sweep)

    p = sub.add_parser("fit", help="exponential runtime fit from a CSV")
    p.add_argument("--config")
    p.add_argument("--input")
    p.add_argument("--x-column", dest="x_column")
    p.add_argument("--t-column", dest="t_column")
    p.add_argument("--out")
    p.add_argument("--residuals-out", dest="residuals_out")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("embed", help="emit or validate clique embeddings")
    p.add_argument("--config")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.add_argument("--edges-csv", dest="edges_csv")
    p.add_argument("--validate", help="validate this embedding file instead")
    p.set_defaults(func=_cmd_embed)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError, OSError,
            json.JSONDecodeError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
