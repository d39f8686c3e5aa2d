import csv
import json
import subprocess
import sys

import pytest

from subqubo import NppInstance, generate_perfect
from subqubo.cli import main


def strip_wall_time(path):
    """CSV bytes with any wall_time column removed, for determinism checks."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return []
    header = rows[0]
    keep = [i for i, name in enumerate(header) if name != "wall_time"]
    return [[row[i] for i in keep] for row in rows]


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "inst.json"
    generate_perfect(10, 25, seed=4).save(path)
    return str(path)


class TestGenerate:
    def test_emits_instances(self, tmp_path):
        out = tmp_path / "out"
        code = main(["generate", "--n", "8", "--max-value", "20", "--seed",
                     "3", "--count", "2", "--out-dir", str(out)])
        assert code == 0
        files = sorted(out.glob("*.json"))
        assert len(files) == 2
        inst = NppInstance.load(files[0])
        assert inst.n == 8

    def test_deterministic_bytes(self, tmp_path):
        args = ["generate", "--n", "8", "--seed", "3", "--count", "2",
                "--out-dir"]
        main(args + [str(tmp_path / "a")])
        main(args + [str(tmp_path / "b")])
        for name in ("npp_n8_000.json", "npp_n8_001.json"):
            assert (tmp_path / "a" / name).read_bytes() == \
                (tmp_path / "b" / name).read_bytes()


class TestSolve:
    def test_solves_and_reports(self, tmp_path, instance_file):
        out = tmp_path / "solve.csv"
        code = main(["solve", instance_file, "--backend", "tabu", "--seed",
                     "5", "--out", str(out), "--oracle"])
        assert code == 0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 1
        assert rows[0]["delta"] == rows[0]["oracle_delta"] == "0"

    def test_rerun_identical(self, tmp_path, instance_file):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            main(["solve", instance_file, "--seed", "5", "--out", str(out)])
        assert strip_wall_time(a) == strip_wall_time(b)

    def test_schedule_file_and_backend(self, tmp_path, instance_file):
        sched = tmp_path / "sched.json"
        sched.write_text("[[0, 0], [10, 0.5], [50, 0.5], [60, 1]]")
        out = tmp_path / "solve.csv"
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"solver": {"backend_params": {
            "sweeps_per_microsecond": 10}}}))
        code = main(["solve", instance_file, "--backend", "sa",
                     "--schedule-file", str(sched), "--seed", "2",
                     "--config", str(cfg), "--out", str(out)])
        assert code == 0

    def test_oracle_cap_exit_code(self, tmp_path):
        path = tmp_path / "big.json"
        NppInstance(values=(6_000_000, 6_000_001, 1), seed=0,
                    size_class=3).save(path)
        code = main(["solve", str(path), "--oracle", "--out",
                     str(tmp_path / "o.csv")])
        assert code == 3

    def test_invalid_config_exit_code(self, tmp_path, instance_file):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"solver": {"not_a_key": 1}}')
        assert main(["solve", instance_file, "--config", str(cfg)]) == 2
        cfg.write_text("{nope")
        assert main(["solve", instance_file, "--config", str(cfg)]) == 2


class TestSweeps:
    def run_size(self, tmp_path, name):
        out = tmp_path / name
        code = main(["size-sweep", "--sizes", "4,8", "--datasets-per-size",
                     "2", "--max-value", "15", "--master-seed", "6",
                     "--out-dir", str(out)])
        assert code == 0
        return out

    def test_size_sweep_outputs(self, tmp_path):
        out = self.run_size(tmp_path, "sweep")
        rows = strip_wall_time(out / "size_sweep.csv")
        assert len(rows) == 5  # header + 2 sizes x 2 datasets
        summary = (out / "size_sweep_summary.csv").read_text().splitlines()
        assert summary[0] == "size,count,min,q1,median,q3,max"

    def test_size_sweep_deterministic(self, tmp_path):
        a = self.run_size(tmp_path, "a")
        b = self.run_size(tmp_path, "b")
        assert strip_wall_time(a / "size_sweep.csv") == \
            strip_wall_time(b / "size_sweep.csv")
        assert (a / "size_sweep_summary.csv").read_bytes() == \
            (b / "size_sweep_summary.csv").read_bytes()

    def test_pause_sweep_outputs(self, tmp_path, instance_file):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"solver": {
            "backend": "sa",
            "backend_params": {"sweeps_per_microsecond": 10}}}))
        out = tmp_path / "ps"
        code = main(["pause-sweep", instance_file, "--config", str(cfg),
                     "--pause-durations", "10,40", "--repetitions", "2",
                     "--master-seed", "4", "--out-dir", str(out)])
        assert code == 0
        rows = strip_wall_time(out / "pause_sweep.csv")
        assert len(rows) == 7  # header + (2 durations + control) x 2 reps

    def test_pause_sweep_deterministic(self, tmp_path, instance_file):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"solver": {
            "backend": "svmc",
            "backend_params": {"sweeps_per_microsecond": 10}}}))
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            main(["pause-sweep", instance_file, "--config", str(cfg),
                  "--pause-durations", "10", "--repetitions", "2",
                  "--master-seed", "4", "--out-dir", str(out)])
            outs.append(strip_wall_time(out / "pause_sweep.csv"))
        assert outs[0] == outs[1]


class TestFit:
    def test_fit_from_csv(self, tmp_path):
        rows = tmp_path / "rows.csv"
        with open(rows, "w") as fh:
            fh.write("size,wall_time\n")
            for x in (100, 200, 300, 400):
                fh.write(f"{x},{2.0 * 2.718281828459045 ** (x / 340.0)}\n")
        out = tmp_path / "fit.csv"
        code = main(["fit", "--input", str(rows), "--out", str(out),
                     "--residuals-out", str(tmp_path / "res.csv")])
        assert code == 0
        with open(out, newline="") as fh:
            row = next(csv.DictReader(fh))
        assert abs(float(row["A"]) - 2.0) < 0.02
        assert abs(float(row["B"]) - 340.0) < 3.4

    def test_fit_rerun_identical(self, tmp_path):
        rows = tmp_path / "rows.csv"
        with open(rows, "w") as fh:
            fh.write("size,wall_time\n")
            for x in (10, 20, 30):
                fh.write(f"{x},{x * 1.5}\n")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["fit", "--input", str(rows), "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_degenerate_fit_exit_code(self, tmp_path):
        rows = tmp_path / "rows.csv"
        rows.write_text("size,wall_time\n1,5\n2,5\n3,5\n")
        assert main(["fit", "--input", str(rows),
                     "--out", str(tmp_path / "f.csv")]) == 2


class TestEmbed:
    def test_emit_and_validate(self, tmp_path):
        emb = tmp_path / "emb.json"
        edges = tmp_path / "edges.csv"
        code = main(["embed", "--m", "2", "--n", "8", "--out", str(emb),
                     "--edges-csv", str(edges)])
        assert code == 0
        assert main(["embed", "--m", "2", "--validate", str(emb)]) == 0
        assert edges.read_text().splitlines()[0] == "u,v"

    def test_validate_detects_tampering(self, tmp_path):
        emb = tmp_path / "emb.json"
        main(["embed", "--m", "2", "--n", "8", "--out", str(emb)])
        obj = json.loads(emb.read_text())
        obj["chains"][0] = obj["chains"][1]  # duplicate chain
        emb.write_text(json.dumps(obj))
        assert main(["embed", "--m", "2", "--validate", str(emb)]) == 2

    def test_capacity_error_exit_code(self, tmp_path):
        assert main(["embed", "--m", "1", "--n", "5",
                     "--out", str(tmp_path / "e.json")]) == 2

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            main(["embed", "--m", "3", "--n", "12", "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()


class TestModuleEntry:
    def test_python_dash_m(self, tmp_path):
        out = tmp_path / "out"
        proc = subprocess.run(
            [sys.executable, "-m", "subqubo.cli", "generate", "--n", "6",
             "--seed", "1", "--out-dir", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert (out / "npp_n6_000.json").exists()
