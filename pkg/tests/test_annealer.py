import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subqubo import (AnnealParams, IsingModel, NppInstance, Schedule,
                     build_qubo, generate_perfect, ising_energy,
                     ising_from_qubo, linear_schedule, make_pause_schedule,
                     sa_solve, suggest_beta_range, svmc_solve)
from subqubo.annealer import svmc_energy


class TestSchedule:
    def test_validation(self):
        with pytest.raises(ValueError):
            Schedule(vertices=((0.0, 0.0),))
        with pytest.raises(ValueError):
            Schedule(vertices=((0.0, 0.1), (20.0, 1.0)))
        with pytest.raises(ValueError):
            Schedule(vertices=((0.0, 0.0), (20.0, 0.9)))
        with pytest.raises(ValueError):
            Schedule(vertices=((0.0, 0.0), (10.0, 0.6), (10.0, 0.6), (20.0, 1.0)))
        with pytest.raises(ValueError):
            Schedule(vertices=((0.0, 0.0), (10.0, 0.6), (15.0, 0.5), (20.0, 1.0)))

    def test_interpolation_hits_vertices(self):
        sched = make_pause_schedule(20, 10, 40)
        for t, s in sched.vertices:
            assert sched.s_at(t) == s

    def test_pause_is_flat(self):
        sched = make_pause_schedule(20, 10, 40)
        for t in np.linspace(10, 50, 23):
            assert sched.s_at(t) == 0.5

    def test_pauses_listed(self):
        sched = make_pause_schedule(20, 10, 40)
        assert sched.pauses() == [((10.0, 0.5), (50.0, 0.5))]
        assert linear_schedule(20).pauses() == []

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(st.floats(min_value=0.0, max_value=140.0))
    def test_interpolant_nondecreasing(self, t):
        sched = make_pause_schedule(20, 10, 120)
        assert 0.0 <= sched.s_at(t) <= 1.0
        assert sched.s_at(t) <= sched.s_at(min(t + 1.0, 140.0))

    def test_json_round_trip(self, tmp_path):
        sched = make_pause_schedule(20, 10, 60)
        path = tmp_path / "sched.json"
        sched.save(path)
        assert Schedule.load(path) == sched

    def test_json_validates(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[[0, 0], [10, 0.9], [20, 0.5]]")
        with pytest.raises(ValueError):
            Schedule.load(path)


class TestMakePauseSchedule:
    def test_paper_protocol_vertices(self):
        sched = make_pause_schedule(20, 10, 40)
        assert sched.vertices == ((0.0, 0.0), (10.0, 0.5), (50.0, 0.5),
                                  (60.0, 1.0))

    def test_zero_duration_collapses(self):
        assert make_pause_schedule(20, 10, 0).vertices == ((0.0, 0.0),
                                                           (20.0, 1.0))

    def test_longest_paper_duration(self):
        sched = make_pause_schedule(20, 10, 120)
        assert sched.total_time == 140.0
        assert sched.s_at(70.0) == 0.5

    def test_preconditions(self):
        with pytest.raises(ValueError):
            make_pause_schedule(20, 0, 10)
        with pytest.raises(ValueError):
            make_pause_schedule(20, 20, 10)
        with pytest.raises(ValueError):
            make_pause_schedule(20, 10, -1)


class TestSweepMapping:
    @pytest.mark.parametrize("rate", [100, 7])
    @pytest.mark.parametrize("duration", [10, 40, 60, 100, 120])
    def test_pause_adds_exact_sweeps(self, rate, duration):
        paused = make_pause_schedule(20, 10, duration)
        control = linear_schedule(20)
        assert paused.sweep_count(rate) == round((20 + duration) * rate)
        assert control.sweep_count(rate) == round(20 * rate)
        s_p = 0.5
        flat = int(np.sum(paused.sweep_fractions(rate) == s_p))
        flat_control = int(np.sum(control.sweep_fractions(rate) == s_p))
        assert flat - flat_control == round(duration * rate)


class TestAnnealParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            AnnealParams(beta_start=0.0)
        with pytest.raises(ValueError):
            AnnealParams(beta_start=2.0, beta_end=1.0)
        with pytest.raises(ValueError):
            AnnealParams(reads=0)
        with pytest.raises(ValueError):
            AnnealParams(sweeps_per_microsecond=0)

    def test_suggest_beta_range_orders(self):
        q = build_qubo(generate_perfect(16, 40, seed=3))
        lo, hi = suggest_beta_range(ising_from_qubo(q))
        assert 0 < lo < hi


def pair_model():
    return ising_from_qubo(build_qubo(NppInstance(values=(1, 2), seed=0,
                                                  size_class=2)))


class TestSaSolve:
    def test_flat_model(self):
        m = IsingModel(h=np.zeros(4), couplers={}, offset=7.0)
        r = sa_solve(m, linear_schedule(2),
                     AnnealParams(sweeps_per_microsecond=10, seed=1))
        assert r.energy == 7.0

    def test_pair_reaches_optimum(self):
        r = sa_solve(pair_model(), linear_schedule(20),
                     AnnealParams(seed=2, reads=10))
        assert r.energy == 1.0

    def test_energy_matches_assignment(self):
        m = ising_from_qubo(build_qubo(generate_perfect(16, 30, seed=5)))
        r = sa_solve(m, make_pause_schedule(20, 10, 40),
                     AnnealParams(seed=4, reads=3))
        assert r.energy == ising_energy(m, r.assignment)
        assert r.energy >= 0

    def test_deterministic(self):
        m = ising_from_qubo(build_qubo(generate_perfect(12, 30, seed=6)))
        params = AnnealParams(seed=9, reads=5)
        r1 = sa_solve(m, linear_schedule(20), params)
        r2 = sa_solve(m, linear_schedule(20), params)
        assert np.array_equal(r1.assignment, r2.assignment)
        assert r1.energy == r2.energy
        assert r1.metadata["read_energies"] == r2.metadata["read_energies"]

    def test_sweep_accounting(self):
        m = pair_model()
        params = AnnealParams(sweeps_per_microsecond=50, seed=0, reads=2)
        sched = make_pause_schedule(20, 10, 40)
        r = sa_solve(m, sched, params)
        assert r.iterations_used == round(60 * 50) * 2
        assert r.evaluations == round(60 * 50) * 2 * m.n

    def test_best_of_reads_beats_median(self):
        """Sanity: the returned best can never exceed the per-read median."""
        inst = generate_perfect(24, 40, seed=11)
        m = ising_from_qubo(build_qubo(inst))
        lo, hi = suggest_beta_range(m)
        r = sa_solve(m, linear_schedule(20),
                     AnnealParams(seed=13, reads=50, beta_start=lo,
                                  beta_end=hi))
        reads = r.metadata["read_energies"]
        assert len(reads) == 50
        assert r.energy == min(reads)
        assert min(reads) <= float(np.median(reads))


class TestSvmcSolve:
    def test_transverse_limit_minimized_at_equator(self, rng):
        m = pair_model()
        base = svmc_energy(m, np.full(m.n, np.pi / 2), s=0.0)
        assert base == pytest.approx(-m.n)
        for _ in range(50):
            theta = rng.uniform(0, np.pi, size=m.n)
            assert svmc_energy(m, theta, s=0.0) >= base - 1e-12

    def test_classical_limit_matches_ising(self, rng):
        m = ising_from_qubo(build_qubo(generate_perfect(8, 20, seed=3)))
        for _ in range(20):
            spins = rng.integers(0, 2, size=8) * 2 - 1
            theta = np.where(spins > 0, 0.0, np.pi)
            assert svmc_energy(m, theta, s=1.0) == pytest.approx(
                ising_energy(m, spins) - m.offset)

    def test_pair_reaches_optimum(self):
        r = svmc_solve(pair_model(), linear_schedule(20),
                       AnnealParams(seed=2, reads=10))
        assert r.energy == 1.0

    def test_energy_matches_assignment(self):
        m = ising_from_qubo(build_qubo(generate_perfect(16, 30, seed=5)))
        r = svmc_solve(m, make_pause_schedule(20, 10, 40),
                       AnnealParams(seed=4, reads=3))
        assert r.energy == ising_energy(m, r.assignment)

    def test_deterministic(self):
        m = ising_from_qubo(build_qubo(generate_perfect(12, 30, seed=6)))
        params = AnnealParams(seed=9, reads=5)
        r1 = svmc_solve(m, linear_schedule(20), params)
        r2 = svmc_solve(m, linear_schedule(20), params)
        assert np.array_equal(r1.assignment, r2.assignment)
        assert r1.energy == r2.energy

    def test_pause_and_control_both_nonnegative(self):
        inst = generate_perfect(16, 30, seed=8)
        m = ising_from_qubo(build_qubo(inst))
        lo, hi = suggest_beta_range(m)
        params = AnnealParams(seed=3, reads=2, beta_start=lo, beta_end=hi)
        for sched in (linear_schedule(20), make_pause_schedule(20, 10, 40)):
            r = svmc_solve(m, sched, params)
            assert r.energy >= 0
