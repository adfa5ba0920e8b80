import json
import math

import numpy as np
import pytest

from nibbletape import aca, machine, stochastic
from nibbletape.stochastic import (BROWNIAN, FLAT, DeviationReport, MatchFilter,
                                   NoiseSource, StochasticRun, filter_match,
                                   geometric_cdf, inject_faults,
                                   ks_statistic_geometric, noise_next,
                                   run_stochastic, step_stochastic,
                                   string_time_map, waiting_histogram)


class TestNoiseSource:
    def test_flat_determinism(self):
        a = NoiseSource(FLAT, 123).samples(100)
        b = NoiseSource(FLAT, 123).samples(100)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, NoiseSource(FLAT, 124).samples(100))

    def test_chunking_invariance_flat(self):
        src = NoiseSource(FLAT, 9)
        singles = np.array([src.next() for _ in range(500)])
        assert np.array_equal(singles, NoiseSource(FLAT, 9).samples(500))

    def test_chunking_invariance_brownian(self):
        src = NoiseSource(BROWNIAN, 9)
        singles = np.array([src.next() for _ in range(500)])
        chunked = NoiseSource(BROWNIAN, 9).samples(500)
        assert np.array_equal(singles, chunked)
        # and mixed chunk sizes
        src2 = NoiseSource(BROWNIAN, 9)
        mixed = np.concatenate([src2.samples(3), src2.samples(497)])
        assert np.array_equal(mixed, chunked)

    def test_brownian_range_and_locality(self):
        xs = NoiseSource(BROWNIAN, 7, brownian_step=0.01).samples(1_000_000)
        assert float(xs.min()) >= 0.0 and float(xs.max()) < 1.0
        # consecutive samples stay close (mod-1 distance)
        d = np.abs(np.diff(xs[:10_000]))
        d = np.minimum(d, 1.0 - d)
        assert float(d.max()) < 0.08

    def test_flat_mean(self):
        xs = NoiseSource(FLAT, 11).samples(1_000_000)
        assert abs(float(xs.mean()) - 0.5) <= 0.002

    def test_validation(self):
        with pytest.raises(ValueError):
            NoiseSource("pink", 1)
        with pytest.raises(ValueError):
            NoiseSource(FLAT, -1)
        with pytest.raises(ValueError):
            NoiseSource(BROWNIAN, 1, brownian_step=0.0)

    def test_noise_next_helper(self):
        src = NoiseSource(FLAT, 5)
        x = noise_next(src)
        assert 0.0 <= x < 1.0


class TestFilter:
    def test_examples(self):
        filt = MatchFilter()
        assert filter_match(13, 13 / 16 + 0.01, filt)
        assert not filter_match(13, 0.5, filt)

    def test_window_is_the_nibble_cell_at_default_epsilon(self):
        filt = MatchFilter()
        for v in range(16):
            inside = v / 16 + 1e-9, (v + 1) / 16 - 1e-9
            outside = (v / 16 - 1e-9) % 1.0, ((v + 1) / 16 + 1e-9) % 1.0
            assert filter_match(v, inside[0], filt)
            assert filter_match(v, inside[1], filt)
            assert not filter_match(v, outside[0], filt)
            assert not filter_match(v, outside[1], filt)

    def test_epsilon_bounds(self):
        with pytest.raises(ValueError):
            MatchFilter(0.0)
        with pytest.raises(ValueError):
            MatchFilter(2.0**-4)
        MatchFilter(2.0**-6)  # fine

    def test_acceptance_probability_one_sixteenth(self, rule):
        state = aca.random_usable_tape(64, 41)
        src = NoiseSource(FLAT, 43)
        run = run_stochastic(state, rule, src, MatchFilter(), 1_000_000)
        rate = run.commits / run.ticks_elapsed
        assert abs(rate - 1 / 16) <= 0.01 / 16

    def test_acceptance_probability_scales_with_epsilon(self, rule):
        state = aca.random_usable_tape(64, 47)
        src = NoiseSource(FLAT, 53)
        run = run_stochastic(state, rule, src, MatchFilter(2.0**-6), 1_000_000)
        rate = run.commits / run.ticks_elapsed
        assert abs(rate - 1 / 32) <= 0.02 / 32


class _ForcedSource:
    """Always lands in (or away from) the window of a live prediction."""

    def __init__(self, state, rule, match):
        self.state = state
        self.rule = rule
        self.match = match

    def next(self):
        s = self.state
        predicted = self.rule.entries[s.cells[s.head] + 16 * s.cells[s.prev_head]]
        center = predicted / 16 + 1 / 32
        return center if self.match else (center + 0.5) % 1.0


class TestStepStochastic:
    def test_forced_match_equals_deterministic_step(self, rule):
        state = aca.random_usable_tape(16, 59)
        src = _ForcedSource(state, rule, match=True)
        for _ in range(50):
            src.state = state
            nxt, committed = step_stochastic(state, rule, src, MatchFilter())
            assert committed
            assert nxt == aca.step_array(state, rule)
            state = nxt

    def test_forced_miss_never_moves(self, rule):
        state = aca.random_usable_tape(16, 61)
        src = _ForcedSource(state, rule, match=False)
        for _ in range(50):
            nxt, committed = step_stochastic(state, rule, src, MatchFilter())
            assert not committed and nxt == state


class TestRunStochastic:
    def test_soundness_single_seed(self, rule):
        state = aca.random_usable_tape(64, 67, head=11)
        run = run_stochastic(state, rule, NoiseSource(FLAT, 71),
                             MatchFilter(), 100_000)
        committed = [(h, v) for (_t, h, v) in run.committed_events]
        traj = aca.run_array(state, rule, run.commits)
        assert committed == [(e.index, e.new) for e in traj.events]
        assert run.final == traj.final

    def test_waiting_times_partition_commit_ticks(self, rule):
        state = aca.random_usable_tape(32, 73)
        run = run_stochastic(state, rule, NoiseSource(FLAT, 79),
                             MatchFilter(), 20_000)
        assert len(run.waiting_times) == run.commits
        assert sum(run.waiting_times) == run.committed_events[-1][0]
        assert sum(run.waiting_times) <= run.ticks_elapsed
        assert all(w >= 1 for w in run.waiting_times)

    def test_reproducible(self, rule):
        state = aca.random_usable_tape(32, 83)
        runs = [
            run_stochastic(state, rule, NoiseSource(FLAT, 89),
                           MatchFilter(), 30_000)
            for _ in range(2)
        ]
        assert runs[0] == runs[1]

    def test_geometric_waiting_times(self, rule):
        state = aca.random_usable_tape(64, 97)
        run = run_stochastic(state, rule, NoiseSource(FLAT, 101),
                             MatchFilter(), 170_000)
        waits = run.waiting_times
        assert len(waits) >= 10_000
        mean = sum(waits) / len(waits)
        var = float(np.var(np.asarray(waits)))
        assert abs(mean - 16.0) <= 0.8  # 5%
        assert abs(var - 240.0) <= 24.0  # 10%
        assert ks_statistic_geometric(waits, 1 / 16) < 0.02

    def test_zero_commit_run_is_valid(self, rule):
        # epsilon so small no sample lands inside the window in 10 ticks
        state = aca.random_usable_tape(16, 103)
        run = run_stochastic(state, rule, NoiseSource(FLAT, 107),
                             MatchFilter(1e-9), 10)
        assert run.commits == 0 and run.waiting_times == ()
        assert run.final == state
        stats = waiting_histogram(run)
        assert stats.lambda_hat is None and stats.count == 0

    def test_brownian_slower_than_flat(self, rule):
        state = aca.random_usable_tape(64, 109)
        flat = run_stochastic(state, rule, NoiseSource(FLAT, 113),
                              MatchFilter(), 100_000)
        brown = run_stochastic(state, rule, NoiseSource(BROWNIAN, 113),
                               MatchFilter(), 100_000)
        assert 0 < brown.commits < flat.commits


class TestHistogram:
    def test_fixed_waits(self):
        stats = waiting_histogram([16, 16, 16], bins=4)
        assert stats.lambda_hat == pytest.approx(1 / 16)
        assert sum(stats.counts) == 3

    def test_counts_sum(self, rule):
        state = aca.random_usable_tape(32, 127)
        run = run_stochastic(state, rule, NoiseSource(FLAT, 131),
                             MatchFilter(), 30_000)
        for log_log in (False, True):
            stats = waiting_histogram(run, bins=12, log_log=log_log)
            assert sum(stats.counts) == run.commits

    def test_geometric_cdf(self):
        assert geometric_cdf(0, 0.5) == 0.0
        assert geometric_cdf(1, 0.5) == pytest.approx(0.5)
        assert geometric_cdf(3, 0.5) == pytest.approx(0.875)

    def test_ks_detects_wrong_rate(self, rule):
        state = aca.random_usable_tape(64, 137)
        run = run_stochastic(state, rule, NoiseSource(FLAT, 139),
                             MatchFilter(), 50_000)
        assert ks_statistic_geometric(run.waiting_times, 1 / 16) < 0.03
        assert ks_statistic_geometric(run.waiting_times, 1 / 8) > 0.2


class TestStringTimeMap:
    def test_initial_at_zero_and_successors(self, rule):
        state = aca.init_tape([2, 2], 0)
        fp = string_time_map(state, rule, NoiseSource(FLAT, 149),
                             MatchFilter(), 50_000)
        start = 2 + (2 << 4)
        assert fp.first_passage[start] == 0
        # the first commit writes T(2)=13 at cell 0
        succ = 13 + (2 << 4)
        assert succ in fp.first_passage
        assert fp.first_passage[succ] >= 1

    def test_successor_reached_across_seeds(self, rule):
        reached = 0
        for s in range(100):
            state = aca.init_tape([2, 2], 0)
            fp = string_time_map(state, rule, NoiseSource(FLAT, 1000 + s),
                                 MatchFilter(), 5000)
            if 13 + (2 << 4) in fp.first_passage:
                reached += 1
        assert reached == 100

    def test_idle_strings_unreached(self, rule):
        state = aca.init_tape([2, 2], 0)
        fp = string_time_map(state, rule, NoiseSource(FLAT, 151),
                             MatchFilter(), 100_000)
        idle = set(machine.IDLE_VALUES)
        for value in fp.first_passage:
            digits = [(value >> (4 * i)) & 15 for i in range(2)]
            assert not idle.intersection(digits)
        assert not fp.complete and fp.budget_exhausted

    def test_length_limit(self, rule):
        with pytest.raises(ValueError):
            string_time_map(aca.random_usable_tape(5, 1), rule,
                            NoiseSource(FLAT, 1), MatchFilter(), 10)


class TestFaultInjection:
    def test_zero_probability_never_deviates(self, rule):
        state = aca.random_usable_tape(32, 157)
        report = inject_faults(state, rule, NoiseSource(FLAT, 163),
                               MatchFilter(), 0.0, 20_000)
        assert report.first_divergence_tick is None
        assert report.final_hamming == 0
        assert report.fault_count == 0
        assert all(h == 0 for _t, h in report.series)

    def test_certain_fault_diverges_at_first_commit(self, rule):
        state = aca.random_usable_tape(32, 167)
        clean = run_stochastic(state, rule, NoiseSource(FLAT, 173),
                               MatchFilter(), 20_000)
        report = inject_faults(state, rule, NoiseSource(FLAT, 173),
                               MatchFilter(), 1.0, 20_000)
        assert report.first_divergence_tick == clean.committed_events[0][0]
        assert report.fault_count > 0

    def test_deviation_grows_with_fault_probability(self, rule):
        # short window: past a few thousand ticks the tapes decorrelate
        # completely and every q saturates at the same Hamming ceiling
        means = []
        for q in (0.0, 0.01, 0.1, 0.5):
            finals = []
            for s in range(100):
                state = aca.random_usable_tape(32, 179 + s)
                report = inject_faults(state, rule,
                                       NoiseSource(FLAT, 40_000 + s),
                                       MatchFilter(), q, 2000)
                finals.append(report.final_hamming)
            means.append(sum(finals) / len(finals))
        assert means[0] == 0.0
        assert means == sorted(means)
        assert means[-1] > means[1]

    def test_reproducible(self, rule):
        state = aca.random_usable_tape(32, 181)
        reports = [
            inject_faults(state, rule, NoiseSource(FLAT, 191),
                          MatchFilter(), 0.2, 10_000)
            for _ in range(2)
        ]
        assert reports[0] == reports[1]


class TestExports:
    def test_histogram_csv(self, rule, tmp_path):
        stats = waiting_histogram([1, 2, 2, 3, 16], bins=3)
        path = tmp_path / "hist.csv"
        stochastic.export_histogram_csv(stats, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "bin_lo,bin_hi,count"
        assert len(lines) == len(stats.counts) + 1

    def test_manifest(self, rule, tmp_path):
        state = aca.random_usable_tape(16, 193)
        run = run_stochastic(state, rule, NoiseSource(FLAT, 197),
                             MatchFilter(), 5000)
        stats = waiting_histogram(run)
        path = tmp_path / "manifest.json"
        stochastic.export_manifest_json(run, stats, path)
        doc = json.loads(path.read_text())
        assert doc["seed"] == 197
        assert doc["noise"] == {"kind": "flat", "step": 0.01}
        assert doc["ticks"] == 5000
        assert doc["commits"] == run.commits
        assert doc["epsilon"] == pytest.approx(2.0**-5)

    def test_deviation_csv(self, rule, tmp_path):
        state = aca.random_usable_tape(16, 199)
        report = inject_faults(state, rule, NoiseSource(FLAT, 211),
                               MatchFilter(), 0.5, 3000)
        path = tmp_path / "dev.csv"
        stochastic.export_deviation_csv(report, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "tick,hamming"
        assert len(lines) == len(report.series) + 1
