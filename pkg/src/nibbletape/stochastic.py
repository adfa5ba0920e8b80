"""Noise-driven execution: the machine advances only when an external
sample lands inside the acceptance window of its predicted next value.

The predicted 4-bit value v owns the sub-interval [v/16, (v+1)/16) of
[0, 1); a sample within ``epsilon`` of that interval's center commits the
pending transition (write + head move), anything else leaves the state
untouched.  With epsilon = 2^-5 the window is exactly one sub-interval,
so flat noise commits with probability 1/16 per tick and the waiting
times between commits are i.i.d. geometric.

Noise streams are numpy PCG64 generators: same seed, same stream, bit for
bit.  Samples are pre-generated into arrays and fed to the stepping core,
so the compiled and pure backends see identical inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .aca import Periodic, TapeState, Trajectory, run_array, step_array
from .backend import core
from .machine import ExpandedRule

FLAT = "flat"
BROWNIAN = "brownian"

_NOISE_STREAM = 0
_FAULT_STREAM = 1


class NoiseSource:
    """A seeded [0, 1) sample stream, flat or wrapped-Brownian.

    Brownian streams start at a uniform draw and add Gaussian(0, step)
    increments, folded back into [0, 1).  The wrap is computed one sample
    at a time so that chunked and single-sample consumption yield the
    same stream.
    """

    def __init__(self, kind: str, seed: int, brownian_step: float = 0.01):
        if kind not in (FLAT, BROWNIAN):
            raise ValueError(f"noise kind must be flat or brownian, not {kind!r}")
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if brownian_step <= 0:
            raise ValueError("brownian_step must be positive")
        self.kind = kind
        self.seed = seed
        self.brownian_step = brownian_step
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([seed, _NOISE_STREAM]))
        )
        self._pos: float | None = None  # brownian walker position

    def samples(self, count: int) -> np.ndarray:
        """The next ``count`` samples as a float64 array."""
        if count < 0:
            raise ValueError("count must be >= 0")
        if self.kind == FLAT:
            return self._gen.random(count)
        out = np.empty(count, dtype=np.float64)
        i = 0
        if self._pos is None and count > 0:
            self._pos = float(self._gen.random())
            out[0] = self._pos
            i = 1
        if i < count:
            increments = self._gen.standard_normal(count - i) * self.brownian_step
            x = self._pos
            for j, dz in enumerate(increments.tolist()):
                x = x + dz
                x -= math.floor(x)
                if x >= 1.0:  # rounding artifact of the fold
                    x = 0.0
                out[i + j] = x
            self._pos = x
        return out

    def next(self) -> float:
        return float(self.samples(1)[0])


def noise_next(src) -> float:
    """One sample from any object with a ``next()`` method."""
    return src.next()


@dataclass(frozen=True)
class MatchFilter:
    """Acceptance predicate: sample within epsilon of the predicted
    nibble's interval center.  epsilon below 2^-4 keeps windows from
    covering more than their own sub-interval's neighbours."""

    epsilon: float = 2.0**-5

    def __post_init__(self):
        if not 0.0 < self.epsilon < 2.0**-4:
            raise ValueError("epsilon must lie in (0, 2^-4)")


def filter_match(predicted: int, sample: float, filt: MatchFilter) -> bool:
    """True when the sample falls in the predicted value's window."""
    if not 0 <= predicted <= 15:
        raise ValueError("predicted value must be 4-bit")
    return abs(predicted * 0.0625 + 0.03125 - sample) < filt.epsilon


def step_stochastic(state: TapeState, rule: ExpandedRule, src,
                    filt: MatchFilter) -> tuple[TapeState, bool]:
    """One external tick: draw a sample, commit the pending transition iff
    it matches.  ``src`` only needs a ``next()`` method."""
    predicted = rule.entries[state.cells[state.head] + 16 * state.cells[state.prev_head]]
    if not filter_match(predicted, src.next(), filt):
        return state, False
    return step_array(state, rule), True


@dataclass(frozen=True)
class StochasticRun:
    """Record of a noise-driven run.

    ``committed_events`` holds (external_tick, cell_index, written_value)
    with 1-based ticks; ``waiting_times`` are the tick gaps between
    consecutive commits, counting from tick 0, so a run with n commits
    carries n waiting times and their sum is the last commit tick.
    """

    initial: TapeState
    final: TapeState
    committed_events: tuple[tuple[int, int, int], ...]
    waiting_times: tuple[int, ...]
    ticks_elapsed: int
    noise_kind: str
    seed: int
    epsilon: float
    brownian_step: float = 0.01  # carried for the manifest; unused by flat

    @property
    def commits(self) -> int:
        return len(self.committed_events)


def run_stochastic(state: TapeState, rule: ExpandedRule, src: NoiseSource,
                   filt: MatchFilter, max_ticks: int) -> StochasticRun:
    """Drive ``max_ticks`` external ticks through the matching filter."""
    if max_ticks < 1:
        raise ValueError("max_ticks must be >= 1")
    if not isinstance(state.boundary, Periodic):
        raise ValueError("stochastic runs use periodic boundaries")
    samples = src.samples(max_ticks)
    buf = np.asarray(state.cells, dtype=np.uint8)
    head, prev, ticks, heads, values = core.run_matching(
        buf, state.head, state.prev_head, rule.table_bytes(), samples,
        filt.epsilon,
    )
    events = tuple(zip((int(t) for t in ticks), (int(h) for h in heads),
                       (int(v) for v in values)))
    waits = []
    last = 0
    for t, _h, _v in events:
        waits.append(t - last)
        last = t
    final = TapeState(tuple(int(v) for v in buf), head, prev, state.boundary)
    return StochasticRun(
        initial=state,
        final=final,
        committed_events=events,
        waiting_times=tuple(waits),
        ticks_elapsed=max_ticks,
        noise_kind=src.kind,
        seed=src.seed,
        epsilon=filt.epsilon,
        brownian_step=src.brownian_step,
    )


def deterministic_prefix(run: StochasticRun, rule: ExpandedRule) -> Trajectory:
    """The deterministic trajectory the commits must reproduce."""
    return run_array(run.initial, rule, run.commits)


# --- waiting-time statistics -------------------------------------------------

@dataclass(frozen=True)
class HistogramStats:
    """Binned waiting times plus the fitted exponential rate 1/mean."""

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    lambda_hat: float | None
    mean: float | None
    variance: float | None
    count: int
    log_log: bool = False


def waiting_histogram(run_or_waits, bins: int = 30,
                      log_log: bool = False) -> HistogramStats:
    """Deterministic binning of waiting times.

    Linear mode uses ``bins`` equal-width bins; log mode uses geometric
    edges snapped to distinct integers so no bin can fall between two
    consecutive waiting-time values.  An empty input yields an empty
    histogram with ``lambda_hat`` undefined (None).
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    waits = run_or_waits.waiting_times if isinstance(run_or_waits, StochasticRun) \
        else tuple(run_or_waits)
    if not waits:
        return HistogramStats((), (), None, None, None, 0, log_log)
    arr = np.asarray(waits, dtype=np.float64)
    if log_log:
        lo, hi = float(arr.min()), float(arr.max())
        edges = np.unique(np.floor(np.geomspace(lo, hi + 1.0, bins + 1)))
        if len(edges) < 2:
            edges = np.array([lo, hi + 1.0])
    else:
        edges = np.linspace(float(arr.min()), float(arr.max()) + 1.0, bins + 1)
    counts, edges = np.histogram(arr, bins=edges)
    mean = float(arr.mean())
    return HistogramStats(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        lambda_hat=1.0 / mean if mean > 0 else None,
        mean=mean,
        variance=float(arr.var()),
        count=len(waits),
        log_log=log_log,
    )


def geometric_cdf(k: int, p: float) -> float:
    """P(W <= k) for W geometric on {1, 2, ...} with success prob p."""
    if k < 1:
        return 0.0
    return 1.0 - (1.0 - p) ** k


def ks_statistic_geometric(waits: Sequence[int], p: float) -> float:
    """sup_k |F_emp(k) - F_geom(k)|, evaluated at every integer up to the
    largest observation (both CDFs are integer step functions)."""
    if len(waits) == 0:
        raise ValueError("need at least one waiting time")
    arr = np.sort(np.asarray(waits, dtype=np.int64))
    n = len(arr)
    kmax = int(arr[-1])
    ks = np.arange(1, kmax + 1, dtype=np.int64)
    f_emp = np.searchsorted(arr, ks, side="right") / n
    f_geo = 1.0 - (1.0 - p) ** ks
    sup = float(np.max(np.abs(f_emp - f_geo)))
    # beyond kmax the empirical CDF is 1, the model CDF is not yet
    return max(sup, (1.0 - p) ** kmax)


# --- string-to-string first passage ------------------------------------------

@dataclass(frozen=True)
class StringTimeMap:
    """First tick each whole-tape value (as a base-16 integer) was seen."""

    length: int
    first_passage: dict[int, int] = field(default_factory=dict)
    ticks_used: int = 0
    budget_exhausted: bool = True

    @property
    def complete(self) -> bool:
        return len(self.first_passage) == 16 ** self.length

    def unreached(self) -> list[int]:
        total = 16 ** self.length
        return [v for v in range(total) if v not in self.first_passage]


def string_time_map(state: TapeState, rule: ExpandedRule, src: NoiseSource,
                    filt: MatchFilter, tick_budget: int) -> StringTimeMap:
    """Track first-passage ticks over all 16^n tape values (n <= 4)."""
    if state.length > 4:
        raise ValueError("first-passage maps are limited to tapes of 4 cells")
    run = run_stochastic(state, rule, src, filt, tick_budget)
    n_int = 0
    for v in reversed(state.cells):
        n_int = (n_int << 4) | v
    seen = {n_int: 0}
    for tick, idx, value in run.committed_events:
        old = (n_int >> (4 * idx)) & 15
        n_int += (value - old) << (4 * idx)
        if n_int not in seen:
            seen[n_int] = tick
    return StringTimeMap(
        length=state.length,
        first_passage=seen,
        ticks_used=run.ticks_elapsed,
        budget_exhausted=not _all_reached(seen, state.length),
    )


def _all_reached(seen: dict[int, int], length: int) -> bool:
    return len(seen) == 16 ** length


# --- fault injection ----------------------------------------------------------

@dataclass(frozen=True)
class DeviationReport:
    """Hamming distance between a fault-injected run and its clean twin.

    ``series`` holds (tick, hamming) at every tick where either run
    committed; ``first_divergence_tick`` is None when the tapes never
    differed.  A fault commits a uniformly chosen usable value other than
    the predicted one.
    """

    series: tuple[tuple[int, int], ...]
    first_divergence_tick: int | None
    final_hamming: int
    fault_count: int
    ticks: int
    fault_prob: float


def inject_faults(state: TapeState, rule: ExpandedRule, src: NoiseSource,
                  filt: MatchFilter, fault_prob: float, max_ticks: int,
                  fault_seed: int | None = None) -> DeviationReport:
    """Run clean and faulty twins on one noise stream and report their
    per-commit Hamming distance.  Fault decisions come from a separate
    stream so the same noise seed explores different fault patterns."""
    if not 0.0 <= fault_prob <= 1.0:
        raise ValueError("fault_prob must lie in [0, 1]")
    if max_ticks < 1:
        raise ValueError("max_ticks must be >= 1")
    if not isinstance(state.boundary, Periodic):
        raise ValueError("fault injection uses periodic boundaries")
    samples = src.samples(max_ticks)
    fseed = src.seed if fault_seed is None else fault_seed
    fgen = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([fseed, _FAULT_STREAM]))
    )
    fault_u = fgen.random(max_ticks)
    fault_pick = fgen.random(max_ticks)
    clean = np.asarray(state.cells, dtype=np.uint8)
    faulty = clean.copy()
    first_div, faults, ham_ticks, ham_values, final_ham = core.run_matching_pair(
        clean, faulty, state.head, state.prev_head, rule.table_bytes(),
        samples, filt.epsilon, fault_prob, fault_u, fault_pick,
    )
    return DeviationReport(
        series=tuple(zip((int(t) for t in ham_ticks),
                         (int(h) for h in ham_values))),
        first_divergence_tick=None if first_div < 0 else int(first_div),
        final_hamming=int(final_ham),
        fault_count=int(faults),
        ticks=max_ticks,
        fault_prob=fault_prob,
    )


# --- exports -------------------------------------------------------------------

def export_histogram_csv(stats: HistogramStats, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("bin_lo,bin_hi,count\n")
        for i, c in enumerate(stats.counts):
            fh.write(f"{stats.bin_edges[i]!r},{stats.bin_edges[i + 1]!r},{c}\n")


def run_manifest(run: StochasticRun, stats: HistogramStats) -> dict:
    return {
        "seed": run.seed,
        "noise": {"kind": run.noise_kind, "step": run.brownian_step},
        "epsilon": run.epsilon,
        "ticks": run.ticks_elapsed,
        "commits": run.commits,
        "lambda_hat": stats.lambda_hat,
    }


def export_manifest_json(run: StochasticRun, stats: HistogramStats, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(run_manifest(run, stats), sort_keys=True, indent=2) + "\n")


def export_deviation_csv(report: DeviationReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("tick,hamming\n")
        for tick, ham in report.series:
            fh.write(f"{tick},{ham}\n")
