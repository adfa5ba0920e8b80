"""Asynchronous cell-array execution engines.

Exactly one cell updates per step: the active cell (``head``) is rewritten
through the 256-entry pair rule using the previously active cell
(``prev_head``) as context, then the head moves one cell in the direction
given by the motion bit of the value just written.  At t=0 both trackers
point at the same cell, so the first lookup degenerates to the 16-entry
map (R(x, x) = T(x)).

Two equivalent engines are provided:

* the array engine over an explicit cell list, and
* the compacted-integer engine, which keeps the whole tape as one
  arbitrary-precision integer in base 16 and adds a precomputed value
  delta, shifted to the active digit's position, each step.

Long periodic runs dispatch to the selected stepping core
(:mod:`nibbletape.backend`); single steps and growable-boundary runs stay
in plain Python.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .backend import core
from .machine import USABLE_VALUES, ExpandedRule, is_usable


class IdleTapeWarning(UserWarning):
    """The tape contains idle (color-0) cells; the run may stall into a
    pure head drift when the head reaches one."""


class CapacityError(ValueError):
    """A growable tape hit its configured maximum length."""


@dataclass(frozen=True)
class Periodic:
    """Wrap-around boundary."""


@dataclass(frozen=True)
class Growable:
    """Extend the tape with ``fill`` when the head walks off an end."""

    fill: int = 2  # color A, state 0, motion left
    max_length: int = 1 << 16

    def __post_init__(self):
        if not 0 <= self.fill <= 15:
            raise ValueError("fill must be a 4-bit cell value")
        if self.max_length < 1:
            raise ValueError("max_length must be >= 1")


Boundary = Periodic | Growable


@dataclass(frozen=True)
class TapeState:
    """Immutable machine configuration: cells plus the two head trackers.

    ``origin`` is the absolute coordinate of cells[0]; it only moves under
    a growable boundary, when the tape extends to the left.
    """

    cells: tuple[int, ...]
    head: int
    prev_head: int
    boundary: Boundary = Periodic()
    origin: int = 0

    def __post_init__(self):
        if not self.cells:
            raise ValueError("tape must hold at least one cell")
        if not 0 <= self.head < len(self.cells):
            raise ValueError("head out of range")
        if not 0 <= self.prev_head < len(self.cells):
            raise ValueError("prev_head out of range")
        for v in self.cells:
            if not 0 <= v <= 15:
                raise ValueError(f"cell value {v} not a 4-bit integer")

    @property
    def length(self) -> int:
        return len(self.cells)

    def has_idle_cells(self) -> bool:
        return any(not is_usable(v) for v in self.cells)


def init_tape(values: Sequence[int], head: int = 0,
              boundary: Boundary = Periodic()) -> TapeState:
    """Build a start state; prev_head is bootstrapped to head."""
    state = TapeState(tuple(values), head, head, boundary)
    if state.has_idle_cells():
        warnings.warn(
            "tape contains idle cell values {0,1,8,9}; the head will drift "
            "without computing once it reaches one",
            IdleTapeWarning,
            stacklevel=2,
        )
    return state


def random_usable_tape(length: int, seed: int, head: int = 0,
                       boundary: Boundary = Periodic()) -> TapeState:
    """A uniformly random all-usable tape (deterministic per seed)."""
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 2])))
    values = [USABLE_VALUES[i] for i in gen.integers(0, len(USABLE_VALUES), length)]
    return init_tape(values, head, boundary)


def _move(head: int, v: int) -> int:
    return head + ((v & 1) * 2 - 1)


def step_array(state: TapeState, rule: ExpandedRule) -> TapeState:
    """One asynchronous update; pure, returns a new state."""
    cells = list(state.cells)
    x = cells[state.head]
    v = rule.entries[x + 16 * cells[state.prev_head]]
    cells[state.head] = v
    new_head = _move(state.head, v)
    prev = state.head
    origin = state.origin
    if isinstance(state.boundary, Periodic):
        new_head %= len(cells)
    else:
        if len(cells) + 1 > state.boundary.max_length and not (
            0 <= new_head < len(cells)
        ):
            raise CapacityError(
                f"tape would exceed max_length {state.boundary.max_length}"
            )
        if new_head < 0:
            cells.insert(0, state.boundary.fill)
            origin -= 1
            new_head = 0
            prev += 1
        elif new_head >= len(cells):
            cells.append(state.boundary.fill)
    return TapeState(tuple(cells), new_head, prev, state.boundary, origin)


@dataclass(frozen=True)
class TrajectoryEvent:
    step: int
    index: int
    old: int
    new: int
    head_after: int


@dataclass(frozen=True)
class Trajectory:
    """A deterministic run: initial state plus one event per step.

    Periodic runs store only the event log and replay states on demand;
    growable runs keep full snapshots (the tape coordinate system can
    shift as the tape grows left).  Either storage replays bit-identically
    through :meth:`states`.  ``idle_steps``/``first_idle_step`` report
    time spent with the head parked on idle cells (-1 when never).
    """

    initial: TapeState
    events: tuple[TrajectoryEvent, ...]
    final: TapeState
    idle_steps: int = 0
    first_idle_step: int = -1
    snapshots: tuple[TapeState, ...] | None = None

    @property
    def length(self) -> int:
        """Number of states, i.e. steps + 1."""
        return len(self.events) + 1

    def states(self) -> Iterator[TapeState]:
        """Replay the run as a state sequence (length steps + 1)."""
        if self.snapshots is not None:
            yield from self.snapshots
            return
        state = self.initial
        yield state
        for ev in self.events:
            cells = list(state.cells)
            cells[ev.index] = ev.new
            state = TapeState(tuple(cells), ev.head_after, ev.index,
                              state.boundary, state.origin)
            yield state

    @property
    def boundary(self) -> Boundary:
        return self.initial.boundary


def run_array(state: TapeState, rule: ExpandedRule, steps: int) -> Trajectory:
    """Run the array engine ``steps`` times, recording every write."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if isinstance(state.boundary, Periodic) and state.length <= 256:
        return _run_array_core(state, rule, steps)
    return _run_array_python(state, rule, steps)


def _run_array_core(state: TapeState, rule: ExpandedRule, steps: int) -> Trajectory:
    buf = np.asarray(state.cells, dtype=np.uint8)
    ev = np.empty(3 * steps, dtype=np.uint8)
    head, prev, idle, first_idle = core.run_array_events(
        buf, state.head, state.prev_head, rule.table_bytes(), steps, ev
    )
    events = []
    tape = list(state.cells)
    for k in range(steps):
        idx = int(ev[3 * k])
        new = int(ev[3 * k + 1])
        events.append(TrajectoryEvent(k, idx, tape[idx], new, int(ev[3 * k + 2])))
        tape[idx] = new
    final = TapeState(tuple(int(v) for v in buf), head, prev, state.boundary)
    if tuple(tape) != final.cells:
        raise AssertionError("event replay disagrees with the core buffer")
    return Trajectory(state, tuple(events), final, idle, first_idle)


def _run_array_python(state: TapeState, rule: ExpandedRule, steps: int) -> Trajectory:
    keep_snapshots = isinstance(state.boundary, Growable)
    snapshots = [state] if keep_snapshots else None
    events = []
    idle = 0
    first_idle = -1
    current = state
    for k in range(steps):
        x = current.cells[current.head]
        if not is_usable(x):
            idle += 1
            if first_idle < 0:
                first_idle = k
        nxt = step_array(current, rule)
        shift = current.origin - nxt.origin  # 1 when the tape grew left
        idx = current.head + shift
        events.append(TrajectoryEvent(k, idx, x, nxt.cells[idx], nxt.head))
        if keep_snapshots:
            snapshots.append(nxt)
        current = nxt
    return Trajectory(
        state, tuple(events), current, idle, first_idle,
        tuple(snapshots) if keep_snapshots else None,
    )


def advance(state: TapeState, rule: ExpandedRule,
            steps: int) -> tuple[TapeState, int, int]:
    """Run without recording events; returns (final_state, idle_steps,
    first_idle_step).  The cheap path for long runs."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if isinstance(state.boundary, Periodic):
        buf = np.asarray(state.cells, dtype=np.uint8)
        head, prev, idle, first_idle = core.run_array(
            buf, state.head, state.prev_head, rule.table_bytes(), steps
        )
        final = TapeState(tuple(int(v) for v in buf), head, prev, state.boundary)
        return final, idle, first_idle
    traj = _run_array_python(state, rule, steps)
    return traj.final, traj.idle_steps, traj.first_idle_step


# --- compacted-integer engine ----------------------------------------------

@dataclass(frozen=True)
class BigState:
    """The tape as one base-16 integer; digit i of n is cells[i]."""

    n: int
    length: int
    head: int
    prev_head: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if self.n < 0 or self.n >= 1 << (4 * self.length):
            raise ValueError("n does not fit the stated length")
        if not 0 <= self.head < self.length:
            raise ValueError("head out of range")
        if not 0 <= self.prev_head < self.length:
            raise ValueError("prev_head out of range")


@dataclass(frozen=True)
class DeltaTable:
    """Precomputed value changes: deltas[k] = R(k) - (k mod 16)."""

    deltas: tuple[int, ...]

    def __post_init__(self):
        if len(self.deltas) != 256:
            raise ValueError("a delta table has exactly 256 entries")


def delta_table(rule: ExpandedRule) -> DeltaTable:
    return DeltaTable(tuple(rule.entries[k] - (k & 15) for k in range(256)))


def tape_to_bigint(state: TapeState) -> BigState:
    """Compact a periodic tape into its integer twin."""
    if not isinstance(state.boundary, Periodic):
        raise ValueError("the integer engine needs a periodic boundary")
    n = 0
    for v in reversed(state.cells):
        n = (n << 4) | v
    return BigState(n, state.length, state.head, state.prev_head)


def bigint_to_tape(state: BigState) -> TapeState:
    """Unpack digits back into a periodic cell tuple."""
    cells = tuple((state.n >> (4 * i)) & 15 for i in range(state.length))
    return TapeState(cells, state.head, state.prev_head, Periodic())


def step_bigint(state: BigState, deltas: DeltaTable) -> BigState:
    """One asynchronous update on the integer form; pure."""
    h4 = state.head << 2
    k = ((state.n >> h4) & 15) + (((state.n >> (state.prev_head << 2)) & 15) << 4)
    d = deltas.deltas[k]
    n = state.n + (d << h4) if d else state.n
    v = (k & 15) + d
    head = _move(state.head, v) % state.length
    return BigState(n, state.length, head, state.head)


def run_bigint(state: BigState, deltas: DeltaTable, steps: int) -> BigState:
    """Run the integer engine ``steps`` times (core-backed)."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    n, head, prev = core.run_bigint(
        state.n, state.length, state.head, state.prev_head,
        list(deltas.deltas), steps,
    )
    return BigState(n, state.length, head, prev)


def check_engine_equivalence(state: TapeState, rule: ExpandedRule, steps: int,
                             resync_every: int = 4096) -> int:
    """Run both engines in lockstep; -1 when they agree digit for digit at
    every step, else the first mismatching step."""
    deltas = delta_table(rule)
    buf = np.asarray(state.cells, dtype=np.uint8)
    mismatch, _n, _h, _p = core.run_lockstep(
        buf, state.head, state.prev_head, rule.table_bytes(),
        list(deltas.deltas), steps, resync_every,
    )
    return int(mismatch)


# --- exports ----------------------------------------------------------------

def trajectory_grid(traj: Trajectory) -> list[list[int]]:
    """Space-time matrix: rows are time (steps + 1), columns are cells."""
    if not isinstance(traj.initial.boundary, Periodic):
        raise ValueError("grids are defined for periodic runs")
    return [list(s.cells) for s in traj.states()]


def export_trajectory_csv(traj: Trajectory, path, meta: dict | None = None) -> None:
    """Write one row per step: step,head,prev_head,changed_index,new_value.

    The first line is a '#'-prefixed JSON header with run metadata.
    """
    header = dict(meta or {})
    header.setdefault("boundary", type(traj.initial.boundary).__name__.lower())
    header.setdefault("length", traj.initial.length)
    header.setdefault("steps", len(traj.events))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        fh.write("step,head,prev_head,changed_index,new_value\n")
        prev = traj.initial.prev_head
        for ev in traj.events:
            fh.write(f"{ev.step},{ev.index},{prev},{ev.index},{ev.new}\n")
            prev = ev.index


def export_grid_csv(traj: Trajectory, path) -> None:
    """Write the space-time matrix as plain CSV (values 0..15)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in trajectory_grid(traj):
            fh.write(",".join(str(v) for v in row) + "\n")
