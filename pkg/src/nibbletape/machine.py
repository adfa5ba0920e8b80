"""Turing-machine description, its 4-bit arithmetization, and the
conventional head-based simulator used as ground truth.

Cell values are packed 4-bit integers:

    bit 0    motion of the head that wrote the cell (0 = left, 1 = right)
    bits 1-2 tape color (0 = null, 1 = A, 2 = B, 3 = C)
    bit 3    control bit: the head state carried by the cell

Values with color 0 ({0, 1, 8, 9}) are idle: they encode no tape symbol
and the 16-entry map fixes them.  The remaining 12 values are "usable"
and are closed under the map, so a run started on usable cells never
produces an idle one.

The 16-entry map (the machine's rule table folded into cell space) is
expanded to a 256-entry pair rule R(x, y) = T(x + 8*s(x, y)) where y is
the previously active cell and s transfers its control bit into x before
the lookup.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

LEFT = "L"
RIGHT = "R"

EXACT_BIT3 = "exact_bit3"
LITERAL_EQ3 = "literal_eq3"
CORRECTION_MODES = (EXACT_BIT3, LITERAL_EQ3)

IDLE_VALUES = (0, 1, 8, 9)
USABLE_VALUES = tuple(v for v in range(16) if v not in IDLE_VALUES)


class CapacityError(ValueError):
    """Machine does not fit the 4-bit cell packing."""


def pack_cell(motion: int, color: int, state: int) -> int:
    """Pack (motion, color, state) into a 4-bit cell value."""
    if motion not in (0, 1) or not 0 <= color <= 3 or state not in (0, 1):
        raise ValueError("motion/state must be bits, color in 0..3")
    return motion | (color << 1) | (state << 3)


def cell_motion(v: int) -> int:
    return v & 1


def cell_color(v: int) -> int:
    return (v >> 1) & 3


def cell_state(v: int) -> int:
    return (v >> 3) & 1


def is_usable(v: int) -> bool:
    return cell_color(v) != 0


@dataclass(frozen=True)
class TuringSpec:
    """A total transition table over colors x states with L/R moves only."""

    colors: tuple[str, ...]
    states: tuple[int, ...]
    rules: Mapping[tuple[str, int], tuple[str, int, str]]

    def __post_init__(self):
        for color in self.colors:
            for state in self.states:
                if (color, state) not in self.rules:
                    raise ValueError(f"rules not total: missing ({color}, {state})")
        for (color, state), (new_color, new_state, move) in self.rules.items():
            if color not in self.colors or state not in self.states:
                raise ValueError(f"rule key ({color}, {state}) outside alphabet")
            if new_color not in self.colors or new_state not in self.states:
                raise ValueError(f"rule output ({new_color}, {new_state}) outside alphabet")
            if move not in (LEFT, RIGHT):
                raise ValueError(f"move must be L or R, got {move!r}")

    def color_number(self, color: str) -> int:
        return self.colors.index(color) + 1

    def state_number(self, state: int) -> int:
        return self.states.index(state)


def wolfram23_spec() -> TuringSpec:
    """The minimal 2-state 3-color machine used throughout."""
    rules = {
        ("A", 0): ("B", 1, RIGHT),
        ("B", 0): ("C", 0, LEFT),
        ("C", 0): ("B", 0, LEFT),
        ("A", 1): ("C", 0, LEFT),
        ("B", 1): ("C", 1, RIGHT),
        ("C", 1): ("A", 0, RIGHT),
    }
    return TuringSpec(colors=("A", "B", "C"), states=(0, 1), rules=rules)


@dataclass(frozen=True)
class Genome:
    """The 16-entry arithmetized transition map T."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != 16:
            raise ValueError("a genome has exactly 16 entries")
        for v, out in enumerate(self.entries):
            if not 0 <= out <= 15:
                raise ValueError(f"entry {v} -> {out} not a 4-bit value")
        for v in IDLE_VALUES:
            if self.entries[v] != v:
                raise ValueError(f"idle value {v} must be a fixed point")
        for k in range(8):
            if 2 * k in IDLE_VALUES:
                continue  # idle rows are individual fixed points instead
            if self.entries[2 * k] != self.entries[2 * k + 1]:
                raise ValueError(f"inputs {2 * k} and {2 * k + 1} must agree "
                                 "(input motion bit is indifferent)")
        for v in USABLE_VALUES:
            if not is_usable(self.entries[v]):
                raise ValueError(f"usable input {v} maps to idle {self.entries[v]}")


def arithmetize_spec(spec: TuringSpec) -> Genome:
    """Fold the transition table into 16 packed cell values.

    Inputs pair up as (2k, 2k+1) because the input motion bit carries no
    information; idle inputs (color 0) and colors without a rule row stay
    fixed points.
    """
    if len(spec.colors) > 3 or len(spec.states) > 2:
        raise CapacityError(
            f"{len(spec.colors)} colors / {len(spec.states)} states exceed the "
            "4-bit cell packing (3 colors, 2 states)"
        )
    entries = []
    for v in range(16):
        color = cell_color(v)
        state = cell_state(v)
        if color == 0:
            entries.append(v)
            continue
        if color > len(spec.colors) or state >= len(spec.states):
            # no rule row: inert, but keep the motion bit indifferent
            entries.append(v & ~1)
            continue
        new_color, new_state, move = spec.rules[(spec.colors[color - 1], spec.states[state])]
        entries.append(
            pack_cell(
                1 if move == RIGHT else 0,
                spec.color_number(new_color),
                spec.state_number(new_state),
            )
        )
    return Genome(tuple(entries))


def correction(x: int, y: int, mode: str = EXACT_BIT3) -> int:
    """Control-bit transfer term s(x, y) in {-1, 0, +1}.

    ``exact_bit3`` replaces x's control bit with y's: s = bit3(y) - bit3(x).
    ``literal_eq3`` only reacts to pairs more than 7 apart:
    s = (|x - y| > 7) * (2*(x < y) - 1).  The two agree except on pairs
    whose control bits differ while |x - y| <= 7.
    """
    if not (0 <= x <= 15 and 0 <= y <= 15):
        raise ValueError("cell values are 4-bit")
    if mode == EXACT_BIT3:
        return cell_state(y) - cell_state(x)
    if mode == LITERAL_EQ3:
        if abs(x - y) > 7:
            return 1 if x < y else -1
        return 0
    raise ValueError(f"unknown correction mode {mode!r}")


@dataclass(frozen=True)
class ExpandedRule:
    """The 256-entry pair rule; index = current + 16 * previous."""

    entries: tuple[int, ...]
    mode: str
    clamp_events: int = 0  # times x + 8s left 0..15 and was reduced mod 16

    def __post_init__(self):
        if len(self.entries) != 256:
            raise ValueError("an expanded rule has exactly 256 entries")
        if self.mode not in CORRECTION_MODES:
            raise ValueError(f"unknown correction mode {self.mode!r}")

    def table_bytes(self) -> bytes:
        return bytes(self.entries)


def expand_rule(genome: Genome, mode: str = EXACT_BIT3) -> ExpandedRule:
    """Tabulate R(x, y) = T(x + 8*s(x, y)) over all 256 pairs."""
    entries = []
    clamps = 0
    for y in range(16):
        for x in range(16):
            idx = x + 8 * correction(x, y, mode)
            if not 0 <= idx <= 15:
                idx %= 16
                clamps += 1
            entries.append(genome.entries[idx])
    return ExpandedRule(tuple(entries), mode, clamps)


def delta_entries(rule: ExpandedRule) -> tuple[int, ...]:
    """Per-index value change R(k) - (k mod 16); see aca.DeltaTable."""
    return tuple(rule.entries[k] - (k & 15) for k in range(256))


def fixed_point_ratio(genome) -> Fraction:
    """Fraction of the 16 inputs the map fixes; >= 1/4 for any valid
    Genome (the idle rows).  Accepts a Genome or any 16-entry sequence."""
    entries = genome.entries if isinstance(genome, Genome) else tuple(genome)
    if len(entries) != 16:
        raise ValueError("need a 16-entry map")
    count = sum(1 for v in range(16) if entries[v] == v)
    return Fraction(count, 16)


# --- serialization ---------------------------------------------------------

def genome_to_doc(genome: Genome) -> dict:
    return {"base": 16, "entries": list(genome.entries), "mode": None}


def rule_to_doc(rule: ExpandedRule) -> dict:
    return {"base": 16, "entries": list(rule.entries), "mode": rule.mode}


def doc_to_json(doc: dict) -> str:
    # fixed key order, index-ascending entries: byte-stable output
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def genome_from_doc(doc: dict) -> Genome:
    if doc.get("base") != 16 or len(doc.get("entries", ())) != 16:
        raise ValueError("not a 16-entry base-16 map document")
    return Genome(tuple(doc["entries"]))


def rule_from_doc(doc: dict) -> ExpandedRule:
    if doc.get("base") != 16 or len(doc.get("entries", ())) != 256:
        raise ValueError("not a 256-entry base-16 rule document")
    return ExpandedRule(tuple(doc["entries"]), doc["mode"])


# --- direct head-based simulation (the ground-truth oracle) ----------------

@dataclass(frozen=True)
class TmConfig:
    """A conventional machine configuration on a sparse unbounded tape."""

    head_state: int
    head_index: int
    colors: Mapping[int, str] = field(default_factory=dict)
    blank: str = "A"


def step_direct(cfg: TmConfig, spec: TuringSpec) -> TmConfig:
    """One head-based step: read, write, switch state, move."""
    color = cfg.colors.get(cfg.head_index, cfg.blank)
    new_color, new_state, move = spec.rules[(color, cfg.head_state)]
    colors = dict(cfg.colors)
    colors[cfg.head_index] = new_color
    return TmConfig(
        head_state=new_state,
        head_index=cfg.head_index + (1 if move == RIGHT else -1),
        colors=colors,
        blank=cfg.blank,
    )


def run_direct(cfg: TmConfig, spec: TuringSpec, steps: int) -> TmConfig:
    for _ in range(steps):
        cfg = step_direct(cfg, spec)
    return cfg


def numeric_rule_tables(spec: TuringSpec) -> tuple[list[int], list[int], list[int]]:
    """Flat (new_color, new_state, move) tables indexed by state*4 + color
    number.  Unused slots hold 255 so a stray read fails loudly."""
    ncolor = [255] * 8
    nstate = [255] * 8
    nmove = [0] * 8
    for (color, state), (new_color, new_state, move) in spec.rules.items():
        k = spec.state_number(state) * 4 + spec.color_number(color)
        ncolor[k] = spec.color_number(new_color)
        nstate[k] = spec.state_number(new_state)
        nmove[k] = 1 if move == RIGHT else -1
    return ncolor, nstate, nmove


def run_direct_packed(
    colors: list[int],
    state: int,
    head: int,
    spec: TuringSpec,
    steps: int,
    out: bytearray,
) -> tuple[int, int]:
    """Fast periodic-tape simulation recording packed per-step events.

    ``colors`` holds numeric colors (1-based) and is mutated in place.
    ``out`` must hold 4*steps bytes; step i records
    (cell written, color written, new state, new head index).
    Kept in pure Python on purpose: this is the reference route the
    cellular engines are checked against.
    """
    ncolor, nstate, nmove = numeric_rule_tables(spec)
    L = len(colors)
    if L > 256:
        raise ValueError("packed events support tapes up to 256 cells")
    if len(out) < 4 * steps:
        raise ValueError("event buffer too small")
    j = 0
    for _ in range(steps):
        k = (state << 2) | colors[head]
        nc = ncolor[k]
        colors[head] = nc
        out[j] = head
        out[j + 1] = nc
        ns = nstate[k]
        out[j + 2] = ns
        state = ns
        head += nmove[k]
        if head >= L:
            head -= L
        elif head < 0:
            head += L
        out[j + 3] = head
        j += 4
    return state, head
