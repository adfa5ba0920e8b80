"""Lexicographic string dictionaries, integer-side tabulation of string
maps, concatenation recursions with affine reproducing maps, digit-sum
machinery, and the entropy / free-energy formulas built on digit-sums.

Conventions: strings are little-endian digit tuples (element i is the
coefficient of base^i), matching the positional code
p(s) = s0 + b*s1 + b^2*s2 + ...  The v-th string of the order-n
dictionary is therefore the base-b expansion of v zero-padded to n
digits, and row r of the dictionary matrix is a counter of period
b^(r+1).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .encodings import digit_at, digits, from_digits

DEFAULT_MAX_CELLS = 1 << 22


class BudgetError(ValueError):
    """Materializing the request would exceed the configured budget."""


# --- dictionaries -------------------------------------------------------------

@dataclass(frozen=True)
class Dictionary:
    """All base**length strings of a given length, in counting order."""

    base: int
    length: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if self.length < 1:
            raise ValueError("length must be >= 1")

    def __len__(self) -> int:
        return self.base ** self.length

    def strings(self) -> Iterator[tuple[int, ...]]:
        """Little-endian digit tuples for v = 0 .. b^n - 1."""
        for v in range(len(self)):
            yield digits(v, self.base, self.length)

    def string(self, v: int) -> tuple[int, ...]:
        return digits(v, self.base, self.length)

    def rows(self, max_cells: int = DEFAULT_MAX_CELLS) -> list[list[int]]:
        """The length x b^n matrix; row r is digit r of every v."""
        total = self.length * len(self)
        if total > max_cells:
            raise BudgetError(f"{total} cells exceed the budget {max_cells}")
        return [
            [digit_at(v, r, self.base) for v in range(len(self))]
            for r in range(self.length)
        ]


def dictionary_rows(base: int, length: int,
                    max_cells: int = DEFAULT_MAX_CELLS) -> list[list[int]]:
    return Dictionary(base, length).rows(max_cells)


def render_string(s: Sequence[int]) -> str:
    """Human order (most significant digit first)."""
    return "".join(str(d) for d in reversed(s))


# --- integer-side tabulation of string maps -----------------------------------

def poly_encode(s: Sequence[int], base: int) -> int:
    return from_digits(s, base)


def poly_decode(v: int, base: int, length: int) -> tuple[int, ...]:
    return digits(v, base, length)


def cap_tabulate(g: Callable[[tuple[int, ...]], Sequence[int]], base: int,
                 length: int, max_size: int = DEFAULT_MAX_CELLS) -> list[int]:
    """Conjugate a length-preserving string map through the positional
    code: table[v] = p(g(p^-1(v))) for every v in 0 .. b^n - 1."""
    size = base ** length
    if size > max_size:
        raise BudgetError(f"{size} entries exceed the budget {max_size}")
    table = []
    for v in range(size):
        image = tuple(g(poly_decode(v, base, length)))
        if len(image) != length:
            raise ValueError(
                f"string map changed length: {length} -> {len(image)}"
            )
        table.append(poly_encode(image, base))
    return table


# --- concatenation recursion ----------------------------------------------------

Number = int | Fraction


@dataclass(frozen=True)
class AffineMap:
    """x -> a*x + c with exact (int or Fraction) coefficients."""

    a: Number
    c: Number

    def __call__(self, x: Number) -> Number:
        return self.a * x + self.c

    def label(self) -> str:
        return f"{self.a}*x+{self.c}" if self.c >= 0 else f"{self.a}*x{self.c}"


@dataclass(frozen=True)
class ReproducingMapSet:
    """The b-1 explicit maps of a base-b concatenation recursion (the
    identity block is implicit)."""

    base: int
    maps: tuple[AffineMap, ...]

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if len(self.maps) != self.base - 1:
            raise ValueError(f"need exactly {self.base - 1} maps for base {self.base}")


def shift_maps(base: int) -> ReproducingMapSet:
    """K_i(x) = x + i: the digit-sum recursion for any base."""
    return ReproducingMapSet(base, tuple(AffineMap(1, i) for i in range(1, base)))


@dataclass(frozen=True)
class HierarchySequence:
    """Materialized levels: each level is the previous one followed by its
    images under every map, so level k has b^k * |level 0| elements."""

    base: int
    levels: tuple[tuple[Number, ...], ...]

    @property
    def top(self) -> tuple[Number, ...]:
        return self.levels[-1]


def expand_recursion(maps: ReproducingMapSet, sigma0: Sequence[Number],
                     k: int, max_elements: int = DEFAULT_MAX_CELLS) -> HierarchySequence:
    """Apply the concatenation recursion k times starting from sigma0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if not sigma0:
        raise ValueError("sigma0 must be non-empty")
    if len(sigma0) * maps.base ** k > max_elements:
        raise BudgetError(
            f"{len(sigma0) * maps.base ** k} elements exceed the budget {max_elements}"
        )
    levels = [tuple(sigma0)]
    for _ in range(k):
        prev = levels[-1]
        nxt = list(prev)
        for f in maps.maps:
            nxt.extend(f(x) for x in prev)
        levels.append(tuple(nxt))
    return HierarchySequence(maps.base, tuple(levels))


@dataclass(frozen=True)
class RecursionVerdict:
    passed: bool
    levels_checked: int
    first_failure_level: int | None = None
    first_failure_index: int | None = None

    def to_doc(self) -> dict:
        return {
            "pass": self.passed,
            "first_failure_level": self.first_failure_level,
            "first_failure_index": self.first_failure_index,
        }


def verify_recursion(maps: ReproducingMapSet, sigma0: Sequence[Number],
                     oracle: Sequence[Number]) -> RecursionVerdict:
    """Check that the recursion regenerates ``oracle`` level by level.

    The oracle length must be |sigma0| * b^k for some k; each level must
    equal the oracle prefix of its size, so a failure reports the first
    level and index where the two disagree.
    """
    size = len(sigma0)
    if size == 0:
        raise ValueError("sigma0 must be non-empty")
    k = 0
    while size < len(oracle):
        size *= maps.base
        k += 1
    if size != len(oracle):
        raise ValueError(
            f"oracle length {len(oracle)} is not |sigma0| * {maps.base}^k"
        )
    seq = expand_recursion(maps, sigma0, k, max_elements=max(len(oracle), 1))
    for level_index, level in enumerate(seq.levels):
        for i, value in enumerate(level):
            if value != oracle[i]:
                return RecursionVerdict(False, level_index, level_index, i)
    return RecursionVerdict(True, k)


def half_integer_grid(lo: int = -4, hi: int = 4) -> tuple[Fraction, ...]:
    """Integers and half-integers in [lo, hi]."""
    return tuple(Fraction(n, 2) for n in range(2 * lo, 2 * hi + 1))


def search_affine_maps(oracle: Sequence[Number], base: int,
                       sigma0: Sequence[Number] = (0,),
                       grid: Sequence[Number] | None = None) -> list[ReproducingMapSet]:
    """Bounded grid search for affine map sets that regenerate ``oracle``.

    Candidates take each of the b-1 maps' (a, c) from ``grid`` (default:
    integers and half-integers in [-4, 4]).  Exhaustive and exact, so the
    cost grows as |grid|^(2(b-1)); meant for small bases.
    """
    if grid is None:
        grid = half_integer_grid()
    candidates = [AffineMap(a, c) for a in grid for c in grid]
    # screen each slot against its level-1 block before the full check
    pools = []
    for i in range(1, base):
        want = tuple(oracle[i * len(sigma0): (i + 1) * len(sigma0)])
        if len(want) < len(sigma0):
            pools.append(candidates)
        else:
            pools.append([
                f for f in candidates
                if all(f(x) == w for x, w in zip(sigma0, want))
            ])
    found = []
    for maps in itertools.product(*pools):
        mapset = ReproducingMapSet(base, tuple(maps))
        if verify_recursion(mapset, sigma0, oracle).passed:
            found.append(mapset)
    return found


# --- digit sums -----------------------------------------------------------------

def digit_sum(v: int, base: int) -> int:
    """Sum of base-b digits of v."""
    if v < 0:
        raise ValueError("v must be >= 0")
    if base < 2:
        raise ValueError("base must be >= 2")
    total = 0
    while v:
        v, d = divmod(v, base)
        total += d
    return total


def digit_sum_level(base: int, n: int,
                    max_elements: int = DEFAULT_MAX_CELLS) -> list[int]:
    """Digit sums of 0 .. b^n - 1, generated by the concatenation
    recursion with the shift maps (not by per-value summation)."""
    seq = expand_recursion(shift_maps(base), (0,), n, max_elements)
    return list(seq.top)


# --- entropy over a level ---------------------------------------------------------

def ones_term(v: int, n: int) -> float:
    """p*log(p) contribution of the one-bits of a length-n binary string,
    written through its digit sum: s*(log s - log n)/n, with 0 log 0 = 0."""
    if not 0 <= v < 1 << n:
        raise ValueError("v must fit in n bits")
    s = digit_sum(v, 2)
    if s == 0:
        return 0.0
    return s * (math.log(s) - math.log(n)) / n


def string_entropy(v: int, n: int, base: int = 2) -> float:
    """Shannon entropy (nats) of the symbol frequencies of the v-th
    length-n base-b string.  The binary path runs on the digit sum alone;
    higher bases count symbols explicitly."""
    if base == 2:
        if not 0 <= v < 1 << n:
            raise ValueError("v must fit in n bits")
        s = digit_sum(v, 2)
        total = 0.0
        for c in (s, n - s):
            if c:
                p = c / n
                total -= p * math.log(p)
        return total
    counts: dict[int, int] = {}
    for d in digits(v, base, n):
        counts[d] = counts.get(d, 0) + 1
    return -sum((c / n) * math.log(c / n) for c in counts.values())


def level_entropy(n: int, max_elements: int = DEFAULT_MAX_CELLS) -> float:
    """Average one-bit p*log(p) term over all 2^n binary strings, computed
    from the digit-sum level sequence alone:
    ( <s log s> - log(n) <s> ) / n  with averages over the level."""
    level = digit_sum_level(2, n, max_elements)
    total_slogs = math.fsum(s * math.log(s) for s in level if s)
    total_s = sum(level)
    return (total_slogs - math.log(n) * total_s) / (n * len(level))


# --- free energy -------------------------------------------------------------------

@dataclass(frozen=True)
class FreeEnergyParams:
    """Exponent and temperatures for the power-sum free energy.

    ``lam`` plays the role of the temperature ratio T/T0 = 1 - deltaT/T;
    the offset term is f(N, lam) = (lam/(1-lam)) * log N.  The temperature
    fields are carried verbatim and not cross-checked against lam (the
    bookkeeping is not closed; see the module tests)."""

    lam: float
    N: float
    T: float = 1.0
    T0: float | None = None
    deltaT: float | None = None

    def __post_init__(self):
        if self.lam == 1.0:
            raise ValueError("lam = 1 is the Shannon limit; use string_entropy")
        if self.N < 1:
            raise ValueError("N must be >= 1")


@dataclass(frozen=True)
class FreeEnergyResult:
    F: float
    f: float
    renyi_entropy: float
    degenerate: bool


def offset_term(N: float, lam: float) -> float:
    """f(N, lam) = (lam / (1 - lam)) * log N."""
    if lam == 1.0:
        raise ValueError("lam must differ from 1")
    return lam / (1.0 - lam) * math.log(N)


def renyi_entropy(probs: Sequence[float], lam: float) -> float:
    """log(sum p^lam) / (1 - lam) over the support of the distribution."""
    if lam == 1.0:
        raise ValueError("lam must differ from 1")
    support = [p for p in probs if p > 0]
    if not support:
        raise ValueError("distribution has empty support")
    return math.log(math.fsum(p ** lam for p in support)) / (1.0 - lam)


def shannon_entropy(probs: Sequence[float]) -> float:
    return -math.fsum(p * math.log(p) for p in probs if p > 0)


def renyi_free_energy(values: Sequence[int],
                      params: FreeEnergyParams) -> FreeEnergyResult:
    """F = T * sum_i s_i^lam - f(N, lam) over a digit-sum sequence, plus
    the power-sum entropy of the normalized sequence for cross-reference.
    Terms with s = 0 contribute nothing; an all-zero sequence degenerates
    to F = -f and the entropy is reported as nan."""
    if any(v < 0 for v in values):
        raise ValueError("digit sums are non-negative")
    f = offset_term(params.N, params.lam)
    power_sum = math.fsum(float(v) ** params.lam for v in values if v > 0)
    total = sum(values)
    if total == 0:
        return FreeEnergyResult(F=-f, f=f, renyi_entropy=float("nan"),
                                degenerate=True)
    probs = [v / total for v in values if v > 0]
    return FreeEnergyResult(
        F=params.T * power_sum - f,
        f=f,
        renyi_entropy=renyi_entropy(probs, params.lam),
        degenerate=False,
    )


# --- symbol-class reduction -----------------------------------------------------------

def symbol_class_reduce(base: int, n: int,
                        max_size: int = DEFAULT_MAX_CELLS) -> dict[frozenset[int], tuple[int, ...]]:
    """Partition 0 .. b^n - 1 by the set of distinct symbols occurring in
    the (zero-padded) string; at most 2^b - 1 non-empty classes exist."""
    size = base ** n
    if size > max_size:
        raise BudgetError(f"{size} strings exceed the budget {max_size}")
    classes: dict[frozenset[int], list[int]] = {}
    for v in range(size):
        key = frozenset(digits(v, base, n))
        classes.setdefault(key, []).append(v)
    return {key: tuple(vs) for key, vs in classes.items()}


# --- exports ------------------------------------------------------------------------

def export_level_csv(values: Sequence[Number], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("index,value\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{v}\n")


def export_verdict_json(verdict: RecursionVerdict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(verdict.to_doc(), sort_keys=True, indent=2) + "\n")
