"""Brute-force reference routes for the verification suites.

Everything here recomputes a quantity by the most direct means available
(per-value digit extraction, per-string symbol counting, literal
re-summation) so the production paths in :mod:`hierarchy` and the engines
have something independent to be compared against.  Keep these free of
the code they check.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

import numpy as np


def digit_sums_direct(base: int, n: int) -> np.ndarray:
    """Digit sums of 0 .. base^n - 1 by per-position extraction."""
    size = base ** n
    values = np.arange(size, dtype=np.int64)
    total = np.zeros(size, dtype=np.int64)
    for r in range(n):
        total += (values // base ** r) % base
    return total


def digit_sum_scalar(v: int, base: int) -> int:
    """Digit sum of one value through its printed representation when the
    base allows it, else by repeated division."""
    if base == 2:
        return bin(v).count("1")
    if base == 10:
        return sum(int(ch) for ch in str(v))
    total = 0
    while v:
        v, d = divmod(v, base)
        total += d
    return total


def ones_plogp_average_direct(n: int) -> float:
    """Average one-bit p*log(p) term over all length-n binary strings,
    counting ones in the rendered string of each value."""
    log_n = math.log(n)
    terms = []
    for v in range(1 << n):
        s = format(v, "b").count("1")
        if s:
            terms.append(s * (math.log(s) - log_n) / n)
    return math.fsum(terms) / (1 << n)


def string_entropy_direct(v: int, n: int, base: int) -> float:
    """Shannon entropy of one string via explicit symbol counting."""
    digits = []
    for _ in range(n):
        v, d = divmod(v, base)
        digits.append(d)
    counts = Counter(digits)
    return -math.fsum((c / n) * math.log(c / n) for c in counts.values())


def power_sum_free_energy_direct(values: Sequence[int], lam: float,
                                 T: float, N: float) -> float:
    """Literal term-by-term evaluation of T * sum s^lam - (lam/(1-lam)) log N."""
    acc = 0.0
    for s in values:
        if s > 0:
            acc += T * float(s) ** lam
    return acc - lam / (1.0 - lam) * math.log(N)


def genome_per_digit_direct(genome_entries: Sequence[int], v: int, n: int) -> int:
    """Apply a 16-entry map to every base-16 digit of v independently."""
    out = 0
    for i in range(n):
        out += genome_entries[(v >> (4 * i)) & 15] << (4 * i)
    return out
