"""Tuple <-> integer codecs and base-b digit primitives.

Three bijective schemes:

* ``godel``       -- prime-power code for unbounded tuples:
                     n = p1^t0 * p2^t1 * ... with p_i the i-th prime.
* ``max_element`` -- positional code in base b (every element < b):
                     n = t0 + t1*b + t2*b^2 + ...
* ``max_bit``     -- positional code in base 2^l (every element < 2^l),
                     the compact choice for packed transition tables.

Tuples are little-endian throughout: element i is the coefficient of the
i-th power.  Everything is arbitrary precision and pure; values are safe
to share between tasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

GODEL = "godel"
MAX_ELEMENT = "max_element"
MAX_BIT = "max_bit"
_KINDS = (GODEL, MAX_ELEMENT, MAX_BIT)


class EncodingRangeError(ValueError):
    """A tuple element is out of range for the chosen scheme."""


class DecodeError(ValueError):
    """The integer has no preimage under the chosen scheme."""


def ceil_log2(n: int) -> int:
    """Smallest k with 2^k >= n, exact integer arithmetic (n >= 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class EncodingScheme:
    """One of the three codecs plus its base/width parameter.

    ``base_or_bitwidth`` is the base b for max_element (>= 2), the bit
    width l for max_bit (>= 1), and unused for godel.
    """

    kind: str
    base_or_bitwidth: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.kind == MAX_ELEMENT:
            if self.base_or_bitwidth is None or self.base_or_bitwidth < 2:
                raise ValueError("max_element needs a base >= 2")
        elif self.kind == MAX_BIT:
            if self.base_or_bitwidth is None or self.base_or_bitwidth < 1:
                raise ValueError("max_bit needs a bit width >= 1")

    @classmethod
    def godel(cls) -> "EncodingScheme":
        return cls(GODEL)

    @classmethod
    def max_element(cls, base: int) -> "EncodingScheme":
        return cls(MAX_ELEMENT, base)

    @classmethod
    def max_bit(cls, bitwidth: int) -> "EncodingScheme":
        return cls(MAX_BIT, bitwidth)

    @classmethod
    def max_bit_for(cls, n_max: int) -> "EncodingScheme":
        """Width l = ceil(log2(n_max)) + 1; deliberately one bit generous
        for non-power values."""
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        return cls(MAX_BIT, ceil_log2(n_max) + 1)


@dataclass(frozen=True)
class DigitAddress:
    """A digit position in a base-b expansion, counted from the
    least-significant digit (position 0)."""

    position: int
    base: int

    def __post_init__(self):
        if self.position < 0:
            raise ValueError("position must be >= 0")
        if self.base < 2:
            raise ValueError("base must be >= 2")

    def extract(self, n: int) -> int:
        return digit_at(n, self.position, self.base)


def first_primes(k: int) -> list[int]:
    """The first k primes via a plain sieve."""
    if k <= 0:
        return []
    # p_k < k (ln k + ln ln k) for k >= 6; small k padded by the constant
    bound = 15
    if k >= 6:
        bound = int(k * (math.log(k) + math.log(math.log(k)))) + 10
    while True:
        sieve = bytearray([1]) * (bound + 1)
        sieve[0:2] = b"\x00\x00"
        for i in range(2, math.isqrt(bound) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytes(len(range(i * i, bound + 1, i)))
        primes = [i for i, flag in enumerate(sieve) if flag]
        if len(primes) >= k:
            return primes[:k]
        bound *= 2


def digit_at(n: int, position: int, base: int) -> int:
    """Digit at ``position`` of n's base-``base`` expansion, 0 beyond the
    most significant digit."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if position < 0:
        raise ValueError("position must be >= 0")
    if base < 2:
        raise ValueError("base must be >= 2")
    return (n // base**position) % base


def digit_length(v: int, base: int) -> int:
    """Number of base-``base`` digits of v; exact (no float logs).
    digit_length(0) := 1 by convention."""
    if v < 0:
        raise ValueError("v must be >= 0")
    if base < 2:
        raise ValueError("base must be >= 2")
    if v == 0:
        return 1
    length = 0
    while v:
        v //= base
        length += 1
    return length


def digits(n: int, base: int, length: int | None = None) -> tuple[int, ...]:
    """Little-endian digit tuple of n, zero-padded to ``length`` if given."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = []
    while n:
        n, d = divmod(n, base)
        out.append(d)
    if not out:
        out.append(0)
    if length is not None:
        if len(out) > length:
            raise ValueError(f"{len(out)} digits do not fit in length {length}")
        out.extend([0] * (length - len(out)))
    return tuple(out)


def from_digits(ds: Iterable[int], base: int) -> int:
    """Inverse of :func:`digits` (little-endian)."""
    n = 0
    for i, d in enumerate(ds):
        if not 0 <= d < base:
            raise ValueError(f"digit {d} out of range for base {base}")
        n += d * base**i
    return n


def _check_tuple(values: Sequence[int], scheme: EncodingScheme) -> None:
    if len(values) == 0:
        raise ValueError("cannot encode an empty tuple")
    for v in values:
        if v < 0:
            raise EncodingRangeError(f"element {v} is negative")
    if scheme.kind == MAX_ELEMENT:
        base = scheme.base_or_bitwidth
        for v in values:
            if v >= base:
                raise EncodingRangeError(f"element {v} >= base {base}")
    elif scheme.kind == MAX_BIT:
        limit = 1 << scheme.base_or_bitwidth
        for v in values:
            if v >= limit:
                raise EncodingRangeError(
                    f"element {v} needs more than {scheme.base_or_bitwidth} bits"
                )


def encode_tuple(values: Sequence[int], scheme: EncodingScheme) -> int:
    """Encode a tuple of non-negative integers into its unique code."""
    _check_tuple(values, scheme)
    if scheme.kind == GODEL:
        n = 1
        for p, e in zip(first_primes(len(values)), values):
            n *= p**e
        return n
    if scheme.kind == MAX_ELEMENT:
        return from_digits(values, scheme.base_or_bitwidth)
    # max_bit: positional code in base 2^l, i.e. bit-field packing
    l = scheme.base_or_bitwidth
    n = 0
    for i, v in enumerate(values):
        n |= v << (i * l)
    return n


def decode_tuple(n: int, scheme: EncodingScheme, length: int) -> tuple[int, ...]:
    """Invert :func:`encode_tuple`; ``length`` fixes the tuple arity."""
    if length < 1:
        raise ValueError("length must be >= 1")
    if n < 0:
        raise DecodeError("codes are non-negative")
    if scheme.kind == GODEL:
        if n < 1:
            raise DecodeError("0 is not a Godel code")
        out = []
        rest = n
        for p in first_primes(length):
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            out.append(e)
        if rest != 1:
            raise DecodeError(
                f"{n} has prime factors outside the first {length} primes"
            )
        return tuple(out)
    if scheme.kind == MAX_ELEMENT:
        base = scheme.base_or_bitwidth
        if n >= base**length:
            raise DecodeError(f"{n} does not fit in {length} base-{base} digits")
        return digits(n, base, length)
    l = scheme.base_or_bitwidth
    if n >= 1 << (l * length):
        raise DecodeError(f"{n} does not fit in {length} fields of {l} bits")
    mask = (1 << l) - 1
    return tuple((n >> (i * l)) & mask for i in range(length))
