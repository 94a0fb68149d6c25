"""Bit-packed linear algebra over GF(2).

Bit strings are stored as Python integers (arbitrary-width machine words),
with bit index 1 referring to the most significant position of the textual
rendering: the text "101" has bit 1 = 1, bit 2 = 0, bit 3 = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np


@dataclass(frozen=True)
class BitString:
    """Fixed-length string of bits, packed into a single integer.

    ``value`` holds the bits so that ``bin(value).zfill(n)`` equals the
    textual rendering; bit j (1-based) lives at integer position n - j.
    """

    value: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"length must be positive, got {self.n}")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value {self.value} out of range for {self.n} bits")

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bitstring: {text!r}")
        return cls(int(text, 2), len(text))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        bits = list(bits)
        value = 0
        for b in bits:
            value = (value << 1) | (int(b) & 1)
        return cls(value, len(bits))

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(0, n)

    def bit(self, j: int) -> int:
        """Bit at 1-based index j (j=1 is most significant)."""
        if not 1 <= j <= self.n:
            raise IndexError(f"bit index {j} out of range 1..{self.n}")
        return (self.value >> (self.n - j)) & 1

    def weight(self) -> int:
        return self.value.bit_count()

    def to_array(self) -> np.ndarray:
        """Bits as a uint8 array, index 0 = bit 1 (most significant)."""
        return np.array([self.bit(j) for j in range(1, self.n + 1)], dtype=np.uint8)

    @classmethod
    def from_array(cls, bits: np.ndarray) -> "BitString":
        return cls.from_bits(int(b) for b in bits)

    def __xor__(self, other: "BitString") -> "BitString":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitString(self.value ^ other.value, self.n)

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")


@dataclass(frozen=True)
class Gf2System:
    """A system of parity equations dot(a, x_i) = y_i of common width n."""

    rows: Tuple[Tuple[BitString, int], ...]
    n: int

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[BitString, int]], n: int) -> "Gf2System":
        for x, _ in pairs:
            if x.n != n:
                raise ValueError(f"row width {x.n} != system width {n}")
        return cls(tuple((x, y & 1) for x, y in pairs), n)


class Underdetermined:
    """Marker result: consistent system with rank < n."""

    def __repr__(self):
        return "Underdetermined"


class Inconsistent:
    """Marker result: no solution exists."""

    def __repr__(self):
        return "Inconsistent"


UNDERDETERMINED = Underdetermined()
INCONSISTENT = Inconsistent()

SolveResult = Union[BitString, Underdetermined, Inconsistent]


def dot(a: BitString, x: BitString) -> int:
    """Inner product sum_j a_j x_j mod 2."""
    if a.n != x.n:
        raise ValueError(f"length mismatch: {a.n} vs {x.n}")
    return (a.value & x.value).bit_count() & 1


def hamming_weight(a: BitString) -> int:
    """Number of set bits |a|."""
    return a.weight()


def _eliminate(row_values: List[int], width: int) -> Tuple[List[int], List[int]]:
    """Forward elimination on packed rows, pivoting columns left to right.

    Pivot choice: first row (lowest index) whose leading set bit is in the
    current column. Returns (reduced rows, pivot column positions), columns
    counted from the most significant bit (position 0 = leftmost).
    """
    work = list(row_values)
    pivots: List[int] = []
    pivot_row = 0
    for col in range(width):
        mask = 1 << (width - 1 - col)
        found = -1
        for r in range(pivot_row, len(work)):
            if work[r] & mask:
                found = r
                break
        if found < 0:
            continue
        work[pivot_row], work[found] = work[found], work[pivot_row]
        for r in range(len(work)):
            if r != pivot_row and (work[r] & mask):
                work[r] ^= work[pivot_row]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(work):
            break
    return work, pivots


def rank(sys: Gf2System) -> int:
    """GF(2) rank of the coefficient rows."""
    return rank_ints([x.value for x, _ in sys.rows], sys.n)


def rank_ints(row_values: Sequence[int], n: int) -> int:
    """Rank of packed coefficient rows; fast path for hot loops."""
    work = list(row_values)
    r = 0
    for col in range(n - 1, -1, -1):
        mask = 1 << col
        found = -1
        for i in range(r, len(work)):
            if work[i] & mask:
                found = i
                break
        if found < 0:
            continue
        work[r], work[found] = work[found], work[r]
        piv = work[r]
        for i in range(r + 1, len(work)):
            if work[i] & mask:
                work[i] ^= piv
        r += 1
        if r == len(work):
            break
    return r


def solve(sys: Gf2System) -> SolveResult:
    """Solve dot(a, x_i) = y_i by Gaussian elimination on the augmented rows.

    Returns the unique solution when the coefficient rank is n, the
    UNDERDETERMINED marker when the system is consistent but rank < n, and
    the INCONSISTENT marker when no solution exists.
    """
    n = sys.n
    augmented = [(x.value << 1) | y for x, y in sys.rows]
    reduced, pivots = _eliminate(augmented, n + 1)
    # A pivot in the last (augmented) column means 0 = 1.
    if n in pivots:
        return INCONSISTENT
    coeff_pivots = [c for c in pivots if c < n]
    if len(coeff_pivots) < n:
        return UNDERDETERMINED
    value = 0
    for i, col in enumerate(coeff_pivots):
        # Row i has its leading bit in column col; after full reduction the
        # coefficient part is exactly that single bit.
        value |= (reduced[i] & 1) << (n - 1 - col)
    return BitString(value, n)


def independence_probability(n: int) -> float:
    """Probability that n uniform random rows of width n are independent.

    Equals prod_{j=0}^{n-1} (1 - 2^(j-n)).
    """
    if n < 1:
        raise ValueError("n must be positive")
    p = 1.0
    for j in range(n):
        p *= 1.0 - math.ldexp(1.0, j - n)
    return p
