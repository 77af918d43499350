"""Fixed effective enumerations of N x N, Q, Q(i) and rational intervals."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def unpair(n: int):
    """Inverse Cantor pairing: 0 -> (0, 0), 1 -> (0, 1), 2 -> (1, 0), 3 -> (0, 2), ..."""
    d = (math.isqrt(8 * n + 1) - 1) // 2
    i = n - d * (d + 1) // 2
    return i, d - i


def pair(i: int, j: int) -> int:
    d = i + j
    return d * (d + 1) // 2 + i


@lru_cache(maxsize=4096)
def _calkin_wilf(m: int) -> Fraction:
    """m-th positive rational (m >= 1) of the Calkin-Wilf sequence 1, 1/2, 2, 1/3, 3/2, ..."""
    # read the bits of m below the leading one: 0 -> left child q/(1+q), 1 -> right child q+1
    q = Fraction(1)
    for bit in bin(m)[3:]:
        q = q + 1 if bit == "1" else q / (1 + q)
    return q


def rational_of_index(n: int) -> Fraction:
    """0, 1, -1, 1/2, -1/2, 2, -2, 1/3, ... (zig-zag over the Calkin-Wilf sequence)."""
    if n < 0:
        raise ValueError("index must be non-negative")
    if n == 0:
        return Fraction(0)
    q = _calkin_wilf((n + 1) // 2)
    return q if n % 2 else -q


def gaussian_of_index(n: int):
    """n-th Gaussian rational as (re, im), via pairing of two rational indices."""
    i, j = unpair(n)
    return rational_of_index(i), rational_of_index(j)


@lru_cache(maxsize=1024)
def interval_of_index(n: int):
    """n-th rational interval (a, b) with a < b; index 0 is (0, 1)."""
    count = -1
    m = 0
    while True:
        i, j = unpair(m)
        a, b = rational_of_index(i), rational_of_index(j)
        if a < b:
            count += 1
            if count == n:
                return a, b
        m += 1
