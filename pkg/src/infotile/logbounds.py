"""Exact rational constants separating logarithms of consecutive integers.

Everything here is integer arithmetic: a claim p/q > log2(k) is decided as
2**p > k**q, never through floating point.
"""
from __future__ import annotations

from fractions import Fraction

# Constants for the uniform-cardinality-at-most-2-given-at-most-3 gadget:
# P3/Q3 < log2(3) < P4/Q4, chosen so no integer y satisfies
# P3/Q3 < log2(y)/log2(3) < P4/Q4.  Derived by exhaustive integer-power
# search (see verify_le23_constants and the tests).
LE23_CONSTANTS = (3, 2, 8, 5)


def _cmp_pow(p: int, q: int, k: int) -> int:
    """Sign of p/q - log2(k), by comparing 2**p with k**q."""
    lhs = 1 << p
    rhs = k**q
    return (lhs > rhs) - (lhs < rhs)


def pick_alpha(k: int) -> Fraction:
    """The simplest rational strictly between log2(k-1) and log2(k).

    Minimal denominator (and for it, the unique numerator), found by a
    Stern-Brocot mediant walk with exact integer comparisons.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    lo_n, lo_d = 0, 1  # lower endpoint approximation (a fraction <= log(k-1))
    hi_n, hi_d = 1, 0  # represents +infinity
    while True:
        p, q = lo_n + hi_n, lo_d + hi_d
        if _cmp_pow(p, q, k - 1) <= 0:  # p/q <= log2(k-1)
            lo_n, lo_d = p, q
        elif _cmp_pow(p, q, k) >= 0:  # p/q >= log2(k)
            hi_n, hi_d = p, q
        else:
            assert (k - 1) ** q < 2**p < k**q
            return Fraction(p, q)


def pick_log_bounds(k: int) -> tuple[int, int]:
    """Integers (p, q) with log2(k-1) < p/q < log2(k), using q = k.

    The open interval (k*log2(k-1), k*log2(k)) has length k*log2(k/(k-1)),
    which exceeds 1 for every k >= 2, so an integer p always exists; the
    smallest one is taken.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    q = k
    low = (k - 1) ** q
    p = low.bit_length()  # smallest p with 2**p > (k-1)**q
    assert low < (1 << p) < k**q
    return p, q


def verify_log_bounds(p: int, q: int, k: int) -> bool:
    """Exact check of (k-1)**q < 2**p < k**q."""
    return (k - 1) ** q < (1 << p) < k**q


def verify_le23_constants(p3: int, q3: int, p4: int, q4: int) -> bool:
    """Exact verification of the LE23 constants.

    Requires p3/q3 < log2(3) < p4/q4 and that no positive integer y has
    log2(y)/log2(3) in the open interval (p3/q3, p4/q4), i.e. no y with
    y**q3 > 3**p3 and y**q4 < 3**p4.  Only finitely many y can satisfy the
    second inequality, so the scan below is exhaustive.
    """
    if not ((1 << p3) < 3**q3 and (1 << p4) > 3**q4):
        return False
    y = 1
    while y**q4 < 3**p4:
        if y**q3 > 3**p3:
            return False
        y += 1
    return True


assert verify_le23_constants(*LE23_CONSTANTS)
