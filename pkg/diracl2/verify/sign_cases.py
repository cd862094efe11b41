# diracl2/verify/sign_cases.py
"""
Sign bookkeeping for the scalar part of bar(e_A) e_i e_B bar(e_j), i != j.

The scalar part is nonzero only when B = A xor {i, j}; that pairing splits
into four families by membership of i and j in A:

    c1: i in A, j not in A      (A - i == B - j)
    c2: i not in A, j in A      (A + i == B + j)
    c3: i, j in A               (A - i == B + j)
    c4: i, j not in A           (A + i == B - j)

Positions are 1-based within the set named.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from ..algebra.blades import blade_sign, grade, involution_sign

CASES = ("c1", "c2", "c3", "c4")


def bit(i: int) -> int:
    return 1 << (i - 1)


def position(mask: int, i: int) -> int:
    """1-based rank of generator i inside the set `mask` (i must belong to it)."""
    return grade(mask & (bit(i) - 1)) + 1


def above(mask: int, i: int) -> int:
    """Number of generators in `mask` strictly greater than i."""
    return grade(mask >> i)


def bar_sign(mask: int) -> int:
    return involution_sign(grade(mask), "bar")


def case_of(A: int, i: int, j: int) -> str:
    in_i = bool(A & bit(i))
    in_j = bool(A & bit(j))
    if in_i and not in_j:
        return "c1"
    if not in_i and in_j:
        return "c2"
    if in_i and in_j:
        return "c3"
    return "c4"


def partner(A: int, i: int, j: int) -> int:
    return A ^ bit(i) ^ bit(j)


def brute_scalar(A: int, i: int, B: int, j: int) -> int:
    """[bar(e_A) e_i e_B bar(e_j)]_0 by direct blade products (0, +1 or -1)."""
    s = bar_sign(A) * -1  # bar(e_j) = -e_j for j >= 1
    m = A
    for step in (bit(i), B, bit(j)):
        s *= blade_sign(m, step)
        m ^= step
    return s if m == 0 else 0


def _flip_sign(mask: int, k: int) -> int:
    """Sign of e_mask e_k as a function of membership of k."""
    if mask & bit(k):
        e = grade(mask) - position(mask, k) + 1
    else:
        e = above(mask, k)
    return -1 if e & 1 else 1


def general_sign(A: int, i: int, j: int) -> int:
    """Closed form valid for every family: -s(A) * sigma(A, i) * sigma(B, j) * s(C), C = A xor i."""
    B = partner(A, i, j)
    C = A ^ bit(i)
    return -bar_sign(A) * _flip_sign(A, i) * _flip_sign(B, j) * bar_sign(C)


def _parity(e: int) -> int:
    return -1 if e & 1 else 1


def derived_exponent(A: int, i: int, j: int) -> Tuple[str, int]:
    """Per-family exponent of -1 matching the direct products, for either order of i, j."""
    case = case_of(A, i, j)
    B = partner(A, i, j)
    if case == "c1":
        r = grade(A)
        return case, r + 1 + position(A, i) + position(B, j)
    if case == "c2":
        r = grade(A)
        return case, r + above(A, i) + above(B, j)
    if case == "c3":
        r = grade(B)
        return case, r + position(A, i) + position(A, j) + (1 if i > j else 0)
    r = grade(A)
    return case, r + position(B, i) + position(B, j) + (1 if i > j else 0)


def derived_sign(A: int, i: int, j: int) -> int:
    return _parity(derived_exponent(A, i, j)[1])


def printed_exponent(A: int, i: int, j: int) -> Tuple[str, int, str]:
    """
    The aggregate exponents as commonly written for the four families
    (r^2 + 1 - p(i) - p(j), r^2 + 1, r^2 - h(j) - h(i), r^2 - h(j) - h(i)),
    with p and h read as positions in A (or B for the indices that live there).
    """
    case = case_of(A, i, j)
    B = partner(A, i, j)
    if case == "c1":
        r = grade(A)
        return case, r * r + 1 - position(A, i) - position(B, j), "r^2+1-p(i)-p(j)"
    if case == "c2":
        r = grade(A)
        return case, r * r + 1, "r^2+1"
    if case == "c3":
        r = grade(B)
        return case, r * r - position(A, j) - position(A, i), "r^2-h(j)-h(i)"
    r = grade(A)
    return case, r * r - position(B, j) - position(B, i), "r^2-h(j)-h(i)"


def printed_sign(A: int, i: int, j: int) -> int:
    return _parity(printed_exponent(A, i, j)[1])


def admissible_triples(n: int) -> Iterator[Tuple[int, int, int, int]]:
    """All (A, B, i, j) with i != j and B = A xor {i, j}."""
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for A in range(1 << n):
                yield A, partner(A, i, j), i, j


@lru_cache(maxsize=None)
def cross_sign_vector(n: int, i: int, j: int) -> Tuple[np.ndarray, np.ndarray]:
    """(partner index, derived sign) for every A, for vectorized sums over A."""
    partners = np.array([partner(A, i, j) for A in range(1 << n)], dtype=np.int64)
    signs = np.array([derived_sign(A, i, j) for A in range(1 << n)], dtype=np.float64)
    partners.setflags(write=False)
    signs.setflags(write=False)
    return partners, signs


@lru_cache(maxsize=None)
def diagonal_mask(n: int, i: int) -> np.ndarray:
    """Blades A with |A| + [i in A] odd: the ones feeding the diagonal Hessian term for axis i."""
    m = np.array([(grade(A) + (1 if A & bit(i) else 0)) & 1 for A in range(1 << n)], dtype=bool)
    m.setflags(write=False)
    return m


def describe_triple(n: int, A: int, B: int, i: int, j: int) -> Dict[str, object]:
    def idx(mask: int):
        return [k for k in range(1, n + 1) if mask & bit(k)]
    return {"A": idx(A), "B": idx(B), "i": i, "j": j}


def first_mismatch(n: int, case: str) -> Optional[Dict[str, object]]:
    for A, B, i, j in admissible_triples(n):
        if case_of(A, i, j) == case and printed_sign(A, i, j) != brute_scalar(A, i, B, j):
            return describe_triple(n, A, B, i, j)
    return None
