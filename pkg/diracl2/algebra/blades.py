# diracl2/algebra/blades.py
"""
Basis blades e_A of the real Clifford algebra with e_i^2 = -1.

A blade is a subset A of {1..n}; generator e_k is stored at bit k-1 and the
empty mask is the unit e_0.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Tuple

import numpy as np

from ..config import MAX_N, SIGN_TABLE_MAX_N
from ..errors import DimensionError


class Involution(str, enum.Enum):
    INVERSION = "inversion"
    REVERSION = "reversion"
    BAR = "bar"


def grade(mask: int) -> int:
    return bin(mask).count("1")


def check_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or not 0 <= int(n) <= MAX_N:
        raise DimensionError(f"algebra parameter n={n!r} outside 0..{MAX_N}")
    return int(n)


def reorder_swaps(a: int, b: int) -> int:
    """Transpositions needed to bring e_A e_B into ascending generator order."""
    a >>= 1
    total = 0
    while a:
        total += grade(a & b)
        a >>= 1
    return total


def blade_sign(a: int, b: int) -> int:
    """Sign of e_A e_B = sign * e_{A xor B}; each shared generator squares to -1."""
    flips = reorder_swaps(a, b) + grade(a & b)
    return -1 if flips & 1 else 1


def involution_sign(r: int, kind: Involution | str) -> int:
    """Sign an involution applies to a grade-r blade (grade 0 is fixed by all three)."""
    kind = Involution(kind)
    if kind is Involution.INVERSION:
        e = r
    elif kind is Involution.REVERSION:
        e = r * (r - 1) // 2
    else:
        e = r * (r + 1) // 2
    return -1 if e & 1 else 1


@lru_cache(maxsize=None)
def grades(n: int) -> np.ndarray:
    """Grade of every mask 0..2^n-1."""
    masks = np.arange(1 << n)
    out = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        out += (masks >> k) & 1
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def involution_signs(n: int, kind: str) -> np.ndarray:
    signs = np.array([involution_sign(int(r), kind) for r in grades(n)], dtype=np.int64)
    signs.setflags(write=False)
    return signs


def sign_row(a: int, n: int) -> np.ndarray:
    """Signs of e_A e_B for every B, vectorized over B."""
    b = np.arange(1 << n)
    g = grades(n)
    flips = g[a & b].copy()
    shifted = a >> 1
    while shifted:
        flips += g[shifted & b]
        shifted >>= 1
    return np.where(flips & 1, -1, 1).astype(np.int64)


def sign_column(b: int, n: int) -> np.ndarray:
    """Signs of e_A e_B for every A, vectorized over A."""
    a = np.arange(1 << n)
    g = grades(n)
    flips = g[a & b].copy()
    for k in range(1, n):
        flips += g[(a >> k) & b]
    return np.where(flips & 1, -1, 1).astype(np.int64)


@lru_cache(maxsize=SIGN_TABLE_MAX_N + 1)
def _cached_table(n: int) -> np.ndarray:
    table = np.stack([sign_row(a, n) for a in range(1 << n)]).astype(np.int8)
    table.setflags(write=False)
    return table


def sign_table(n: int) -> np.ndarray:
    """Full 2^n x 2^n sign table; only precomputed for n <= SIGN_TABLE_MAX_N."""
    n = check_n(n)
    if n > SIGN_TABLE_MAX_N:
        raise DimensionError(f"sign table limited to n <= {SIGN_TABLE_MAX_N}, got {n}")
    return _cached_table(n)


def signs_for(a: int, n: int) -> np.ndarray:
    """Row of the sign table, cached when small enough."""
    if n <= SIGN_TABLE_MAX_N:
        return _cached_table(n)[a].astype(np.int64)
    return sign_row(a, n)


_LABEL = re.compile(r"^e(0|[1-9]+)$")


@dataclass(frozen=True, order=True)
class Blade:
    n: int
    mask: int

    def __post_init__(self) -> None:
        check_n(self.n)
        if self.mask < 0 or self.mask >> self.n:
            raise DimensionError(f"blade mask {self.mask:#b} has bits outside 1..{self.n}")

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "Blade":
        mask = 0
        for k in indices:
            if not 1 <= int(k) <= n:
                raise DimensionError(f"generator index {k} outside 1..{n}")
            mask |= 1 << (int(k) - 1)
        return cls(n, mask)

    @classmethod
    def parse(cls, n: int, label: str) -> "Blade":
        """'e0' -> unit, 'e13' -> e_1 e_3 (single-digit generator indices)."""
        m = _LABEL.match(label.strip().lower())
        if not m:
            raise DimensionError(f"bad blade label {label!r}")
        digits = m.group(1)
        if digits == "0":
            return cls(n, 0)
        idx = [int(ch) for ch in digits]
        if len(set(idx)) != len(idx):
            raise DimensionError(f"repeated generator in {label!r}")
        return cls.from_indices(n, idx)

    @classmethod
    def unit(cls, n: int) -> "Blade":
        return cls(n, 0)

    @classmethod
    def generator(cls, n: int, i: int) -> "Blade":
        """e_i for 1 <= i <= n; e_0 for i == 0."""
        return cls(n, 0) if i == 0 else cls.from_indices(n, [i])

    @property
    def grade(self) -> int:
        return grade(self.mask)

    def indices(self) -> Tuple[int, ...]:
        return tuple(k + 1 for k in range(self.n) if (self.mask >> k) & 1)

    def label(self) -> str:
        if self.mask == 0:
            return "e0"
        return "e" + "".join(str(k) for k in self.indices())

    def __str__(self) -> str:
        return self.label()


def blade_product(a: Blade, b: Blade) -> Tuple[int, Blade]:
    """e_A e_B = sign * e_{A xor B}."""
    if a.n != b.n:
        raise DimensionError(f"blades from different algebras (n={a.n} vs n={b.n})")
    return blade_sign(a.mask, b.mask), Blade(a.n, a.mask ^ b.mask)


def all_blades(n: int) -> Tuple[Blade, ...]:
    return tuple(Blade(n, m) for m in range(1 << check_n(n)))
