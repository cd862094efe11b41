# diracl2/algebra/multivector.py
"""
Immutable multivectors a = sum_A x_A e_A over float64 or exact rationals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Mapping, Tuple, Union

import numpy as np

from ..errors import DimensionError, ScalarKindError
from .blades import Blade, Involution, check_n, involution_signs, signs_for

Scalar = Union[float, Fraction]


class ScalarKind(str, enum.Enum):
    FLOAT64 = "float64"
    EXACT = "exact"


def _coerce(value, kind: ScalarKind) -> Scalar:
    if kind is ScalarKind.EXACT:
        if isinstance(value, (float, np.floating)):
            raise ScalarKindError("exact multivector given a binary64 coefficient")
        if isinstance(value, (Rational, np.integer)):
            return Fraction(int(value)) if isinstance(value, np.integer) else Fraction(value)
        raise ScalarKindError(f"cannot use {type(value).__name__} as an exact coefficient")
    if isinstance(value, Fraction):
        raise ScalarKindError("float64 multivector given an exact rational coefficient")
    if not isinstance(value, (Real, np.floating, np.integer)):
        raise ScalarKindError(f"cannot use {type(value).__name__} as a float64 coefficient")
    return float(value)


@dataclass(frozen=True)
class Multivector:
    n: int
    coeffs: Tuple[Scalar, ...]
    kind: ScalarKind = ScalarKind.FLOAT64

    def __post_init__(self) -> None:
        check_n(self.n)
        if len(self.coeffs) != 1 << self.n:
            raise DimensionError(f"expected {1 << self.n} coefficients, got {len(self.coeffs)}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_coeffs(cls, n: int, coeffs: Iterable, kind: ScalarKind | str = ScalarKind.FLOAT64) -> "Multivector":
        kind = ScalarKind(kind)
        return cls(n, tuple(_coerce(c, kind) for c in coeffs), kind)

    @classmethod
    def zero(cls, n: int, kind: ScalarKind | str = ScalarKind.FLOAT64) -> "Multivector":
        kind = ScalarKind(kind)
        z = Fraction(0) if kind is ScalarKind.EXACT else 0.0
        return cls(n, (z,) * (1 << check_n(n)), kind)

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Union[Blade, int], object],
                   kind: ScalarKind | str = ScalarKind.FLOAT64) -> "Multivector":
        kind = ScalarKind(kind)
        out = list(cls.zero(n, kind).coeffs)
        for key, val in terms.items():
            mask = key.mask if isinstance(key, Blade) else int(key)
            if isinstance(key, Blade) and key.n != n:
                raise DimensionError("blade from a different algebra")
            if not 0 <= mask < (1 << n):
                raise DimensionError(f"mask {mask} outside algebra n={n}")
            out[mask] = out[mask] + _coerce(val, kind)
        return cls(n, tuple(out), kind)

    @classmethod
    def basis(cls, n: int, blade: Union[Blade, int, str], value=1,
              kind: ScalarKind | str = ScalarKind.FLOAT64) -> "Multivector":
        if isinstance(blade, str):
            blade = Blade.parse(n, blade)
        return cls.from_terms(n, {blade: value}, kind)

    @classmethod
    def scalar(cls, n: int, value, kind: ScalarKind | str = ScalarKind.FLOAT64) -> "Multivector":
        return cls.basis(n, 0, value, kind)

    # -- helpers ----------------------------------------------------------
    def _check_pair(self, other: "Multivector") -> None:
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if self.n != other.n:
            raise DimensionError(f"multivectors from different algebras (n={self.n} vs n={other.n})")
        if self.kind is not other.kind:
            raise ScalarKindError(f"cannot mix {self.kind.value} and {other.kind.value} multivectors")

    def to_array(self) -> np.ndarray:
        if self.kind is ScalarKind.EXACT:
            return np.array(self.coeffs, dtype=object)
        return np.array(self.coeffs, dtype=np.float64)

    def nonzero(self) -> Tuple[int, ...]:
        return tuple(m for m, c in enumerate(self.coeffs) if c != 0)

    def is_zero(self) -> bool:
        return not self.nonzero()

    def to_float(self) -> "Multivector":
        return Multivector(self.n, tuple(float(c) for c in self.coeffs), ScalarKind.FLOAT64)

    def to_dict(self) -> dict:
        """Nonzero terms keyed by blade label; rationals as 'p/q' strings."""
        out = {}
        for m in self.nonzero():
            c = self.coeffs[m]
            out[Blade(self.n, m).label()] = str(c) if self.kind is ScalarKind.EXACT else float(c)
        return out

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "Multivector") -> "Multivector":
        self._check_pair(other)
        return Multivector(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.kind)

    def __sub__(self, other: "Multivector") -> "Multivector":
        self._check_pair(other)
        return Multivector(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.kind)

    def __neg__(self) -> "Multivector":
        return Multivector(self.n, tuple(-a for a in self.coeffs), self.kind)

    def scale(self, s) -> "Multivector":
        s = _coerce(s, self.kind)
        return Multivector(self.n, tuple(a * s for a in self.coeffs), self.kind)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __getitem__(self, blade: Union[Blade, int, str]) -> Scalar:
        return component(self, blade)

    def __str__(self) -> str:
        terms = [f"{c}*{Blade(self.n, m).label()}" for m, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(terms) if terms else "0"


def mul(a: Multivector, b: Multivector) -> Multivector:
    """Geometric product, distributing blade signs over the nonzero coefficient pairs."""
    a._check_pair(b)
    n = a.n
    idx = np.arange(1 << n)
    if a.kind is ScalarKind.EXACT:
        # common denominators turn the products into integer arithmetic
        da = math.lcm(*(c.denominator for c in a.coeffs))
        db = math.lcm(*(c.denominator for c in b.coeffs))
        x = np.array([int(c * da) for c in a.coeffs], dtype=object)
        y = np.array([int(c * db) for c in b.coeffs], dtype=object)
        out = np.zeros(1 << n, dtype=object)
    else:
        x = a.to_array()
        y = b.to_array()
        out = np.zeros(1 << n, dtype=np.float64)
    ynz = np.flatnonzero(y != 0)
    if ynz.size:
        for m in a.nonzero():
            row = signs_for(m, n)[ynz]
            if a.kind is ScalarKind.EXACT:
                row = row.astype(object)
            out[m ^ idx[ynz]] += row * x[m] * y[ynz]
    if a.kind is ScalarKind.EXACT:
        den = da * db
        return Multivector(n, tuple(Fraction(int(v), den) for v in out), ScalarKind.EXACT)
    return Multivector(n, tuple(float(v) for v in out), ScalarKind.FLOAT64)


def involution(a: Multivector, kind: Involution | str) -> Multivector:
    signs = involution_signs(a.n, Involution(kind).value)
    return Multivector(a.n, tuple(c if s > 0 else -c for c, s in zip(a.coeffs, signs)), a.kind)


def inversion(a: Multivector) -> Multivector:
    return involution(a, Involution.INVERSION)


def reversion(a: Multivector) -> Multivector:
    return involution(a, Involution.REVERSION)


def bar(a: Multivector) -> Multivector:
    return involution(a, Involution.BAR)


def component(a: Multivector, blade: Union[Blade, int, str]) -> Scalar:
    if isinstance(blade, str):
        blade = Blade.parse(a.n, blade)
    if isinstance(blade, Blade):
        if blade.n != a.n:
            raise DimensionError("blade from a different algebra")
        blade = blade.mask
    if not 0 <= blade < (1 << a.n):
        raise DimensionError(f"mask {blade} outside algebra n={a.n}")
    return a.coeffs[blade]


def scalar_part(a: Multivector) -> Scalar:
    return a.coeffs[0]


def inner0(a: Multivector, b: Multivector) -> Scalar:
    """(a, b)_0 = 2^n sum_A a_A b_A."""
    a._check_pair(b)
    return (1 << a.n) * sum((x * y for x, y in zip(a.coeffs, b.coeffs)), a.coeffs[0] * 0)


def norm0(a: Multivector) -> float:
    return math.sqrt(float(inner0(a, a)))


def tau(blade: Union[Blade, int, str], mu: Multivector) -> Scalar:
    """<tau_{e_A}, mu> = 2^n (-1)^{|A|(|A|+1)/2} mu_A."""
    if isinstance(blade, str):
        blade = Blade.parse(mu.n, blade)
    mask = blade.mask if isinstance(blade, Blade) else int(blade)
    sign = involution_signs(mu.n, Involution.BAR.value)[mask]
    return (1 << mu.n) * int(sign) * component(mu, mask)


def random_exact(n: int, rng: np.random.Generator, bound: int = 9, density: float = 1.0) -> Multivector:
    """Integer coefficients in [-bound, bound] as Fractions; density < 1 zeroes entries at random."""
    vals = rng.integers(-bound, bound + 1, size=1 << n)
    if density < 1.0:
        vals = np.where(rng.random(1 << n) < density, vals, 0)
    return Multivector(n, tuple(Fraction(int(v)) for v in vals), ScalarKind.EXACT)
