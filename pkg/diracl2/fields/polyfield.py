# diracl2/fields/polyfield.py
"""
Clifford-valued polynomials with exact derivatives, used to test calculus
identities without discretization error.

Coefficients live in an array c[k_0, ..., k_n, A]: the coefficient of
x_0^{k_0} ... x_n^{k_n} e_A.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np
import numpy.polynomial.polynomial as P

from ..algebra.arrays import apply_generator, field_involution
from ..algebra.blades import signs_for
from ..errors import DimensionError
from .field import CliffordField
from .grid import Grid


def _pad_to(c: np.ndarray, shape: Sequence[int]) -> np.ndarray:
    pads = [(0, s - d) for d, s in zip(c.shape, shape)]
    return np.pad(c, pads)


def _trim(c: np.ndarray) -> np.ndarray:
    """Drop trailing all-zero powers on every power axis, keeping at least one."""
    power_axes = c.ndim - 1
    live = np.any(c != 0.0, axis=-1)
    index = []
    for axis in range(power_axes):
        others = tuple(k for k in range(power_axes) if k != axis)
        nz = np.flatnonzero(np.any(live, axis=others)) if others else np.flatnonzero(live)
        index.append(slice(0, int(nz[-1]) + 1 if nz.size else 1))
    return c[tuple(index)]


class PolyTestField:
    def __init__(self, n: int, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if coeffs.ndim != n + 2 or coeffs.shape[-1] != 1 << n:
            raise DimensionError(f"coefficients need {n + 1} power axes plus {1 << n} components")
        self.n = int(n)
        self.coeffs = coeffs

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, n: int, degree: int = 4) -> "PolyTestField":
        return cls(n, np.zeros((degree + 1,) * (n + 1) + (1 << n,)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, degree: int = 4,
               bound: int = 3, max_grade: int | None = None) -> "PolyTestField":
        """Integer coefficients, total degree <= degree; components above max_grade left zero."""
        c = np.zeros((degree + 1,) * (n + 1) + (1 << n,))
        comps = [m for m in range(1 << n) if max_grade is None or bin(m).count("1") <= max_grade]
        for k in itertools.product(range(degree + 1), repeat=n + 1):
            if sum(k) > degree:
                continue
            c[k + (slice(None),)][comps] = rng.integers(-bound, bound + 1, size=len(comps))
        return cls(n, c)

    @classmethod
    def coordinate(cls, n: int, axis: int, component: int = 0) -> "PolyTestField":
        """x_axis e_component."""
        out = cls.zeros(n, 1)
        idx = [0] * (n + 1)
        idx[axis] = 1
        out.coeffs[tuple(idx) + (component,)] = 1.0
        return out

    # -- algebra ----------------------------------------------------------
    def _aligned(self, other: "PolyTestField"):
        if self.n != other.n:
            raise DimensionError("polynomial fields from different algebras")
        shape = [max(a, b) for a, b in zip(self.coeffs.shape, other.coeffs.shape)]
        return _pad_to(self.coeffs, shape), _pad_to(other.coeffs, shape)

    def __add__(self, other: "PolyTestField") -> "PolyTestField":
        a, b = self._aligned(other)
        return PolyTestField(self.n, a + b)

    def __sub__(self, other: "PolyTestField") -> "PolyTestField":
        a, b = self._aligned(other)
        return PolyTestField(self.n, a - b)

    def scale(self, s: float) -> "PolyTestField":
        return PolyTestField(self.n, self.coeffs * s)

    def bar(self) -> "PolyTestField":
        return PolyTestField(self.n, field_involution(self.coeffs, self.n, "bar"))

    def mul(self, other: "PolyTestField") -> "PolyTestField":
        """
        Pointwise geometric product. Each component is transformed once; the
        blade pairs multiply in frequency space and one inverse transform per
        component gives the polynomial product.
        """
        if self.n != other.n:
            raise DimensionError("polynomial fields from different algebras")
        n = self.n
        a, b = _trim(self.coeffs), _trim(other.coeffs)
        shape = tuple(x + y - 1 for x, y in zip(a.shape[:-1], b.shape[:-1]))
        axes = tuple(range(n + 1))
        fa = np.fft.rfftn(a, s=shape, axes=axes)
        fb = np.fft.rfftn(b, s=shape, axes=axes)
        live_a = [m for m in range(1 << n) if np.any(a[..., m])]
        live_b = [m for m in range(1 << n) if np.any(b[..., m])]
        acc = np.zeros(fa.shape, dtype=fa.dtype)
        for i in live_a:
            signs = signs_for(i, n)
            for j in live_b:
                acc[..., i ^ j] += signs[j] * fa[..., i] * fb[..., j]
        return PolyTestField(n, np.fft.irfftn(acc, s=shape, axes=axes))

    def times_generator(self, i: int, side: str = "left", conjugated: bool = False) -> "PolyTestField":
        return PolyTestField(self.n, apply_generator(self.coeffs, i, self.n, side, conjugated))

    # -- calculus ---------------------------------------------------------
    def derivative(self, axis: int, m: int = 1) -> "PolyTestField":
        d = P.polyder(self.coeffs, m=m, axis=axis)
        if d.shape[axis] == 0:
            d = np.zeros(self.coeffs.shape[:axis] + (1,) + self.coeffs.shape[axis + 1:])
        return PolyTestField(self.n, d)

    def dirac(self, side: str = "left", conjugated: bool = False) -> "PolyTestField":
        total = PolyTestField.zeros(self.n, 0)
        for i in range(self.n + 1):
            total = total + self.derivative(i).times_generator(i, side, conjugated)
        return total

    def laplacian(self) -> "PolyTestField":
        total = PolyTestField.zeros(self.n, 0)
        for i in range(self.n + 1):
            total = total + self.derivative(i, 2)
        return total

    # -- evaluation -------------------------------------------------------
    def evaluate(self, xs: Sequence[np.ndarray]) -> np.ndarray:
        """Values at points given by coordinate arrays; components on the last axis."""
        shape = np.broadcast_shapes(*[np.shape(x) for x in xs])
        out = np.zeros(shape + (1 << self.n,))
        nz = np.argwhere(np.any(self.coeffs != 0.0, axis=-1))
        for k in nz:
            mono = np.ones(shape)
            for axis, power in enumerate(k):
                if power:
                    mono = mono * np.asarray(xs[axis], dtype=float) ** int(power)
            out += mono[..., None] * self.coeffs[tuple(k)]
        return out

    def to_field(self, grid: Grid) -> CliffordField:
        if grid.n != self.n:
            raise DimensionError("grid and polynomial field disagree on n")
        return CliffordField(grid, self.evaluate(grid.mesh))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def allclose(self, other: "PolyTestField", rtol: float = 1e-12) -> bool:
        a, b = self._aligned(other)
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1.0)
        return bool(np.max(np.abs(a - b)) <= rtol * scale)

    def relative_error(self, other: "PolyTestField") -> float:
        a, b = self._aligned(other)
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        return float(np.max(np.abs(a - b)) / scale)
