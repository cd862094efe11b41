# diracl2/fields/weights.py
"""
Analytic weights phi with closed-form gradient and Hessian.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import WeightError
from .grid import Grid

Coords = Sequence[np.ndarray]


@dataclass(frozen=True)
class HypothesisCheck:
    """Sign conditions on the Hessian of phi, evaluated at grid nodes."""
    laplacian_nonnegative: bool
    spatial_offdiag_zero: bool
    spatial_diag_nonpositive: bool
    failures: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def satisfied(self) -> bool:
        return self.laplacian_nonnegative and self.spatial_offdiag_zero and self.spatial_diag_nonpositive

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "laplacian_nonnegative": self.laplacian_nonnegative,
            "spatial_offdiag_zero": self.spatial_offdiag_zero,
            "spatial_diag_nonpositive": self.spatial_diag_nonpositive,
            "failures": list(self.failures),
        }


def _const(xs: Coords, c: float) -> np.ndarray:
    return np.full(np.shape(xs[0]), float(c))


class WeightSpec(ABC):
    family: str = ""

    def __init__(self, n: int):
        self.n = int(n)

    @abstractmethod
    def value(self, xs: Coords) -> np.ndarray:
        ...

    @abstractmethod
    def gradient(self, xs: Coords) -> List[np.ndarray]:
        ...

    @abstractmethod
    def hessian(self, xs: Coords) -> List[List[np.ndarray]]:
        ...

    def params(self) -> Dict[str, object]:
        return {}

    def laplacian(self, xs: Coords) -> np.ndarray:
        H = self.hessian(xs)
        return sum(H[i][i] for i in range(self.n + 1))

    # grid shortcuts
    def value_on(self, grid: Grid) -> np.ndarray:
        self._check_grid(grid)
        return self.value(grid.mesh)

    def density_on(self, grid: Grid) -> np.ndarray:
        """e^{-phi} at every node."""
        return np.exp(-self.value_on(grid))

    def gradient_on(self, grid: Grid) -> List[np.ndarray]:
        self._check_grid(grid)
        return self.gradient(grid.mesh)

    def hessian_on(self, grid: Grid) -> List[List[np.ndarray]]:
        self._check_grid(grid)
        return self.hessian(grid.mesh)

    def laplacian_on(self, grid: Grid) -> np.ndarray:
        self._check_grid(grid)
        return self.laplacian(grid.mesh)

    def _check_grid(self, grid: Grid) -> None:
        if grid.n != self.n:
            raise WeightError(f"weight built for n={self.n} used on a grid with n={grid.n}")

    def check_hypotheses(self, grid: Grid, atol: float = 1e-12) -> HypothesisCheck:
        H = self.hessian_on(grid)
        lap = self.laplacian_on(grid)
        failures = []
        lap_ok = bool(np.all(lap >= -atol))
        if not lap_ok:
            failures.append(f"laplacian < 0 at {int(np.sum(lap < -atol))} nodes (min {float(lap.min()):.3g})")
        off_ok = True
        diag_ok = True
        for i in range(1, self.n + 1):
            if np.any(H[i][i] > atol):
                diag_ok = False
                failures.append(f"d2phi/dx{i}^2 > 0 somewhere")
            for j in range(1, self.n + 1):
                if i != j and np.any(np.abs(H[i][j]) > atol):
                    off_ok = False
                    failures.append(f"d2phi/dx{i}dx{j} != 0 somewhere")
        return HypothesisCheck(lap_ok, off_ok, diag_ok, tuple(failures))

    def describe(self) -> dict:
        return {"family": self.family, "n": self.n, "params": self.params()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, {self.params()})"


class ZeroWeight(WeightSpec):
    family = "zero"

    def value(self, xs):
        return _const(xs, 0.0)

    def gradient(self, xs):
        return [_const(xs, 0.0) for _ in range(self.n + 1)]

    def hessian(self, xs):
        z = _const(xs, 0.0)
        return [[z for _ in range(self.n + 1)] for _ in range(self.n + 1)]


class Quadratic0(WeightSpec):
    """phi = x_0^2."""
    family = "quadratic0"

    def value(self, xs):
        return np.asarray(xs[0], dtype=float) ** 2

    def gradient(self, xs):
        g = [_const(xs, 0.0) for _ in range(self.n + 1)]
        g[0] = 2.0 * np.asarray(xs[0], dtype=float)
        return g

    def hessian(self, xs):
        z = _const(xs, 0.0)
        H = [[z for _ in range(self.n + 1)] for _ in range(self.n + 1)]
        H[0][0] = _const(xs, 2.0)
        return H


class AnisoQuadratic(WeightSpec):
    """phi = (n+1) x_0^2 - sum_{i>=1} x_i^2, so that laplacian(phi) == 2."""
    family = "aniso_quadratic"

    def value(self, xs):
        out = (self.n + 1) * np.asarray(xs[0], dtype=float) ** 2
        for i in range(1, self.n + 1):
            out = out - np.asarray(xs[i], dtype=float) ** 2
        return out

    def gradient(self, xs):
        g = [-2.0 * np.asarray(xs[i], dtype=float) for i in range(self.n + 1)]
        g[0] = 2.0 * (self.n + 1) * np.asarray(xs[0], dtype=float)
        return g

    def hessian(self, xs):
        z = _const(xs, 0.0)
        H = [[z for _ in range(self.n + 1)] for _ in range(self.n + 1)]
        H[0][0] = _const(xs, 2.0 * (self.n + 1))
        for i in range(1, self.n + 1):
            H[i][i] = _const(xs, -2.0)
        return H


class AxialPoly(WeightSpec):
    """phi = p(x_axis) for a polynomial p given by ascending coefficients."""
    family = "axial_poly"

    def __init__(self, n: int, coeffs: Sequence[float], axis: int = 0):
        super().__init__(n)
        if not coeffs:
            raise WeightError("axial_poly needs at least one coefficient")
        if not 0 <= axis <= n:
            raise WeightError(f"axial_poly axis {axis} outside 0..{n}")
        self.axis = int(axis)
        self.poly = Polynomial([float(c) for c in coeffs])
        self._d1 = self.poly.deriv(1)
        self._d2 = self.poly.deriv(2)

    def params(self):
        return {"coeffs": [float(c) for c in self.poly.coef], "axis": self.axis}

    def value(self, xs):
        return self.poly(np.asarray(xs[self.axis], dtype=float))

    def gradient(self, xs):
        g = [_const(xs, 0.0) for _ in range(self.n + 1)]
        g[self.axis] = self._d1(np.asarray(xs[self.axis], dtype=float)) + _const(xs, 0.0)
        return g

    def hessian(self, xs):
        z = _const(xs, 0.0)
        H = [[z for _ in range(self.n + 1)] for _ in range(self.n + 1)]
        H[self.axis][self.axis] = self._d2(np.asarray(xs[self.axis], dtype=float)) + z
        return H


_ALIASES = {
    "zero": "zero",
    "quadratic0": "quadratic0",
    "aniso": "aniso_quadratic",
    "aniso_quadratic": "aniso_quadratic",
    "anisoquadratic": "aniso_quadratic",
    "axial_poly": "axial_poly",
    "axialpoly": "axial_poly",
}

FAMILIES = ("zero", "quadratic0", "aniso_quadratic", "axial_poly")


def make_weight(name: str, n: int, params: Sequence[float] = ()) -> WeightSpec:
    """
    Build a weight from its family name. 'axial_poly:1' selects axis 1; its params
    are the ascending polynomial coefficients.
    """
    base, _, axis_txt = str(name).strip().lower().partition(":")
    family = _ALIASES.get(base)
    if family is None:
        raise WeightError(f"unknown weight family {name!r}; expected one of {', '.join(FAMILIES)}")
    if family != "axial_poly" and (axis_txt or len(params)):
        raise WeightError(f"weight {family} takes no axis or parameters")
    if family == "zero":
        return ZeroWeight(n)
    if family == "quadratic0":
        return Quadratic0(n)
    if family == "aniso_quadratic":
        return AnisoQuadratic(n)
    try:
        axis = int(axis_txt) if axis_txt else 0
    except ValueError as exc:
        raise WeightError(f"bad axial_poly axis {axis_txt!r}") from exc
    return AxialPoly(n, list(params) or [0.0, 0.0, 1.0], axis=axis)
