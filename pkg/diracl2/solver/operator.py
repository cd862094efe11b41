# diracl2/solver/operator.py
"""
Matrix-free discrete Dirac operator.

Unknowns live on every node of the grid; equations are imposed only at
interior nodes. Both spaces carry the weighted inner product
<x, y>_W = 2^n sum_k W_k sum_A x_kA y_kA with W = trapezoid * e^{-phi}, which
matches weighted_norm_sq on fields.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator

from ..algebra.arrays import apply_generator
from ..errors import GridError
from ..fields.field import CliffordField, node_weights
from ..fields.grid import Grid
from ..fields.stencils import partial, partial_transpose
from ..fields.weights import WeightSpec


class DiscreteDiracOperator:
    def __init__(self, grid: Grid, weight: Optional[WeightSpec] = None):
        if weight is not None and weight.n != grid.n:
            raise GridError("weight and grid disagree on n")
        self.grid = grid
        self.weight = weight
        self.n = grid.n
        self.interior = grid.interior_slices
        self.node_w = node_weights(grid, weight)
        self.eq_w = self.node_w[self.interior]
        self.unknown_shape = grid.shape + (grid.components,)
        self.equation_shape = tuple(N - 2 for N in grid.shape) + (grid.components,)
        self._scale = float(1 << self.n)

    # -- inner products -----------------------------------------------------
    def inner_unknowns(self, x: np.ndarray, y: np.ndarray) -> float:
        return self._scale * float(np.sum(self.node_w[..., None] * x * y))

    def inner_equations(self, x: np.ndarray, y: np.ndarray) -> float:
        return self._scale * float(np.sum(self.eq_w[..., None] * x * y))

    # -- maps ---------------------------------------------------------------
    def apply(self, u: np.ndarray) -> np.ndarray:
        """L u: discrete Dbar u at interior nodes."""
        out = np.zeros(self.unknown_shape)
        for i in range(self.n + 1):
            out += apply_generator(partial(u, i, self.grid.spacings[i]), i, self.n, "left")
        return out[self.interior]

    def apply_transpose(self, v: np.ndarray) -> np.ndarray:
        """L^T v in plain coefficients: each e_i multiplication transposes to bar(e_i)."""
        ext = np.zeros(self.unknown_shape)
        ext[self.interior] = v
        out = np.zeros(self.unknown_shape)
        for i in range(self.n + 1):
            conj = apply_generator(ext, i, self.n, "left", conjugated=True)
            out += partial_transpose(conj, i, self.grid.spacings[i])
        return out

    def apply_adjoint(self, v: np.ndarray) -> np.ndarray:
        """L*_W v = W_u^{-1} L^T W_e v."""
        return self.apply_transpose(self.eq_w[..., None] * v) / self.node_w[..., None]

    def normal(self, v: np.ndarray) -> np.ndarray:
        return self.apply(self.apply_adjoint(v))

    # -- field-level helpers --------------------------------------------------
    def restrict(self, f: CliffordField) -> np.ndarray:
        self.grid.check_same(f.grid)
        return np.array(f.values[self.interior])

    def to_field(self, u: np.ndarray) -> CliffordField:
        return CliffordField(self.grid, u)

    def adjointness_defect(self, u: np.ndarray, v: np.ndarray) -> float:
        """|<Lu, v>_W - <u, L* v>_W| / (||u||_W ||v||_W)."""
        lhs = self.inner_equations(self.apply(u), v)
        rhs = self.inner_unknowns(u, self.apply_adjoint(v))
        nu = np.sqrt(self.inner_unknowns(u, u))
        nv = np.sqrt(self.inner_equations(v, v))
        if nu == 0.0 or nv == 0.0:
            return 0.0
        return abs(lhs - rhs) / (nu * nv)

    def as_linear_operator(self) -> LinearOperator:
        """
        L in weighted coordinates y = W_u^{1/2} u, rows scaled by W_e^{1/2}.

        The Euclidean adjoint of this view is the weighted adjoint L*, so a
        least-squares solver's minimal-norm solution is the minimal weighted-norm u.
        """
        su = np.sqrt(self._scale * self.node_w)[..., None]
        se = np.sqrt(self._scale * self.eq_w)[..., None]
        m = int(np.prod(self.equation_shape))
        k = int(np.prod(self.unknown_shape))
        return LinearOperator(
            (m, k),
            matvec=lambda y: (se * self.apply(np.reshape(y, self.unknown_shape) / su)).ravel(),
            rmatvec=lambda z: (self.apply_transpose(se * np.reshape(z, self.equation_shape)) / su).ravel(),
            dtype=np.float64,
        )

    def to_weighted(self, u: np.ndarray) -> np.ndarray:
        """Unknowns to the coordinates of `as_linear_operator`."""
        return (np.sqrt(self._scale * self.node_w)[..., None] * u).ravel()

    def from_weighted(self, y: np.ndarray) -> np.ndarray:
        return np.reshape(y, self.unknown_shape) / np.sqrt(self._scale * self.node_w)[..., None]

    def describe(self) -> dict:
        return {
            "grid": self.grid.describe(),
            "weight": self.weight.describe() if self.weight is not None else None,
            "unknowns": int(np.prod(self.unknown_shape)),
            "equations": int(np.prod(self.equation_shape)),
        }
