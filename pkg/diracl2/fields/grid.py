# diracl2/fields/grid.py
"""
Rectangular node grids over boxes in R^{n+1}; axis i carries coordinate x_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np

from ..algebra.blades import check_n
from ..errors import DimensionError, GridError


@dataclass(frozen=True)
class Grid:
    n: int
    extents: Tuple[int, ...]
    lows: Tuple[float, ...]
    highs: Tuple[float, ...]

    def __post_init__(self) -> None:
        check_n(self.n)
        object.__setattr__(self, "extents", tuple(int(v) for v in self.extents))
        object.__setattr__(self, "lows", tuple(float(v) for v in self.lows))
        object.__setattr__(self, "highs", tuple(float(v) for v in self.highs))
        dim = self.n + 1
        if not (len(self.extents) == len(self.lows) == len(self.highs) == dim):
            raise DimensionError(f"grid for n={self.n} needs {dim} axes")
        for axis, N in enumerate(self.extents):
            if N < 3:
                raise GridError(f"axis {axis} has {N} nodes; at least 3 are required")
        for axis, (lo, hi) in enumerate(zip(self.lows, self.highs)):
            if not (np.isfinite(lo) and np.isfinite(hi)) or not hi > lo:
                raise GridError(f"axis {axis} interval [{lo}, {hi}] is empty or not finite")

    @classmethod
    def box(cls, n: int, nodes: int | Sequence[int], low: float | Sequence[float] = -1.0,
            high: float | Sequence[float] = 1.0) -> "Grid":
        dim = n + 1
        ext = [nodes] * dim if isinstance(nodes, int) else list(nodes)
        lo = [low] * dim if np.isscalar(low) else list(low)
        hi = [high] * dim if np.isscalar(high) else list(high)
        return cls(n, tuple(ext), tuple(lo), tuple(hi))

    # -- geometry ----------------------------------------------------------
    @property
    def ndim(self) -> int:
        return self.n + 1

    @property
    def components(self) -> int:
        return 1 << self.n

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.extents

    @property
    def num_nodes(self) -> int:
        return int(np.prod(self.extents))

    @property
    def spacings(self) -> Tuple[float, ...]:
        return tuple((hi - lo) / (N - 1) for lo, hi, N in zip(self.lows, self.highs, self.extents))

    @property
    def min_spacing(self) -> float:
        return min(self.spacings)

    def axis_coords(self, axis: int) -> np.ndarray:
        return np.linspace(self.lows[axis], self.highs[axis], self.extents[axis])

    @cached_property
    def mesh(self) -> List[np.ndarray]:
        """Coordinate arrays x_0..x_n, each of shape `self.shape`."""
        return np.meshgrid(*[self.axis_coords(a) for a in range(self.ndim)], indexing="ij")

    @property
    def volume(self) -> float:
        return float(np.prod([hi - lo for lo, hi in zip(self.lows, self.highs)]))

    def contains(self, point: Sequence[float]) -> bool:
        return all(lo <= p <= hi for p, lo, hi in zip(point, self.lows, self.highs))

    @cached_property
    def interior_mask(self) -> np.ndarray:
        mask = np.ones(self.shape, dtype=bool)
        for axis in range(self.ndim):
            sl = [slice(None)] * self.ndim
            sl[axis] = 0
            mask[tuple(sl)] = False
            sl[axis] = -1
            mask[tuple(sl)] = False
        return mask

    @property
    def interior_slices(self) -> Tuple[slice, ...]:
        return tuple(slice(1, -1) for _ in range(self.ndim))

    @cached_property
    def quadrature_weights(self) -> np.ndarray:
        """Tensor trapezoid weights: prod_i h_i with a factor 1/2 per boundary face."""
        w = np.ones(1)
        for axis in range(self.ndim):
            w1 = np.full(self.extents[axis], self.spacings[axis])
            w1[0] *= 0.5
            w1[-1] *= 0.5
            w = np.multiply.outer(w, w1)
        return w.reshape(self.shape)

    # -- refinement --------------------------------------------------------
    def refine(self) -> "Grid":
        """Halve every spacing: N -> 2N - 1 nodes, same box."""
        return Grid(self.n, tuple(2 * N - 1 for N in self.extents), self.lows, self.highs)

    def same_as(self, other: "Grid") -> bool:
        return (self.n, self.extents, self.lows, self.highs) == (other.n, other.extents, other.lows, other.highs)

    def check_same(self, other: "Grid") -> None:
        if not self.same_as(other):
            raise GridError("fields live on different grids")

    def describe(self) -> dict:
        return {
            "n": self.n,
            "extents": list(self.extents),
            "lows": list(self.lows),
            "highs": list(self.highs),
        }
