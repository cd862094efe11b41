# diracl2/fields/field.py
"""
Grid-sampled Clifford-valued fields and the finite-difference Dirac operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Mapping, Optional, Sequence, Union

import numpy as np

from ..algebra.arrays import apply_generator, field_involution, field_mul, norm0_sq
from ..algebra.blades import Blade
from ..algebra.multivector import Multivector, ScalarKind
from ..errors import GridError, NumericError
from .grid import Grid
from .stencils import partial, second_partial
from .weights import WeightSpec

BladeLike = Union[Blade, int, str]


def _mask(n: int, blade: BladeLike) -> int:
    if isinstance(blade, str):
        return Blade.parse(n, blade).mask
    if isinstance(blade, Blade):
        if blade.n != n:
            raise GridError("blade from a different algebra")
        return blade.mask
    return Blade(n, int(blade)).mask


@dataclass(frozen=True, eq=False)
class CliffordField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64)
        expect = self.grid.shape + (self.grid.components,)
        if vals.shape != expect:
            raise GridError(f"field values have shape {vals.shape}, grid expects {expect}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.grid.n

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, grid: Grid) -> "CliffordField":
        return cls(grid, np.zeros(grid.shape + (grid.components,)))

    @classmethod
    def constant(cls, grid: Grid, value: Multivector) -> "CliffordField":
        if value.n != grid.n:
            raise GridError("multivector and grid disagree on n")
        vals = np.broadcast_to(np.asarray(value.to_float().coeffs), grid.shape + (grid.components,))
        return cls(grid, vals)

    @classmethod
    def from_components(cls, grid: Grid, parts: Mapping[BladeLike, np.ndarray]) -> "CliffordField":
        vals = np.zeros(grid.shape + (grid.components,))
        for blade, arr in parts.items():
            vals[..., _mask(grid.n, blade)] += np.broadcast_to(np.asarray(arr, dtype=float), grid.shape)
        return cls(grid, vals)

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[[Sequence[np.ndarray]], Mapping[BladeLike, np.ndarray]]) -> "CliffordField":
        """fn receives the coordinate arrays x_0..x_n and returns {blade: values}."""
        return cls.from_components(grid, fn(grid.mesh))

    # -- access -----------------------------------------------------------
    def component(self, blade: BladeLike) -> np.ndarray:
        return self.values[..., _mask(self.n, blade)]

    def at(self, index: Sequence[int]) -> Multivector:
        return Multivector(self.n, tuple(float(v) for v in self.values[tuple(index)]), ScalarKind.FLOAT64)

    def check_finite(self) -> None:
        if not np.all(np.isfinite(self.values)):
            bad = int(np.sum(~np.isfinite(self.values)))
            raise NumericError(f"field has {bad} non-finite coefficients")

    def vanishes_near_boundary(self, layers: int = 2) -> bool:
        """True if every node within `layers` of a face is exactly zero."""
        for axis in range(self.grid.ndim):
            moved = np.moveaxis(self.values, axis, 0)
            if np.any(moved[:layers] != 0.0) or np.any(moved[-layers:] != 0.0):
                return False
        return True

    # -- arithmetic -------------------------------------------------------
    def _same(self, other: "CliffordField") -> None:
        if not isinstance(other, CliffordField):
            raise TypeError(f"expected CliffordField, got {type(other).__name__}")
        self.grid.check_same(other.grid)

    def __add__(self, other: "CliffordField") -> "CliffordField":
        self._same(other)
        return CliffordField(self.grid, self.values + other.values)

    def __sub__(self, other: "CliffordField") -> "CliffordField":
        self._same(other)
        return CliffordField(self.grid, self.values - other.values)

    def __neg__(self) -> "CliffordField":
        return CliffordField(self.grid, -self.values)

    def scale(self, s: Union[float, np.ndarray]) -> "CliffordField":
        """Multiply by a real scalar or a real per-node array."""
        s = np.asarray(s, dtype=float)
        if s.ndim:
            s = s[..., None]
        return CliffordField(self.grid, self.values * s)

    def mul(self, other: "CliffordField") -> "CliffordField":
        """Pointwise geometric product."""
        self._same(other)
        return CliffordField(self.grid, field_mul(self.values, other.values, self.n))

    def bar(self) -> "CliffordField":
        return CliffordField(self.grid, field_involution(self.values, self.n, "bar"))

    def norm0_sq(self) -> np.ndarray:
        return norm0_sq(self.values, self.n)


# ---------------------------------------------------------------------------
# differential operators
# ---------------------------------------------------------------------------

def partial_field(f: CliffordField, axis: int) -> np.ndarray:
    return partial(f.values, axis, f.grid.spacings[axis])


def dirac(f: CliffordField, side: str = "left", conjugated: bool = False) -> CliffordField:
    """
    sum_i g_i d_i f (side='left') or sum_i d_i f g_i (side='right'),
    with g_i = e_i, or bar(e_i) when conjugated.
    """
    f.check_finite()
    n = f.n
    out = np.zeros_like(f.values)
    for i in range(n + 1):
        out += apply_generator(partial_field(f, i), i, n, side=side, conjugated=conjugated)
    return CliffordField(f.grid, out)


def dbar(f: CliffordField) -> CliffordField:
    return dirac(f, "left", False)


def dconj(f: CliffordField) -> CliffordField:
    return dirac(f, "left", True)


def laplacian(f: CliffordField) -> CliffordField:
    f.check_finite()
    out = np.zeros_like(f.values)
    for i in range(f.grid.ndim):
        out += second_partial(f.values, i, f.grid.spacings[i])
    return CliffordField(f.grid, out)


# ---------------------------------------------------------------------------
# weighted L^2 structure
# ---------------------------------------------------------------------------

def node_weights(grid: Grid, w: Optional[WeightSpec]) -> np.ndarray:
    """Trapezoid weights times e^{-phi}; w=None means the plain measure dx."""
    if w is None:
        return grid.quadrature_weights
    return grid.quadrature_weights * w.density_on(grid)


def weighted_inner(f: CliffordField, g: CliffordField, w: Optional[WeightSpec]) -> Multivector:
    """(f, g)_phi = sum_k bar(f_k) g_k e^{-phi_k} w_k."""
    f.grid.check_same(g.grid)
    prod = field_mul(field_involution(f.values, f.n, "bar"), g.values, f.n)
    weights = node_weights(f.grid, w)
    total = np.tensordot(weights.ravel(), prod.reshape(-1, f.grid.components), axes=1)
    return Multivector(f.n, tuple(float(v) for v in total), ScalarKind.FLOAT64)


def weighted_norm_sq(f: CliffordField, w: Optional[WeightSpec]) -> float:
    """tau(e_0, (f, f)_phi) = integral of |f|_0^2 e^{-phi}."""
    weights = node_weights(f.grid, w)
    return float(np.dot(weights.ravel(), f.norm0_sq().ravel()))


def plain_integral(f: CliffordField) -> Multivector:
    """Componentwise trapezoid integral of f over the box."""
    total = np.tensordot(f.grid.quadrature_weights.ravel(), f.values.reshape(-1, f.grid.components), axes=1)
    return Multivector(f.n, tuple(float(v) for v in total), ScalarKind.FLOAT64)


def gradient_field(grid: Grid, w: WeightSpec) -> CliffordField:
    """D(phi) = sum_i bar(e_i) dphi/dx_i from the exact gradient."""
    grad = w.gradient_on(grid)
    parts = {0: grad[0]}
    for i in range(1, grid.n + 1):
        parts[1 << (i - 1)] = -grad[i]
    return CliffordField.from_components(grid, parts)


def dual_operator_analytic(alpha: CliffordField, w: WeightSpec, order: str = "left") -> CliffordField:
    """
    -e^{phi} D(alpha e^{-phi}) = (D phi) alpha - D alpha, with D phi exact and
    D alpha by finite differences.

    order="right" gives alpha (D phi) - D alpha instead. The two agree whenever
    D phi commutes with alpha (n = 1, or phi depending on x_0 only); only the
    left order is the adjoint of Dbar in the weighted inner product.
    """
    alpha.check_finite()
    grad = gradient_field(alpha.grid, w)
    if order == "left":
        drift = grad.mul(alpha)
    elif order == "right":
        drift = alpha.mul(grad)
    else:
        raise ValueError(f"order must be 'left' or 'right', got {order!r}")
    return drift - dconj(alpha)


# ---------------------------------------------------------------------------
# compactly supported test functions
# ---------------------------------------------------------------------------

def bump_profile(t: np.ndarray) -> np.ndarray:
    """exp(1 - 1/(1 - t^2)) on |t| < 1, exactly 0 elsewhere; equals 1 at t = 0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


def make_bump(grid: Grid, margin: float, component: BladeLike = 0,
              center: Optional[Sequence[float]] = None, scale: float = 1.0,
              amplitude: float = 1.0) -> CliffordField:
    """
    Smooth bump times e_component, vanishing identically within `margin`
    (fraction of each side length) of every face.

    The default support is the box shrunk by `margin` on each face; `scale`
    shrinks the half-widths and `center` moves the bump, but the support must
    stay inside the shrunk box.
    """
    if not 0.0 < margin < 0.5:
        raise NumericError(f"bump margin must lie in (0, 0.5), got {margin}")
    if not 0.0 < scale <= 1.0:
        raise NumericError(f"bump scale must lie in (0, 1], got {scale}")
    mask = _mask(grid.n, component)
    prof = np.ones(grid.shape)
    for axis in range(grid.ndim):
        lo, hi = grid.lows[axis], grid.highs[axis]
        L = hi - lo
        inner_lo, inner_hi = lo + margin * L, hi - margin * L
        c = 0.5 * (lo + hi) if center is None else float(center[axis])
        r = scale * 0.5 * (inner_hi - inner_lo)
        if c - r < inner_lo - 1e-12 or c + r > inner_hi + 1e-12:
            raise NumericError(f"bump support on axis {axis} leaves the margin-shrunk box")
        prof = prof * bump_profile((grid.mesh[axis] - c) / r)
    return CliffordField.from_components(grid, {mask: amplitude * prof})


def bump_battery(grid: Grid, margin: float, count: int, seed: int = 0) -> List[CliffordField]:
    """
    `count` bump variants cycling through every blade component, with seeded
    random centers, scales and amplitudes; each stays inside the margin-shrunk box.
    """
    rng = np.random.default_rng([int(seed), grid.n, count])
    out = []
    for k in range(count):
        scale = float(rng.uniform(0.4, 1.0))
        center = []
        for axis in range(grid.ndim):
            lo, hi = grid.lows[axis], grid.highs[axis]
            L = hi - lo
            half = 0.5 * (1.0 - 2.0 * margin) * L
            slack = (1.0 - scale) * half
            center.append(0.5 * (lo + hi) + float(rng.uniform(-slack, slack)))
        amplitude = float(rng.uniform(0.5, 2.0))
        out.append(make_bump(grid, margin, component=k % grid.components,
                             center=center, scale=scale, amplitude=amplitude))
    return out
