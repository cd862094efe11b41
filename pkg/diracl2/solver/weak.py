# diracl2/solver/weak.py
"""
Weak-solution defects and the Cauchy kernel G(x) = bar(x) / (omega |x|^{n+1}).

G is left-monogenic away from the origin but not a weak solution through it:
its weak defect against a bump centred at 0 tends to -a(0) e_0.
"""

from __future__ import annotations

import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.special import gamma

from ..algebra.multivector import Multivector, ScalarKind, norm0
from ..errors import GridError, NumericError
from ..fields.field import CliffordField, dbar, dirac, make_bump, plain_integral
from ..fields.grid import Grid
from ..fields.stencils import observed_orders
from ..util.logger import get_logger

logger = get_logger("diracl2.solver")


def weak_defect(u: CliffordField, f: CliffordField, alpha: CliffordField) -> Multivector:
    """int alpha f dx + int (alpha Dbar) u dx by trapezoid quadrature."""
    u.grid.check_same(f.grid)
    u.grid.check_same(alpha.grid)
    if not alpha.vanishes_near_boundary(2):
        raise GridError("test field must vanish on the two node layers next to every face")
    alpha_dbar = dirac(alpha, side="right")
    return plain_integral(alpha.mul(f)) + plain_integral(alpha_dbar.mul(u))


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^{n+1}."""
    k = n + 1
    return 2.0 * math.pi ** (k / 2.0) / float(gamma(k / 2.0))


def cauchy_kernel(grid: Grid, exclusion_radius: Optional[float] = None) -> CliffordField:
    """Sample G at the nodes, zero within `exclusion_radius` of the origin (default h_min / 2)."""
    if not grid.contains([0.0] * grid.ndim):
        raise GridError("the origin lies outside the grid box")
    radius = 0.5 * grid.min_spacing if exclusion_radius is None else float(exclusion_radius)
    if not radius > 0.0:
        raise NumericError(f"exclusion radius must be > 0, got {radius}")
    xs = grid.mesh
    r = np.sqrt(sum(x ** 2 for x in xs))
    keep = r > radius
    scale = np.zeros(grid.shape)
    scale[keep] = 1.0 / (sphere_area(grid.n) * r[keep] ** (grid.n + 1))
    parts = {0: xs[0] * scale}
    for i in range(1, grid.n + 1):
        parts[1 << (i - 1)] = -xs[i] * scale
    return CliffordField.from_components(grid, parts)


def _radius(grid: Grid) -> np.ndarray:
    return np.sqrt(sum(x ** 2 for x in grid.mesh))


def cauchy_annulus_check(grids: Sequence[Grid], r_in: float, r_out: float) -> List[Dict[str, Any]]:
    """max |Dbar G|_0 over nodes with r_in <= |x| <= r_out, per grid, with observed orders."""
    if not 0.0 < r_in < r_out:
        raise NumericError(f"annulus needs 0 < r_in < r_out, got {r_in}, {r_out}")
    rows: List[Dict[str, Any]] = []
    for level, grid in enumerate(grids):
        G = cauchy_kernel(grid)
        r = _radius(grid)
        if r_in <= 2.0 * max(grid.spacings):
            raise GridError(f"annulus inner radius {r_in} reaches the excluded core at h={max(grid.spacings)}")
        ring = (r >= r_in) & (r <= r_out)
        if not np.any(ring):
            raise GridError(f"no nodes with {r_in} <= |x| <= {r_out}")
        dens = np.sqrt(dbar(G).norm0_sq())
        rows.append({
            "level": level,
            "h": max(grid.spacings),
            "nodes": int(np.sum(ring)),
            "max_dbar_norm": float(np.max(dens[ring])),
        })
    orders = observed_orders([r["h"] for r in rows], [r["max_dbar_norm"] for r in rows])
    for row, order in zip(rows, orders):
        row["observed_order"] = order
    return rows


def kernel_weak_check(grid: Grid, margin: float, amplitude: float = 1.0,
                      tolerance: float = 0.05) -> Dict[str, Any]:
    """
    Weak defect of G (with f = 0) against amplitude * bump * e_0 centred at the
    origin, compared with -amplitude * e_0.
    """
    origin = [0.0] * grid.ndim
    if not grid.contains(origin):
        raise GridError("the origin lies outside the grid box")
    # largest bump around 0 that stays inside the margin-shrunk box
    scale = 1.0
    for axis in range(grid.ndim):
        lo, hi = grid.lows[axis], grid.highs[axis]
        L = hi - lo
        half = 0.5 * (1.0 - 2.0 * margin) * L
        room = min(-(lo + margin * L), hi - margin * L)
        if room <= 0.0:
            raise GridError(f"origin is inside the margin on axis {axis}")
        scale = min(scale, room / half)
    alpha = make_bump(grid, margin, component=0, center=origin, scale=scale, amplitude=amplitude)
    G = cauchy_kernel(grid)
    defect = weak_defect(G, CliffordField.zeros(grid), alpha)
    target = Multivector.scalar(grid.n, -float(amplitude), ScalarKind.FLOAT64)
    rel = norm0(defect - target) / norm0(target)
    logger.info("kernel weak defect at h=%.4g: relative error %.3e", max(grid.spacings), rel)
    return {
        "h": max(grid.spacings),
        "defect": defect.to_dict(),
        "target": target.to_dict(),
        "relative_error": rel,
        "tolerance": tolerance,
        "passes": bool(rel <= tolerance),
    }
