# diracl2/verify/energy_identity.py
"""
Numerical check of the weighted energy identity for compactly supported alpha:

    ||D*_phi alpha||^2 = ||Dbar alpha||^2 + int |alpha|_0^2 lap(phi) e^{-phi} + remainder

Two forms of the remainder are reported. The hessian form integrates the
pointwise diagonal and cross pieces (the x_0-row piece vanishes identically)
against the exact Hessian of phi; it closes the balance when D phi commutes
with alpha, i.e. for n = 1 or phi = phi(x_0). The commutator form

    (alpha, sum_i [e_i, D phi] d_i alpha)_phi

closes it for every weight.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..algebra.arrays import apply_generator, field_involution, field_mul, scalar_of_product
from ..config import DEFAULT_MARGIN
from ..errors import DimensionError, GridError
from ..fields.field import (
    CliffordField,
    dbar,
    dual_operator_analytic,
    gradient_field,
    make_bump,
    node_weights,
    partial_field,
    weighted_norm_sq,
)
from ..fields.grid import Grid
from ..fields.stencils import observed_orders
from ..fields.weights import WeightSpec
from ..util.logger import get_logger
from .sign_cases import cross_sign_vector, diagonal_mask

logger = get_logger("diracl2.verify")

ESTIMATE_SLACK = 1e-6


@dataclass
class EnergyIdentityReport:
    n: int
    h: float
    lhs: float
    dirac_term: float
    laplacian_term: float
    hessian_term: float
    hessian_term_direct: float
    commutator_term: float
    defect: float
    relative_defect: float
    commutator_defect: float
    relative_commutator_defect: float
    hessian_form_applies: bool
    grid: Dict[str, Any] = field(default_factory=dict)
    weight: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _require_compact(grid: Grid, alpha: CliffordField) -> None:
    alpha.grid.check_same(grid)
    if not alpha.vanishes_near_boundary(2):
        raise GridError("test field must vanish on the two node layers next to every face")


def hessian_density(alpha: CliffordField, w: WeightSpec) -> np.ndarray:
    """Pointwise diagonal + cross pieces from the closed forms, per node."""
    n = alpha.n
    a = alpha.values
    H = w.hessian_on(alpha.grid)
    out = np.zeros(alpha.grid.shape)
    for i in range(1, n + 1):
        mask = diagonal_mask(n, i)
        out -= float(1 << (n + 1)) * H[i][i] * np.sum(a[..., mask] ** 2, axis=-1)
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            if p == q:
                continue
            hpq = H[p][q]
            if not np.any(hpq):
                continue
            partners, signs = cross_sign_vector(n, p, q)
            out += float(1 << n) * hpq * np.sum(a * a[..., partners] * signs, axis=-1)
    return out


def hessian_density_direct(alpha: CliffordField, w: WeightSpec) -> np.ndarray:
    """tau(0, bar(a) sum_{j>=1, i>=0} (e_j a bar(e_i) - a e_j bar(e_i)) H_ji) by per-node products."""
    n = alpha.n
    a = alpha.values
    H = w.hessian_on(alpha.grid)
    total = np.zeros_like(a)
    for j in range(1, n + 1):
        ej_a = apply_generator(a, j, n, "left")
        a_ej = apply_generator(a, j, n, "right")
        diff = ej_a - a_ej
        for i in range(n + 1):
            hji = H[j][i]
            if not np.any(hji):
                continue
            total += hji[..., None] * apply_generator(diff, i, n, "right", conjugated=True)
    return float(1 << n) * scalar_of_product(field_involution(a, n, "bar"), total, n)


def commutator_density(alpha: CliffordField, w: WeightSpec) -> np.ndarray:
    """tau(0, bar(a) sum_i [e_i, D phi] d_i a) per node, d_i by finite differences."""
    n = alpha.n
    p = gradient_field(alpha.grid, w).values
    total = np.zeros_like(alpha.values)
    for i in range(1, n + 1):
        comm = apply_generator(p, i, n, "left") - apply_generator(p, i, n, "right")
        if not np.any(comm):
            continue
        total += field_mul(comm, partial_field(alpha, i), n)
    return float(1 << n) * scalar_of_product(field_involution(alpha.values, n, "bar"), total, n)


def hessian_form_applies(grid: Grid, w: WeightSpec) -> bool:
    """True when D phi is scalar-valued on the grid or the algebra is commutative."""
    if grid.n == 1:
        return True
    grad = w.gradient_on(grid)
    return not any(np.any(grad[i]) for i in range(1, grid.n + 1))


def verify_energy_identity(grid: Grid, w: WeightSpec, alpha: CliffordField) -> EnergyIdentityReport:
    """All terms of the balance on one grid and the relative defect of each form."""
    if w.n != grid.n:
        raise DimensionError("weight and grid disagree on n")
    _require_compact(grid, alpha)
    weights = node_weights(grid, w)
    lhs = weighted_norm_sq(dual_operator_analytic(alpha, w), w)
    dirac_term = weighted_norm_sq(dbar(alpha), w)
    lap_term = float(np.sum(weights * alpha.norm0_sq() * w.laplacian_on(grid)))
    hess = float(np.sum(weights * hessian_density(alpha, w)))
    hess_direct = float(np.sum(weights * hessian_density_direct(alpha, w)))
    comm = float(np.sum(weights * commutator_density(alpha, w)))
    defect = lhs - (dirac_term + lap_term + hess)
    comm_defect = lhs - (dirac_term + lap_term + comm)
    scale = max(abs(lhs), np.finfo(float).tiny)
    report = EnergyIdentityReport(
        n=grid.n,
        h=max(grid.spacings),
        lhs=lhs,
        dirac_term=dirac_term,
        laplacian_term=lap_term,
        hessian_term=hess,
        hessian_term_direct=hess_direct,
        commutator_term=comm,
        defect=defect,
        relative_defect=abs(defect) / scale,
        commutator_defect=comm_defect,
        relative_commutator_defect=abs(comm_defect) / scale,
        hessian_form_applies=hessian_form_applies(grid, w),
        grid=grid.describe(),
        weight=w.describe(),
    )
    logger.debug("energy identity on %s: relative defect %.3e", grid.extents, report.relative_defect)
    return report


def estimate_inequality(grid: Grid, w: WeightSpec, alpha: CliffordField,
                        slack: float = ESTIMATE_SLACK) -> Dict[str, Any]:
    """||D*_phi alpha||^2 against int |alpha|_0^2 lap(phi) e^{-phi}; holds if the margin is >= -slack relative."""
    _require_compact(grid, alpha)
    lhs = weighted_norm_sq(dual_operator_analytic(alpha, w), w)
    lap_term = float(np.sum(node_weights(grid, w) * alpha.norm0_sq() * w.laplacian_on(grid)))
    margin = lhs - lap_term
    relative = margin / max(abs(lhs), np.finfo(float).tiny)
    return {
        "lhs": lhs,
        "laplacian_term": lap_term,
        "margin": margin,
        "relative_margin": relative,
        "holds": bool(relative >= -slack),
    }


def energy_identity_ladder(grid: Grid, w: WeightSpec, levels: int = 3,
                           margin: float = DEFAULT_MARGIN, component=0,
                           center: Optional[Sequence[float]] = None,
                           scale: float = 1.0) -> List[Dict[str, Any]]:
    """
    Refine N -> 2N-1 `levels` times with the same bump and report the defect
    per level with observed orders between consecutive levels.
    """
    rows: List[Dict[str, Any]] = []
    g = grid
    for level in range(levels):
        alpha = make_bump(g, margin, component=component, center=center, scale=scale)
        rep = verify_energy_identity(g, w, alpha)
        rows.append({"level": level, **rep.to_dict()})
        g = g.refine()
    hs = [r["h"] for r in rows]
    orders = observed_orders(hs, [abs(r["defect"]) for r in rows])
    comm_orders = observed_orders(hs, [abs(r["commutator_defect"]) for r in rows])
    for row, order, comm_order in zip(rows, orders, comm_orders):
        row["observed_order"] = order
        row["commutator_order"] = comm_order
    return rows
