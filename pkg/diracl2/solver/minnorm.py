# diracl2/solver/minnorm.py
"""
Minimal-norm solutions of Dbar u = f and the bound reports built on them.

u is sought in the range of the weighted adjoint: u = L* v with
L L* v = f at interior nodes, solved by conjugate gradients in the weighted
inner product. Among all u with L u = f this is the one of least weighted norm.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.linalg import lsqr

from ..algebra.multivector import norm0
from ..config import BOUND_SLACK, DEFAULT_TOL, NECESSITY_SLACK
from ..errors import BoundUndefinedError, GridError, NumericError, WeightError
from ..fields.field import (
    CliffordField,
    dual_operator_analytic,
    node_weights,
    weighted_inner,
    weighted_norm_sq,
)
from ..fields.weights import Quadratic0, WeightSpec
from ..util.logger import get_logger
from ..util.thread_utils import ordered_map
from .cg import conjugate_gradient
from .operator import DiscreteDiracOperator

logger = get_logger("diracl2.solver")


@dataclass
class SolveReport:
    weighted_norm_sq: float
    rhs_functional: Optional[float]
    bound_ratio: Optional[float]
    bound_ratio_unscaled: Optional[float]
    plain_norm_sq: float
    plain_rhs_norm_sq: float
    relative_residual: float
    iterations: int
    converged: bool
    tol: float
    max_iter: int
    bound_error: Optional[str] = None
    grid: Dict[str, Any] = field(default_factory=dict)
    weight: Dict[str, Any] = field(default_factory=dict)
    rhs: Dict[str, Any] = field(default_factory=dict)
    slab: Optional[Dict[str, Any]] = None
    minimality: Optional[Dict[str, Any]] = None
    necessity: Optional[Dict[str, Any]] = None

    def bound_holds(self, slack: float = BOUND_SLACK, scaled: bool = True) -> bool:
        ratio = self.bound_ratio if scaled else self.bound_ratio_unscaled
        return ratio is not None and ratio <= 1.0 + slack

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def default_max_iter(unknowns: int) -> int:
    return max(1, int(10 * math.sqrt(unknowns)))


def rhs_functional(f: CliffordField, w: WeightSpec) -> float:
    """int |f|_0^2 / lap(phi) e^{-phi}; needs lap(phi) > 0 wherever f is nonzero."""
    lap = w.laplacian_on(f.grid)
    dens = f.norm0_sq()
    support = dens > 0.0
    if np.any(lap[support] <= 0.0):
        bad = int(np.sum(lap[support] <= 0.0))
        raise BoundUndefinedError(f"lap(phi) <= 0 at {bad} nodes where f is nonzero")
    weights = node_weights(f.grid, w)
    ratio = np.zeros_like(dens)
    ratio[support] = dens[support] / lap[support]
    return float(np.sum(weights * ratio))


def _plain_norm_sq(f: CliffordField) -> float:
    return weighted_norm_sq(f, None)


def solve_min_norm(f: CliffordField, w: WeightSpec, tol: float = DEFAULT_TOL, max_iter: int = 0,
                   op: Optional[DiscreteDiracOperator] = None) -> Tuple[CliffordField, SolveReport]:
    """
    Minimal weighted-norm u with Dbar_h u = f at interior nodes.

    max_iter = 0 selects 10 * sqrt(unknowns). A solve that does not reach `tol`
    returns its last iterate with converged = False.
    """
    f.check_finite()
    if not tol > 0.0:
        raise NumericError(f"tol must be > 0, got {tol}")
    op = op or DiscreteDiracOperator(f.grid, w)
    op.grid.check_same(f.grid)
    n = f.n
    unknowns = int(np.prod(op.unknown_shape))
    max_iter = max_iter or default_max_iter(unknowns)

    b = op.restrict(f)
    logger.info("min-norm solve start: grid=%s weight=%s unknowns=%d tol=%.1e max_iter=%d",
                f.grid.extents, w.family, unknowns, tol, max_iter)
    result = conjugate_gradient(op.normal, b, op.inner_equations, tol, max_iter)
    u_vals = op.apply_adjoint(result.x)
    u = op.to_field(u_vals)

    bnorm = math.sqrt(op.inner_equations(b, b))
    resid = b - op.apply(u_vals)
    rel = math.sqrt(op.inner_equations(resid, resid)) / bnorm if bnorm > 0.0 else 0.0
    # the recursive CG residual may drift slightly from the recomputed one
    converged = result.converged and rel <= 2.0 * tol
    if converged:
        logger.info("min-norm solve converged: %d iterations, relative residual %.3e", result.iterations, rel)
    else:
        logger.warning("min-norm solve did not converge: %d iterations, relative residual %.3e",
                       result.iterations, rel)

    norm_u = weighted_norm_sq(u, w)
    bound_error = None
    rhs_val = ratio = ratio_unscaled = None
    try:
        rhs_val = rhs_functional(f, w)
    except BoundUndefinedError as exc:
        bound_error = str(exc)
        logger.warning("bound functional undefined: %s", exc)
    if rhs_val is not None:
        if rhs_val > 0.0:
            ratio_unscaled = norm_u / rhs_val
            ratio = ratio_unscaled / float(1 << (2 * n))
        else:
            ratio = ratio_unscaled = 0.0

    report = SolveReport(
        weighted_norm_sq=norm_u,
        rhs_functional=rhs_val,
        bound_ratio=ratio,
        bound_ratio_unscaled=ratio_unscaled,
        plain_norm_sq=_plain_norm_sq(u),
        plain_rhs_norm_sq=_plain_norm_sq(f),
        relative_residual=rel,
        iterations=result.iterations,
        converged=converged,
        tol=tol,
        max_iter=max_iter,
        bound_error=bound_error,
        grid=f.grid.describe(),
        weight=w.describe(),
    )
    return u, report


def slab_constant(a: float, b: float) -> float:
    """c(a, b) = e^{max(a^2, b^2)} / 2."""
    return math.exp(max(a * a, b * b)) / 2.0


def slab_bound_report(u: CliffordField, f: CliffordField, w: WeightSpec,
                      a: Optional[float] = None, b: Optional[float] = None) -> Dict[str, Any]:
    """
    Plain-L^2 ratio int |u|^2 / (2^{2n} c(a, b) int |f|^2) on a slab a <= x_0 <= b.
    Only meaningful for solves with phi = x_0^2.
    """
    if not isinstance(w, Quadratic0):
        raise WeightError(f"slab bound needs the quadratic0 weight, got {w.family}")
    u.grid.check_same(f.grid)
    grid = u.grid
    a = grid.lows[0] if a is None else float(a)
    b = grid.highs[0] if b is None else float(b)
    if not a < b:
        raise GridError(f"slab [{a}, {b}] is empty")
    if grid.lows[0] < a - 1e-12 or grid.highs[0] > b + 1e-12:
        raise GridError(f"grid x_0 range [{grid.lows[0]}, {grid.highs[0]}] leaves the slab [{a}, {b}]")
    c = slab_constant(a, b)
    nu = _plain_norm_sq(u)
    nf = _plain_norm_sq(f)
    scale = float(1 << (2 * grid.n))
    if nf > 0.0:
        ratio_unscaled = nu / (c * nf)
    else:
        ratio_unscaled = 0.0
    return {
        "a": a,
        "b": b,
        "c_ab": c,
        "plain_norm_sq": nu,
        "plain_rhs_norm_sq": nf,
        "ratio": ratio_unscaled / scale,
        "ratio_unscaled": ratio_unscaled,
    }


def necessity_check(u: CliffordField, f: CliffordField, w: WeightSpec,
                    alphas: Sequence[CliffordField], slack: float = NECESSITY_SLACK,
                    workers: Optional[int] = None) -> Dict[str, Any]:
    """
    With c' = ||u||^2_phi, check |(f, alpha)_phi|_0^2 <= c' ||D*_phi alpha||^2 (1 + slack)
    for every test field alpha.
    """
    c_prime = weighted_norm_sq(u, w)

    def pair(alpha: CliffordField) -> Dict[str, float]:
        pairing = norm0(weighted_inner(f, alpha, w)) ** 2
        dual = weighted_norm_sq(dual_operator_analytic(alpha, w), w)
        bound = c_prime * dual
        ratio = pairing / bound if bound > 0.0 else (0.0 if pairing == 0.0 else math.inf)
        return {"pairing": pairing, "bound": bound, "ratio": ratio}

    rows = ordered_map(pair, alphas, workers)
    worst = max((r["ratio"] for r in rows), default=0.0)
    return {
        "c_prime": c_prime,
        "count": len(rows),
        "max_ratio": worst,
        "slack": slack,
        "holds": bool(worst <= 1.0 + slack),
        "rows": rows,
    }


def minimality_check(op: DiscreteDiracOperator, u: CliffordField, samples: int = 3, seed: int = 0,
                     tol: float = DEFAULT_TOL, max_iter: int = 0,
                     workers: Optional[int] = None) -> Dict[str, Any]:
    """
    Project seeded random fields r onto ker L and report the largest normalized
    pairing |<u, z>_W| / (||u||_W ||z||_W).

    The projection z = r - x uses scipy's LSQR on the weighted operator view,
    where x is the minimal-norm solution of L x = L r. This solver is
    independent of the conjugate gradients that produced u.
    """
    op.grid.check_same(u.grid)
    max_iter = max_iter or default_max_iter(int(np.prod(op.unknown_shape)))
    A = op.as_linear_operator()
    nu = math.sqrt(op.inner_unknowns(u.values, u.values))

    def sample(k: int) -> Dict[str, Any]:
        rng = np.random.default_rng([int(seed), k])
        r = rng.standard_normal(op.unknown_shape)
        y_r = op.to_weighted(r)
        sol = lsqr(A, A.matvec(y_r), atol=tol, btol=tol, iter_lim=max_iter)
        z = op.from_weighted(y_r - sol[0])
        nz = math.sqrt(op.inner_unknowns(z, z))
        lz = math.sqrt(op.inner_equations(op.apply(z), op.apply(z)))
        pairing = abs(op.inner_unknowns(u.values, z)) / (nu * nz) if nu > 0.0 and nz > 0.0 else 0.0
        return {"pairing": pairing, "null_residual": lz / nz if nz > 0.0 else 0.0,
                "iterations": int(sol[2]), "converged": int(sol[1]) in (1, 2)}

    rows = ordered_map(sample, range(samples), workers)
    worst = max((r["pairing"] for r in rows), default=0.0)
    return {"samples": samples, "seed": seed, "max_pairing": worst, "rows": rows}
