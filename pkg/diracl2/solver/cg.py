# diracl2/solver/cg.py
"""
Conjugate gradients for a self-adjoint positive semidefinite operator in a
caller-supplied inner product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from ..errors import NumericError
from ..util.logger import get_logger

logger = get_logger("diracl2.solver")

Apply = Callable[[np.ndarray], np.ndarray]
Inner = Callable[[np.ndarray, np.ndarray], float]


@dataclass
class CGResult:
    x: np.ndarray
    iterations: int
    converged: bool
    relative_residual: float
    history: List[float] = field(default_factory=list)


def conjugate_gradient(A: Apply, b: np.ndarray, inner: Inner, tol: float,
                       max_iter: int, x0: Optional[np.ndarray] = None) -> CGResult:
    """
    Solve A x = b. Stops when ||b - A x|| <= tol ||b|| in the given inner product.
    A zero right-hand side returns x = 0 after no iterations.
    """
    if not tol > 0.0:
        raise NumericError(f"tol must be > 0, got {tol}")
    bnorm = math.sqrt(max(inner(b, b), 0.0))
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
    if bnorm == 0.0:
        return CGResult(np.zeros_like(b), 0, True, 0.0, [])
    r = b - A(x) if x0 is not None else b.copy()
    p = r.copy()
    rs_old = inner(r, r)
    history = [math.sqrt(rs_old) / bnorm]
    if history[-1] <= tol:
        return CGResult(x, 0, True, history[-1], history)

    for it in range(1, max_iter + 1):
        Ap = A(p)
        curv = inner(p, Ap)
        if not np.isfinite(curv):
            raise NumericError("non-finite curvature in conjugate gradients")
        if curv <= 0.0:
            # direction in the null space of A; b is not in the range
            logger.warning("conjugate gradients hit a null direction at iteration %d", it)
            return CGResult(x, it, False, history[-1], history)
        alpha = rs_old / curv
        x = x + alpha * p
        r = r - alpha * Ap
        rs_new = inner(r, r)
        rel = math.sqrt(max(rs_new, 0.0)) / bnorm
        history.append(rel)
        if rel <= tol:
            return CGResult(x, it, True, rel, history)
        p = r + (rs_new / rs_old) * p
        rs_old = rs_new

    return CGResult(x, max_iter, False, history[-1], history)
