# diracl2/fields/stencils.py
"""
Second-order finite-difference matrices (scipy.sparse) and their application
along one axis of an N-d array.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from ..errors import GridError


@lru_cache(maxsize=64)
def first_derivative_matrix(N: int, h: float) -> sp.csr_matrix:
    """
    Central differences inside, second-order one-sided at both ends
    (row 0: (-3f0 + 4f1 - f2)/2h; row N-1: (3f_{N-1} - 4f_{N-2} + f_{N-3})/2h).
    """
    if N < 3:
        raise GridError(f"first derivative needs at least 3 nodes, got {N}")
    D = sp.lil_matrix((N, N))
    inv = 1.0 / (2.0 * h)
    D[0, 0:3] = np.array([-3.0, 4.0, -1.0]) * inv
    for k in range(1, N - 1):
        D[k, k - 1] = -inv
        D[k, k + 1] = inv
    D[N - 1, N - 3:N] = np.array([1.0, -4.0, 3.0]) * inv
    return D.tocsr()


@lru_cache(maxsize=64)
def second_derivative_matrix(N: int, h: float) -> sp.csr_matrix:
    """3-point stencil inside; 4-point one-sided (2, -5, 4, -1)/h^2 at the ends when N >= 4."""
    if N < 3:
        raise GridError(f"second derivative needs at least 3 nodes, got {N}")
    D = sp.lil_matrix((N, N))
    inv = 1.0 / (h * h)
    for k in range(1, N - 1):
        D[k, k - 1] = inv
        D[k, k] = -2.0 * inv
        D[k, k + 1] = inv
    if N >= 4:
        D[0, 0:4] = np.array([2.0, -5.0, 4.0, -1.0]) * inv
        D[N - 1, N - 4:N] = np.array([-1.0, 4.0, -5.0, 2.0]) * inv
    else:
        # three nodes: the only second difference available, first order at the ends
        D[0, 0:3] = np.array([1.0, -2.0, 1.0]) * inv
        D[N - 1, 0:3] = np.array([1.0, -2.0, 1.0]) * inv
    return D.tocsr()


def apply_along_axis(mat: sp.spmatrix, values: np.ndarray, axis: int) -> np.ndarray:
    """mat @ values along `axis` (all other axes, including components, ride along)."""
    moved = np.moveaxis(values, axis, 0)
    lead = moved.shape[0]
    if mat.shape[1] != lead:
        raise GridError(f"operator width {mat.shape[1]} does not match axis length {lead}")
    flat = moved.reshape(lead, -1)
    out = np.asarray(mat @ flat).reshape((mat.shape[0],) + moved.shape[1:])
    return np.moveaxis(out, 0, axis)


def partial(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    return apply_along_axis(first_derivative_matrix(values.shape[axis], float(h)), values, axis)


def partial_transpose(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    return apply_along_axis(first_derivative_matrix(values.shape[axis], float(h)).T.tocsr(), values, axis)


def second_partial(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    return apply_along_axis(second_derivative_matrix(values.shape[axis], float(h)), values, axis)


def observed_orders(hs, errors):
    """log2-style orders between consecutive levels; None where undefined."""
    out = [None]
    for k in range(1, len(errors)):
        e0, e1 = errors[k - 1], errors[k]
        h0, h1 = hs[k - 1], hs[k]
        if e0 is None or e1 is None or e0 <= 0.0 or e1 <= 0.0 or h0 == h1:
            out.append(None)
        else:
            out.append(float(np.log(e0 / e1) / np.log(h0 / h1)))
    return out
