# diracl2/algebra/arrays.py
"""
Per-node Clifford products on float64 arrays whose last axis holds the 2^n
blade coefficients (blade masks ascending).
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionError
from .blades import Involution, involution_signs, sign_column, signs_for


def _check(x: np.ndarray, n: int) -> None:
    if x.shape[-1] != 1 << n:
        raise DimensionError(f"last axis must hold {1 << n} components, got {x.shape[-1]}")


def field_mul(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    """Pointwise geometric product x(k) y(k); broadcasting over leading axes."""
    _check(x, n)
    _check(y, n)
    idx = np.arange(1 << n)
    shape = np.broadcast_shapes(x.shape, y.shape)
    out = np.zeros(shape, dtype=np.result_type(x, y, np.float64))
    for a in range(1 << n):
        xa = x[..., a:a + 1]
        if not np.any(xa):
            continue
        out[..., a ^ idx] += signs_for(a, n) * xa * y
    return out


def left_blade(mask: int, x: np.ndarray, n: int) -> np.ndarray:
    """e_mask * x as a signed permutation of components."""
    _check(x, n)
    idx = np.arange(1 << n)
    out = np.empty_like(x)
    out[..., mask ^ idx] = signs_for(mask, n) * x
    return out


def right_blade(x: np.ndarray, mask: int, n: int) -> np.ndarray:
    """x * e_mask as a signed permutation of components."""
    _check(x, n)
    idx = np.arange(1 << n)
    out = np.empty_like(x)
    out[..., idx ^ mask] = sign_column(mask, n) * x
    return out


def generator_mask(i: int) -> int:
    """Mask of e_i; i == 0 is the unit."""
    return 0 if i == 0 else 1 << (i - 1)


def conj_generator_sign(i: int) -> int:
    """bar(e_i) = +e_0 for i == 0, -e_i otherwise."""
    return 1 if i == 0 else -1


def apply_generator(x: np.ndarray, i: int, n: int, side: str = "left", conjugated: bool = False) -> np.ndarray:
    """(e_i or bar e_i) multiplied onto x from the given side."""
    mask = generator_mask(i)
    if side == "left":
        out = left_blade(mask, x, n)
    elif side == "right":
        out = right_blade(x, mask, n)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if conjugated and conj_generator_sign(i) < 0:
        out = -out
    return out


def field_involution(x: np.ndarray, n: int, kind: Involution | str = Involution.BAR) -> np.ndarray:
    _check(x, n)
    return x * involution_signs(n, Involution(kind).value)


def norm0_sq(x: np.ndarray, n: int) -> np.ndarray:
    """|x|_0^2 = 2^n sum_A x_A^2 at every node."""
    _check(x, n)
    return float(1 << n) * np.sum(x * x, axis=-1)


def scalar_of_product(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    """[x y]_0 at every node without forming the full product."""
    _check(x, n)
    _check(y, n)
    # [e_A e_B]_0 is nonzero only for B == A, with sign of e_A e_A
    diag = np.array([signs_for(a, n)[a] for a in range(1 << n)], dtype=np.float64)
    return np.sum(x * y * diag, axis=-1)
