# diracl2/storage/field_writer.py
"""
Field snapshots.

Binary layout, little-endian: int32 n, int32 ndim, int32 extents[ndim],
float64 lows[ndim], float64 highs[ndim], then float64 coefficients in
node-major (C order over the axes), blade-minor (masks ascending) order.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..algebra.blades import Blade
from ..errors import GridError
from ..fields.field import CliffordField
from ..fields.grid import Grid
from ..util.logger import get_logger

logger = get_logger("diracl2.storage")

_I4 = np.dtype("<i4")
_F8 = np.dtype("<f8")


def write_field_binary(field: CliffordField, path: Path) -> None:
    grid = field.grid
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("wb") as fh:
        fh.write(np.array([grid.n, grid.ndim, *grid.extents], dtype=_I4).tobytes())
        fh.write(np.array([*grid.lows, *grid.highs], dtype=_F8).tobytes())
        fh.write(np.ascontiguousarray(field.values, dtype=_F8).tobytes())
    tmp.replace(path)
    logger.info("field snapshot written: %s (%d nodes)", path, grid.num_nodes)


def read_field_binary(path: Path) -> CliffordField:
    raw = Path(path).read_bytes()
    head = np.frombuffer(raw, dtype=_I4, count=2)
    if head.size < 2:
        raise GridError(f"{path}: truncated header")
    n, ndim = int(head[0]), int(head[1])
    if ndim != n + 1:
        raise GridError(f"{path}: header has n={n} but ndim={ndim}")
    offset = 2 * _I4.itemsize
    extents = tuple(int(v) for v in np.frombuffer(raw, dtype=_I4, count=ndim, offset=offset))
    offset += ndim * _I4.itemsize
    bounds = np.frombuffer(raw, dtype=_F8, count=2 * ndim, offset=offset)
    offset += 2 * ndim * _F8.itemsize
    grid = Grid(n, extents, tuple(bounds[:ndim]), tuple(bounds[ndim:]))
    count = grid.num_nodes * grid.components
    if len(raw) - offset != count * _F8.itemsize:
        raise GridError(f"{path}: expected {count} coefficients after the header")
    values = np.frombuffer(raw, dtype=_F8, count=count, offset=offset)
    return CliffordField(grid, values.reshape(grid.shape + (grid.components,)))


def write_field_csv(field: CliffordField, path: Path, precision: int = 17) -> None:
    """One row per node: coordinates x0..xn then one column per blade."""
    grid = field.grid
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labels = [Blade(grid.n, m).label() for m in range(grid.components)]
    coords = np.stack([x.ravel() for x in grid.mesh], axis=1)
    coeffs = field.values.reshape(-1, grid.components)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(f"# n={grid.n} extents={','.join(map(str, grid.extents))} "
                 f"lows={','.join(map(repr, grid.lows))} highs={','.join(map(repr, grid.highs))}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{i}" for i in range(grid.ndim)] + labels)
        for xs, cs in zip(coords, coeffs):
            writer.writerow([f"{v:.{precision}g}" for v in xs] + [f"{v:.{precision}g}" for v in cs])
