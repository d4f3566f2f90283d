"""Reference persistence by explicit boundary-matrix reduction over GF(2).

Slow and small on purpose: it shares no code with the union-find path in
:mod:`stablepd.persistence` and exists to check it.
"""
from __future__ import annotations

import numpy as np

from .field import ScalarField
from .persistence import PersistenceDiagram

DEFAULT_LIMIT = 16 * 16


class OracleLimitError(ValueError):
    pass


def cubical_cells(values: np.ndarray):
    """All cells of the V-construction on a ``(h, w)`` grid.

    Cells live on the doubled grid ``(2h-1) x (2w-1)``: a cell at ``(y, x)``
    has dimension ``y % 2 + x % 2`` and its pixels are the even-coordinate
    points it spans. Yields ``(y, x, dim, value)``.
    """
    h, w = values.shape
    for y in range(2 * h - 1):
        for x in range(2 * w - 1):
            ys = (y // 2,) if y % 2 == 0 else (y // 2, y // 2 + 1)
            xs = (x // 2,) if x % 2 == 0 else (x // 2, x // 2 + 1)
            val = min(values[i, j] for i in ys for j in xs)
            yield y, x, y % 2 + x % 2, float(val)


def _facets(y: int, x: int):
    out = []
    if y % 2:
        out += [(y - 1, x), (y + 1, x)]
    if x % 2:
        out += [(y, x - 1), (y, x + 1)]
    return out


def oracle_pairs(values: np.ndarray):
    """Raw persistence pairs ``(dim, birth, death)`` and essentials ``(dim, birth)``."""
    cells = list(cubical_cells(values))
    # descending value, then ascending dimension, then lexicographic coords
    cells.sort(key=lambda c: (-c[3], c[2], c[0], c[1]))
    pos = {(c[0], c[1]): i for i, c in enumerate(cells)}
    pivot_owner = {}
    pairs = []
    paired = set()
    for j, (y, x, dim, val) in enumerate(cells):
        col = 0
        for f in _facets(y, x):
            col ^= 1 << pos[f]
        while col:
            low = col.bit_length() - 1
            if low not in pivot_owner:
                break
            col ^= pivot_owner[low]
        if col:
            low = col.bit_length() - 1
            pivot_owner[low] = col
            b = cells[low]
            pairs.append((b[2], b[3], val))
            paired.add(low)
            paired.add(j)
    essentials = [(cells[i][2], cells[i][3]) for i in range(len(cells)) if i not in paired]
    return pairs, essentials


def oracle_pd(f, scale_index: int = 1, filtration_tag: str = "intensity",
              keep_zero_persistence: bool = False, limit: int = DEFAULT_LIMIT) -> PersistenceDiagram:
    values = f.values if isinstance(f, ScalarField) else np.asarray(f, dtype=np.float64)
    if values.ndim != 2 or values.size == 0:
        raise ValueError("expected a non-empty 2D field")
    if values.size > limit:
        raise OracleLimitError(f"field has {values.size} pixels; oracle limit is {limit}")
    pairs, essentials = oracle_pairs(values)
    fmin = float(values.min())
    rows = [(dim, b, d, False) for dim, b, d in pairs if keep_zero_persistence or b > d]
    rows += [(dim, b, fmin, True) for dim, b in essentials]
    return PersistenceDiagram.from_points(rows, scale_index, filtration_tag)
