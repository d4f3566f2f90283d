"""Point distances, cost matrices and thresholded optimal matching between diagrams."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
from numba import njit

from .persistence import PersistenceDiagram, PersistencePoint


class DistanceMetric(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    PERSISTENCE_SCALED = "persistence_scaled"
    RELATIVE_PERSISTENCE = "relative_persistence"

    @classmethod
    def parse(cls, value: Union[str, "DistanceMetric"]) -> "DistanceMetric":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        if key in _ALIASES:
            return _ALIASES[key]
        raise ValueError(f"unknown distance metric {value!r}; expected one of {sorted(_ALIASES)}")


_ALIASES = {
    "euclidean": DistanceMetric.EUCLIDEAN,
    "wasserstein": DistanceMetric.EUCLIDEAN,
    "persistence_scaled": DistanceMetric.PERSISTENCE_SCALED,
    "pscaled": DistanceMetric.PERSISTENCE_SCALED,
    "relative_persistence": DistanceMetric.RELATIVE_PERSISTENCE,
    "relpers": DistanceMetric.RELATIVE_PERSISTENCE,
}


def _pairwise(bp, dp, bq, dq, metric: DistanceMetric):
    """Broadcasting core shared by the scalar and matrix entry points."""
    base = np.hypot(bp - bq, dp - dq)
    if metric is DistanceMetric.EUCLIDEAN:
        return base
    pp = bp - dp
    pq = bq - dq
    if metric is DistanceMetric.PERSISTENCE_SCALED:
        return base / (1.0 + (pp + pq) / 2.0)
    hi = np.maximum(pp, pq)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(hi > 0, np.abs(pp - pq) / np.where(hi > 0, hi, 1.0), 0.0)
    return base * (1.0 + frac)


def point_distance(p: PersistencePoint, q: PersistencePoint, metric="relative_persistence") -> float:
    """Distance between two same-degree points.

    ``euclidean`` is the plain L2 distance of (birth, death);
    ``persistence_scaled`` divides it by one plus the mean persistence;
    ``relative_persistence`` multiplies it by one plus the relative
    persistence gap (taken as zero when both persistences are zero).
    """
    p, q = PersistencePoint(*p), PersistencePoint(*q)
    if p.degree != q.degree:
        raise ValueError(f"cannot compare a degree-{p.degree} point with a degree-{q.degree} point")
    metric = DistanceMetric.parse(metric)
    return float(_pairwise(np.float64(p.birth), np.float64(p.death),
                           np.float64(q.birth), np.float64(q.death), metric))


def distance_matrix(A: PersistenceDiagram, B: PersistenceDiagram, degree: int,
                    metric="relative_persistence") -> np.ndarray:
    """``|A_deg| x |B_deg|`` matrix of point distances, in canonical point order."""
    metric = DistanceMetric.parse(metric)
    ma, mb = A.in_degree(degree), B.in_degree(degree)
    return _pairwise(A.birth[ma][:, None], A.death[ma][:, None],
                     B.birth[mb][None, :], B.death[mb][None, :], metric)


@njit(cache=True, nogil=True)
def _hungarian(cost):
    """Shortest-augmenting-path Hungarian method on a square matrix.

    Columns are scanned in ascending order with strict comparisons, so among
    equal-cost choices the lowest (row, col) found first is kept.
    Returns ``col_of_row``.
    """
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    row_of = np.zeros(n + 1, dtype=np.int64)  # row_of[j]: 1-based row in column j
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        row_of[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=np.bool_)
        while True:
            used[j0] = True
            i0 = row_of[j0]
            delta = np.inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[row_of[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if row_of[j0] == 0:
                break
        while True:
            j1 = way[j0]
            row_of[j0] = row_of[j1]
            j0 = j1
            if j0 == 0:
                break
    col_of = np.empty(n, dtype=np.int64)
    for j in range(1, n + 1):
        col_of[row_of[j] - 1] = j - 1
    return col_of


def solve_assignment(D, threshold: float = 0.0) -> List[Tuple[int, int]]:
    """Minimum-cost one-to-one assignment of ``min(rows, cols)`` pairs.

    Rectangular inputs are padded to square with a sentinel strictly above
    ``threshold + max(D)``; pairs landing on padding are dropped. Returns
    ``(row, col)`` pairs sorted by row.
    """
    D = np.asarray(D, dtype=np.float64)
    if D.ndim != 2:
        raise ValueError("cost matrix must be 2D")
    r, c = D.shape
    if r == 0 or c == 0:
        return []
    if not np.isfinite(D).all() or (D < 0).any():
        raise ValueError("costs must be finite and non-negative")
    n = max(r, c)
    if r == c:
        square = D
    else:
        sentinel = threshold + float(D.max()) + 1.0
        square = np.full((n, n), sentinel)
        square[:r, :c] = D
    col_of = _hungarian(np.ascontiguousarray(square))
    return [(i, int(col_of[i])) for i in range(r) if col_of[i] < c]


def assignment_cost(D, assignment) -> float:
    D = np.asarray(D, dtype=np.float64)
    return float(sum(D[i, j] for i, j in assignment))


@dataclass(frozen=True)
class MatchResult:
    pairs: Tuple[Tuple[int, int, float], ...] = ()
    unmatched_A: Tuple[int, ...] = ()
    unmatched_B: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "pairs": [[a, b, d] for a, b, d in self.pairs],
            "unmatched_A": list(self.unmatched_A),
            "unmatched_B": list(self.unmatched_B),
        }


def match_diagrams(A: PersistenceDiagram, B: PersistenceDiagram, degree: int,
                   metric="relative_persistence", tau_m: float = 0.3) -> MatchResult:
    """Optimal assignment between the degree-``degree`` points of two diagrams,
    keeping only pairs whose distance is at most ``tau_m``.

    Indices refer to positions among that degree's points in canonical order.
    """
    if tau_m < 0:
        raise ValueError("tau_m must be non-negative")
    D = distance_matrix(A, B, degree, metric)
    pairs = tuple((a, b, float(D[a, b])) for a, b in solve_assignment(D, tau_m) if D[a, b] <= tau_m)
    used_a = {a for a, _, _ in pairs}
    used_b = {b for _, b, _ in pairs}
    return MatchResult(
        pairs=pairs,
        unmatched_A=tuple(i for i in range(D.shape[0]) if i not in used_a),
        unmatched_B=tuple(j for j in range(D.shape[1]) if j not in used_b),
    )
