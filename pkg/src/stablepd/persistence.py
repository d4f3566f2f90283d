"""Cubical persistence of 2D scalar fields under the super-level filtration.

The complex is the V-construction: pixels are vertices, 4-neighbours are
joined by edges and a unit square is filled once its four pixels are in.
Every cell therefore enters at the minimum of its pixel values.

Points are stored with ``birth >= death``. The one component that never
dies is flagged ``essential`` and given ``death = min(field)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Tuple

import numpy as np

from . import _kernels
from .field import FILTRATIONS, ScalarField


class PersistencePoint(NamedTuple):
    degree: int
    birth: float
    death: float
    essential: bool = False

    @property
    def persistence(self) -> float:
        return self.birth - self.death


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Multiset of persistence points for one field at one scale.

    Points are held column-wise in four arrays and kept in canonical order:
    degree ascending, then birth descending, death descending, essential
    first. Positions in this order are the point indices used by matching.
    """

    degree: np.ndarray
    birth: np.ndarray
    death: np.ndarray
    essential: np.ndarray
    scale_index: int = 1
    filtration_tag: str = "intensity"

    def __post_init__(self):
        deg = np.asarray(self.degree, dtype=np.int64).ravel()
        b = np.asarray(self.birth, dtype=np.float64).ravel()
        d = np.asarray(self.death, dtype=np.float64).ravel()
        ess = np.asarray(self.essential, dtype=bool).ravel()
        if not (len(deg) == len(b) == len(d) == len(ess)):
            raise ValueError("degree, birth, death and essential must have equal length")
        if len(deg) and not np.isin(deg, (0, 1)).all():
            raise ValueError("only degrees 0 and 1 are supported")
        if np.any(b < d):
            raise ValueError("super-level points need birth >= death")
        if self.scale_index < 1:
            raise ValueError("scale_index is 1-based")
        if self.filtration_tag not in FILTRATIONS:
            raise ValueError(f"unknown filtration {self.filtration_tag!r}")
        order = np.lexsort((~ess, -d, -b, deg))
        for name, arr in (("degree", deg), ("birth", b), ("death", d), ("essential", ess)):
            arr = arr[order]
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_points(cls, points, scale_index: int = 1, filtration_tag: str = "intensity"):
        pts = [PersistencePoint(*p) for p in points]
        return cls(
            degree=[p.degree for p in pts],
            birth=[p.birth for p in pts],
            death=[p.death for p in pts],
            essential=[p.essential for p in pts],
            scale_index=scale_index,
            filtration_tag=filtration_tag,
        )

    def __len__(self) -> int:
        return len(self.degree)

    def __iter__(self) -> Iterator[PersistencePoint]:
        for k, b, d, e in zip(self.degree.tolist(), self.birth.tolist(),
                              self.death.tolist(), self.essential.tolist()):
            yield PersistencePoint(k, b, d, e)

    @property
    def points(self) -> Tuple[PersistencePoint, ...]:
        return tuple(self)

    @property
    def persistence(self) -> np.ndarray:
        return self.birth - self.death

    def in_degree(self, degree: int) -> np.ndarray:
        """Boolean mask over points of the given degree."""
        return self.degree == degree

    def restrict(self, degree: int) -> "PersistenceDiagram":
        m = self.in_degree(degree)
        return PersistenceDiagram(self.degree[m], self.birth[m], self.death[m], self.essential[m],
                                  self.scale_index, self.filtration_tag)

    def as_array(self, degree: int = None) -> np.ndarray:
        """``(n, 2)`` array of (birth, death), optionally for one degree."""
        m = slice(None) if degree is None else self.in_degree(degree)
        return np.column_stack([self.birth[m], self.death[m]])

    def without_zero_persistence(self) -> "PersistenceDiagram":
        keep = (self.birth > self.death) | self.essential
        return PersistenceDiagram(self.degree[keep], self.birth[keep], self.death[keep],
                                  self.essential[keep], self.scale_index, self.filtration_tag)

    def same_points(self, other: "PersistenceDiagram") -> bool:
        """Exact multiset equality of (degree, birth, death, essential)."""
        return (
            len(self) == len(other)
            and np.array_equal(self.degree, other.degree)
            and np.array_equal(self.birth, other.birth)
            and np.array_equal(self.death, other.death)
            and np.array_equal(self.essential, other.essential)
        )

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return (self.same_points(other) and self.scale_index == other.scale_index
                and self.filtration_tag == other.filtration_tag)


def _as_values(f) -> np.ndarray:
    if isinstance(f, ScalarField):
        return f.values
    v = np.asarray(f, dtype=np.float64)
    if v.ndim != 2 or v.size == 0:
        raise ValueError("expected a non-empty 2D field")
    if not np.isfinite(v).all():
        raise ValueError("field values must be finite")
    return v


def compute_pd(f, scale_index: int = 1, filtration_tag: str = "intensity",
               keep_zero_persistence: bool = False) -> PersistenceDiagram:
    """Degree-0 and degree-1 super-level persistence of ``f``.

    With ``keep_zero_persistence`` the full pairing is returned, including
    every ``birth == death`` pair the filtration produces (one per pixel or
    square absorbed at its own entry value). By default those are dropped
    and only the essential point may have zero persistence.
    """
    v = _as_values(f)
    h, w = v.shape
    flat = np.ascontiguousarray(v.ravel())
    order = np.argsort(-flat, kind="stable")
    b0, d0, ess = _kernels.superlevel_h0(flat, order, h, w)
    b1, d1 = _kernels.superlevel_h1(flat, order, h, w)

    births = np.concatenate([flat[b0], flat[[ess]], flat[b1]])
    deaths = np.concatenate([flat[d0], [flat.min()], flat[d1]])
    degrees = np.concatenate([np.zeros(len(b0) + 1, np.int64), np.ones(len(b1), np.int64)])
    essential = np.zeros(len(births), dtype=bool)
    essential[len(b0)] = True
    if not keep_zero_persistence:
        keep = (births > deaths) | essential
        births, deaths, degrees, essential = births[keep], deaths[keep], degrees[keep], essential[keep]
    return PersistenceDiagram(degrees, births, deaths, essential, scale_index, filtration_tag)


def betti_at(pd: PersistenceDiagram, tau: float) -> Tuple[int, int]:
    """Betti numbers of the super-level set ``{f >= tau}`` read off a diagram."""
    alive = (pd.birth >= tau) & ((pd.death < tau) | pd.essential)
    return (int(np.count_nonzero(alive & (pd.degree == 0))),
            int(np.count_nonzero(alive & (pd.degree == 1))))
