"""Cross-scale tracking of diagram points ("vines") and the stable diagram.

Adjacent-scale diagrams are matched one homology degree at a time. An
accepted match either extends the vine its source point already belongs to
or starts a new one; a tracked point left unmatched ends its vine. Vines are
scored by a persistence-weighted smoothness and the survivors are each
represented by the source point of their middle segment.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .field import ScalePyramid
from .matching import DistanceMetric, match_diagrams
from .persistence import PersistenceDiagram, PersistencePoint, compute_pd

DEFAULT_TAU_M = 0.3
DEFAULT_TAU_S = 0.7
DEFAULT_METRIC = DistanceMetric.RELATIVE_PERSISTENCE
DEGREES = (0, 1)
WEIGHT_FLOOR = 0.1


@dataclass(frozen=True)
class VineSegment:
    scale_from: int
    point_from: PersistencePoint
    point_to: PersistencePoint
    distance: float

    @property
    def pers_from(self) -> float:
        return self.point_from.birth - self.point_from.death

    @property
    def pers_to(self) -> float:
        return self.point_to.birth - self.point_to.death

    @property
    def weight(self) -> float:
        return max(WEIGHT_FLOOR, (self.pers_from + self.pers_to) / 2.0)


@dataclass
class Vine:
    """Chain of matched points across consecutive scales.

    Scales are 1-based; ``death_scale`` is the scale at which the vine was
    found unmatched, or the last scale if it survived to the end.
    """

    vine_id: int
    degree: int
    segments: List[VineSegment]
    birth_scale: int
    death_scale: int = -1

    def __len__(self):
        return len(self.segments)

    @property
    def scales(self) -> Tuple[int, int]:
        return self.birth_scale, self.birth_scale + len(self.segments)

    def to_dict(self) -> dict:
        return {
            "vine_id": self.vine_id,
            "degree": self.degree,
            "birth_scale": self.birth_scale,
            "death_scale": self.death_scale,
            "sigma": stability_score(self),
            "segments": [
                [s.scale_from, s.point_from.birth, s.point_from.death,
                 s.point_to.birth, s.point_to.death, s.distance]
                for s in self.segments
            ],
        }


@dataclass(frozen=True)
class StablePoint:
    degree: int
    birth: float
    death: float
    sigma: float
    medial_scale: int
    vine_id: int
    essential: bool = False


@dataclass(frozen=True)
class StableDiagram:
    points: Tuple[StablePoint, ...]
    filtration_tag: str = "intensity"

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def in_degree(self, degree: int) -> Tuple[StablePoint, ...]:
        return tuple(p for p in self.points if p.degree == degree)

    def as_array(self, degree: int = None) -> np.ndarray:
        pts = self.points if degree is None else self.in_degree(degree)
        return np.array([[p.birth, p.death] for p in pts], dtype=np.float64).reshape(-1, 2)


def _degree_points(pd: PersistenceDiagram, degree: int) -> List[PersistencePoint]:
    return [p for p in pd if p.degree == degree]


def track_vines(pds: Sequence[PersistenceDiagram], degree: int, metric=DEFAULT_METRIC,
                tau_m: float = DEFAULT_TAU_M, first_id: int = 0) -> List[Vine]:
    """Assemble vines for one homology degree across finest-first diagrams.

    Vines are returned in the order they were completed; ids follow creation
    order starting at ``first_id``.
    """
    pds = list(pds)
    if len(pds) < 2:
        raise ValueError("vine tracking needs at least two diagrams")
    tags = {pd.filtration_tag for pd in pds}
    if len(tags) != 1:
        raise ValueError(f"diagrams mix filtrations: {sorted(tags)}")
    metric = DistanceMetric.parse(metric)
    n = len(pds)
    points = [_degree_points(pd, degree) for pd in pds]

    active: Dict[int, Vine] = {}
    complete: List[Vine] = []
    next_id = first_id
    for i in range(1, n):
        A, B = points[i - 1], points[i]
        result = match_diagrams(pds[i - 1], pds[i], degree, metric, tau_m)
        nxt: Dict[int, Vine] = {}
        matched_src = set()
        for a, b, dist in result.pairs:
            seg = VineSegment(i, A[a], B[b], dist)
            if a in active:
                vine = active[a]
                vine.segments.append(seg)
            else:
                vine = Vine(next_id, degree, [seg], birth_scale=i)
                next_id += 1
            nxt[b] = vine
            matched_src.add(a)
        for a in sorted(active):
            if a not in matched_src:
                active[a].death_scale = i + 1
                complete.append(active[a])
        active = nxt
    for b in sorted(active):
        active[b].death_scale = n
        complete.append(active[b])
    return complete


def stability_score(vine: Vine) -> float:
    """Persistence-weighted mean of ``1 / (1 + distance)`` over the segments.

    Each segment weighs the mean persistence of its endpoints, floored at 0.1.
    """
    if not vine.segments:
        raise ValueError("a vine needs at least one segment")
    num = den = 0.0
    for s in vine.segments:
        w = s.weight
        num += w / (1.0 + s.distance)
        den += w
    return num / den


def stable_diagram(vines: Sequence[Vine], tau_s: float = DEFAULT_TAU_S,
                   filtration_tag: str = "intensity") -> StableDiagram:
    if not 0.0 <= tau_s <= 1.0:
        raise ValueError("tau_s must lie in [0, 1]")
    out = []
    for v in vines:
        sigma = stability_score(v)
        if sigma < tau_s:
            continue
        m = len(v.segments) // 2
        seg = v.segments[m]
        p = seg.point_from
        out.append(StablePoint(p.degree, p.birth, p.death, sigma, seg.scale_from,
                               v.vine_id, p.essential))
    return StableDiagram(tuple(out), filtration_tag)


def pyramid_diagrams(pyramid: ScalePyramid, keep_zero_persistence: bool = False) -> List[PersistenceDiagram]:
    return [compute_pd(level, i, pyramid.filtration_tag, keep_zero_persistence)
            for i, level in enumerate(pyramid.levels, start=1)]


def vines_from_diagrams(pds: Sequence[PersistenceDiagram], metric=DEFAULT_METRIC,
                        tau_m: float = DEFAULT_TAU_M) -> List[Vine]:
    """Vines of every degree; ids are unique across degrees."""
    vines: List[Vine] = []
    for degree in DEGREES:
        vines += track_vines(pds, degree, metric, tau_m, first_id=len(vines))
    return vines


def stabilize_diagrams(pds: Sequence[PersistenceDiagram], metric=DEFAULT_METRIC,
                       tau_m: float = DEFAULT_TAU_M, tau_s: float = DEFAULT_TAU_S) -> StableDiagram:
    pds = list(pds)
    vines = vines_from_diagrams(pds, metric, tau_m)
    return stable_diagram(vines, tau_s, pds[0].filtration_tag)


def stabilize(pyramid: ScalePyramid, metric=DEFAULT_METRIC, tau_m: float = DEFAULT_TAU_M,
              tau_s: float = DEFAULT_TAU_S, keep_zero_persistence: bool = False) -> StableDiagram:
    """Stable diagram of a pyramid: degree-wise union of the per-degree results."""
    if len(pyramid) < 2:
        raise ValueError("stabilization needs a pyramid with at least two levels")
    return stabilize_diagrams(pyramid_diagrams(pyramid, keep_zero_persistence), metric, tau_m, tau_s)
