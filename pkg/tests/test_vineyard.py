import math

import numpy as np
import pytest

from stablepd.field import ScalarField, build_pyramid
from stablepd.persistence import PersistenceDiagram, PersistencePoint
from stablepd.vineyard import (DEFAULT_METRIC, DEFAULT_TAU_M, DEFAULT_TAU_S, Vine, VineSegment,
                               stability_score, stabilize, stable_diagram, track_vines,
                               vines_from_diagrams)


def diagram(points, scale=1, tag="intensity"):
    return PersistenceDiagram.from_points(points, scale_index=scale, filtration_tag=tag)


def seg(scale, pers_from, pers_to, dist):
    return VineSegment(scale, PersistencePoint(0, pers_from, 0.0), PersistencePoint(0, pers_to, 0.0), dist)


def random_diagrams(seed, n=4, k=6):
    rng = np.random.default_rng(seed)
    out = []
    for s in range(1, n + 1):
        b = rng.random(k)
        d = b * rng.random(k)
        out.append(diagram([(0, float(x), float(y)) for x, y in zip(b, d)], s))
    return out


# -- track_vines --------------------------------------------------------------

def test_identical_diagrams_give_full_vines():
    pts = [(0, 0.9, 0.1), (0, 0.6, 0.2), (0, 0.4, 0.35)]
    pds = [diagram(pts, s) for s in (1, 2, 3)]
    vines = track_vines(pds, 0, "euclidean", 0.0)
    assert len(vines) == 3
    for v in vines:
        assert len(v) == 2 and all(s.distance == 0 for s in v.segments)
        assert (v.birth_scale, v.death_scale) == (1, 3)


def test_point_at_one_scale_makes_no_vine():
    pds = [diagram([(0, 0.9, 0.1)], 1), diagram([], 2), diagram([], 3)]
    assert track_vines(pds, 0) == []


def test_terminated_vine():
    pds = [diagram([(0, 0.9, 0.0)], 1), diagram([(0, 0.8, 0.05)], 2), diagram([], 3)]
    (v,) = track_vines(pds, 0, "euclidean", 0.3)
    assert (v.birth_scale, v.death_scale, len(v)) == (1, 3, 1)
    assert v.segments[0].distance == pytest.approx(math.sqrt(0.0125), rel=1e-12)


def test_vine_born_late():
    pds = [diagram([], 1), diagram([(0, 0.5, 0.1)], 2), diagram([(0, 0.5, 0.1)], 3)]
    (v,) = track_vines(pds, 0, "euclidean", 0.0)
    assert (v.birth_scale, v.death_scale) == (2, 3)
    assert v.scales == (2, 3)


def test_tracking_is_per_degree():
    pds = [diagram([(0, 0.9, 0.1), (1, 0.5, 0.2)], s) for s in (1, 2)]
    assert [v.degree for v in track_vines(pds, 1)] == [1]
    vines = vines_from_diagrams(pds)
    assert [(v.vine_id, v.degree) for v in vines] == [(0, 0), (1, 1)]


def test_tracking_errors():
    with pytest.raises(ValueError):
        track_vines([diagram([])], 0)
    with pytest.raises(ValueError):
        track_vines([diagram([], 1, "intensity"), diagram([], 2, "gradient")], 0)


@pytest.mark.parametrize("seed", range(10))
def test_vines_are_vertex_disjoint(seed):
    pds = random_diagrams(seed)
    vines = track_vines(pds, 0, "euclidean", 0.4)
    # random floats make every point distinct, so (scale, point) identifies a vertex
    sources = [(s.scale_from, s.point_from) for v in vines for s in v.segments]
    targets = [(s.scale_from + 1, s.point_to) for v in vines for s in v.segments]
    assert len(set(sources)) == len(sources) and len(set(targets)) == len(targets)
    for v in vines:
        # consecutive segments share their joint point
        for s, t in zip(v.segments, v.segments[1:]):
            assert s.point_to == t.point_from and t.scale_from == s.scale_from + 1


@pytest.mark.parametrize("seed", range(5))
def test_tracking_is_deterministic(seed):
    pds = random_diagrams(seed)
    a = [v.to_dict() for v in track_vines(pds, 0, "relpers", 0.3)]
    b = [v.to_dict() for v in track_vines(list(pds), 0, "relpers", 0.3)]
    assert a == b


# -- stability ----------------------------------------------------------------

def test_stability_examples():
    assert stability_score(Vine(0, 0, [seg(1, 0.3, 0.7, 0.0)], 1)) == 1.0
    assert stability_score(Vine(0, 0, [seg(1, 1.0, 1.0, 1.0)], 1)) == pytest.approx(0.5, rel=1e-12)
    v = Vine(0, 0, [seg(1, 2.0, 2.0, 0.0), seg(2, 0.0, 0.0, 1.0)], 1)
    assert stability_score(v) == pytest.approx(2.05 / 2.1, rel=1e-12)


def test_stability_needs_segments():
    with pytest.raises(ValueError):
        stability_score(Vine(0, 0, [], 1))


@pytest.mark.parametrize("seed", range(5))
def test_sigma_in_unit_interval(seed):
    for v in track_vines(random_diagrams(seed), 0, "euclidean", 1.0):
        assert 0.0 < stability_score(v) <= 1.0


# -- stable_diagram -----------------------------------------------------------

def test_medial_representative():
    p1, p2, p3 = (PersistencePoint(0, b, 0.0) for b in (0.9, 0.8, 0.7))
    v = Vine(4, 0, [VineSegment(1, p1, p2, 0.0), VineSegment(2, p2, p3, 0.0)], 1, 3)
    (sp,) = stable_diagram([v], 0.7).points
    assert (sp.birth, sp.medial_scale, sp.vine_id, sp.sigma) == (0.8, 2, 4, 1.0)


def test_perfect_vines_all_retained():
    pts = [(0, 0.9, 0.1), (0, 0.6, 0.2), (1, 0.5, 0.3)]
    vines = vines_from_diagrams([diagram(pts, s) for s in (1, 2, 3)], tau_m=0.0)
    assert len(stable_diagram(vines, 0.7)) == len(vines) == 3


def test_tau_one_needs_zero_distances():
    vines = [Vine(0, 0, [seg(1, 0.5, 0.5, 0.0), seg(2, 0.5, 0.4, 0.01)], 1)]
    assert len(stable_diagram(vines, 1.0)) == 0


def test_tau_s_range():
    with pytest.raises(ValueError):
        stable_diagram([], 1.1)


@pytest.mark.parametrize("seed", range(5))
def test_threshold_monotonicity(seed):
    vines = track_vines(random_diagrams(seed), 0, "euclidean", 0.5)
    prev = set()
    for tau in (1.0, 0.9, 0.8, 0.7, 0.5, 0.0):
        ids = {p.vine_id for p in stable_diagram(vines, tau)}
        assert prev <= ids and len(ids) <= len(vines)
        prev = ids


# -- stabilize ----------------------------------------------------------------

def test_defaults():
    assert (DEFAULT_TAU_M, DEFAULT_TAU_S, DEFAULT_METRIC.value) == (0.3, 0.7, "relative_persistence")


def test_constant_image():
    sd = stabilize(build_pyramid(ScalarField(np.full((8, 8), 0.4)), 3))
    assert len(sd) <= 1
    assert all(p.essential and p.degree == 0 for p in sd)


def test_stabilize_needs_two_levels():
    with pytest.raises(ValueError):
        stabilize(build_pyramid(ScalarField(np.zeros((4, 4))), 1))


def test_stabilize_keeps_tag():
    pyr = build_pyramid(ScalarField(np.random.default_rng(1).random((16, 16))), 3, "gradient")
    assert stabilize(pyr).filtration_tag == "gradient"
