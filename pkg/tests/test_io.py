import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from stablepd.field import ScalarField, build_pyramid, format_value
from stablepd.io import (DIAGRAM_HEADER, STABLE_HEADER, FormatError, diagram_from_csv, diagram_to_csv,
                         read_points, stable_from_csv, stable_to_csv, vines_to_json)
from stablepd.persistence import PersistenceDiagram, compute_pd
from stablepd.vineyard import pyramid_diagrams, stabilize, vines_from_diagrams

from helpers import ring_field

fields = arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 8)), elements=st.floats(0, 1))


def stable_columns(sd):
    return [(p.degree, p.birth, p.death, p.sigma, p.medial_scale, p.vine_id) for p in sd]


def test_diagram_csv_layout():
    text = diagram_to_csv(compute_pd(ring_field(), 2, "gradient"))
    assert text.splitlines() == [",".join(DIAGRAM_HEADER), "0,1,0,1,2,gradient", "1,1,0,0,2,gradient"]


def test_empty_diagram_round_trip():
    pd = compute_pd(np.array([[0.3, 0.1]]), keep_zero_persistence=False)
    assert diagram_from_csv(diagram_to_csv(pd)).same_points(pd)
    empty = diagram_from_csv(",".join(DIAGRAM_HEADER) + "\n", scale_index=3, filtration_tag="gradient")
    assert len(empty.birth) == 0 and empty.scale_index == 3 and empty.filtration_tag == "gradient"


@settings(max_examples=30, deadline=None)
@given(fields)
def test_diagram_round_trip(v):
    pd = compute_pd(v, 2, "intensity", keep_zero_persistence=True)
    text = diagram_to_csv(pd)
    back = diagram_from_csv(text)
    assert (back.scale_index, back.filtration_tag) == (2, "intensity")
    # 9 significant digits can merge near-equal values, which may reorder ties
    r9 = np.vectorize(lambda x: float(format_value(x)))
    expected = PersistenceDiagram(pd.degree, r9(pd.birth), r9(pd.death), pd.essential, 2, "intensity")
    assert back == expected
    np.testing.assert_allclose(np.sort(back.birth), np.sort(pd.birth), rtol=1e-8)
    assert diagram_to_csv(back) == text


def test_diagram_round_trip_exact_on_short_decimals():
    pd = compute_pd(np.random.default_rng(2).integers(0, 5, (6, 6)) / 4)
    assert diagram_from_csv(diagram_to_csv(pd)) == pd


@settings(max_examples=15, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(4, 12), st.integers(4, 12)), elements=st.floats(0, 1)))
def test_stable_round_trip(v):
    sd = stabilize(build_pyramid(ScalarField(v), 3), tau_s=0.0)
    text = stable_to_csv(sd)
    back = stable_from_csv(text)
    assert back.filtration_tag == sd.filtration_tag
    assert len(back) == len(sd)
    r9 = lambda x: float(format_value(x))  # noqa: E731
    rounded = [(k, r9(b), r9(d), r9(s), m, i) for k, b, d, s, m, i in stable_columns(sd)]
    assert sorted(rounded) == sorted(stable_columns(back))
    assert stable_to_csv(back) == text


def test_stable_header():
    sd = stabilize(build_pyramid(ScalarField(ring_field()), 2))
    assert stable_to_csv(sd).splitlines()[0] == ",".join(STABLE_HEADER)


@pytest.mark.parametrize("body, line, fragment", [
    ("0,0.5,0.1,0,1,intensity\n0,abc,0.1,0,1,intensity\n", 3, "birth"),
    ("0,0.5,0.1,0,1\n", 2, "fields"),
    ("2,0.5,0.1,0,1,intensity\n", 2, "degree"),
    ("0,0.1,0.5,0,1,intensity\n", 2, "below"),
    ("0,0.5,0.1,yes,1,intensity\n", 2, "essential"),
    ("0,0.5,0.1,0,1,hue\n", 2, "filtration"),
    ("0,0.5,0.1,0,0,intensity\n", 2, "scale"),
])
def test_diagram_parse_errors(body, line, fragment):
    with pytest.raises(FormatError, match=fragment) as exc:
        diagram_from_csv(",".join(DIAGRAM_HEADER) + "\n" + body)
    assert exc.value.lineno == line
    assert str(exc.value).startswith(f"line {line}:")


def test_header_errors():
    with pytest.raises(FormatError):
        diagram_from_csv("")
    with pytest.raises(FormatError):
        diagram_from_csv("a,b,c\n")
    with pytest.raises(FormatError):
        stable_from_csv(",".join(DIAGRAM_HEADER) + "\n")
    with pytest.raises(FormatError):
        read_points("x\n")


def test_mixed_scales_rejected():
    body = "0,0.5,0.1,0,1,intensity\n0,0.4,0.1,0,2,intensity\n"
    with pytest.raises(FormatError):
        diagram_from_csv(",".join(DIAGRAM_HEADER) + "\n" + body)


def test_expected_scale_checked():
    text = diagram_to_csv(compute_pd(ring_field(), 2))
    with pytest.raises(FormatError):
        diagram_from_csv(text, scale_index=1)


def test_read_points_both_flavours():
    pd = compute_pd(ring_field())
    assert read_points(diagram_to_csv(pd)) == [(0, 1.0, 0.0), (1, 1.0, 0.0)]
    sd = stabilize(build_pyramid(ScalarField(np.full((4, 4), 0.5)), 2))
    assert read_points(stable_to_csv(sd)) == [(p.degree, p.birth, p.death) for p in sd]


def test_vines_json():
    f = np.random.default_rng(5).random((12, 12))
    vines = vines_from_diagrams(pyramid_diagrams(build_pyramid(ScalarField(f), 3)))
    data = json.loads(vines_to_json(vines))
    assert [d["vine_id"] for d in data] == [v.vine_id for v in vines]
    for d, v in zip(data, vines):
        assert len(d["segments"]) == len(v.segments)
        assert all(len(s) == 6 for s in d["segments"])
        assert 0 < d["sigma"] <= 1
    assert vines_to_json(vines) == vines_to_json(vines)
