"""CSV and JSON formats for diagrams, stable diagrams and vines.

All reals are written with 9 significant digits and rows are sorted so that
the same in-memory object always produces the same bytes.
"""
from __future__ import annotations

import csv
import io
import json
from typing import List, Sequence

from .field import FILTRATIONS, format_value
from .persistence import PersistenceDiagram
from .vineyard import StableDiagram, StablePoint, Vine

DIAGRAM_HEADER = ("degree", "birth", "death", "essential", "scale", "filtration")
STABLE_HEADER = ("degree", "birth", "death", "sigma", "medial_scale", "vine_id", "filtration")


class FormatError(ValueError):
    """Malformed CSV input; ``lineno`` is 1-based and counts the header."""

    def __init__(self, message: str, lineno: int = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def diagram_to_csv(pd: PersistenceDiagram) -> str:
    rows = sorted(pd, key=lambda p: (p.degree, -p.birth, -p.death, not p.essential))
    lines = [",".join(DIAGRAM_HEADER)]
    for p in rows:
        lines.append(f"{p.degree},{format_value(p.birth)},{format_value(p.death)},"
                     f"{int(p.essential)},{pd.scale_index},{pd.filtration_tag}")
    return "\n".join(lines) + "\n"


def stable_to_csv(sd: StableDiagram) -> str:
    rows = sorted(sd.points, key=lambda p: (p.degree, -p.sigma, -p.birth, -p.death, p.vine_id))
    lines = [",".join(STABLE_HEADER)]
    for p in rows:
        lines.append(f"{p.degree},{format_value(p.birth)},{format_value(p.death)},"
                     f"{format_value(p.sigma)},{p.medial_scale},{p.vine_id},{sd.filtration_tag}")
    return "\n".join(lines) + "\n"


def _records(text: str):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty file", 1)
    return tuple(h.strip() for h in header), reader


def _num(value: str, cast, lineno: int, name: str):
    try:
        return cast(value)
    except ValueError:
        raise FormatError(f"bad {name} value {value!r}", lineno) from None


def _parse_rows(header, reader) -> List[dict]:
    out = []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise FormatError(f"expected {len(header)} fields, found {len(row)}", lineno)
        rec = dict(zip(header, (c.strip() for c in row)))
        rec["_line"] = lineno
        out.append(rec)
    return out


def _check_point(rec, lineno):
    degree = _num(rec["degree"], int, lineno, "degree")
    birth = _num(rec["birth"], float, lineno, "birth")
    death = _num(rec["death"], float, lineno, "death")
    if degree not in (0, 1):
        raise FormatError(f"degree must be 0 or 1, got {degree}", lineno)
    if not birth >= death:
        raise FormatError(f"birth {birth} below death {death}", lineno)
    if rec["filtration"] not in FILTRATIONS:
        raise FormatError(f"unknown filtration {rec['filtration']!r}", lineno)
    return degree, birth, death


def diagram_from_csv(text: str, scale_index: int = None, filtration_tag: str = None) -> PersistenceDiagram:
    """Parse a diagram CSV. Empty diagrams take scale/filtration from the arguments."""
    header, reader = _records(text)
    if header != DIAGRAM_HEADER:
        raise FormatError(f"expected header {','.join(DIAGRAM_HEADER)}", 1)
    pts, scales, tags = [], set(), set()
    for rec in _parse_rows(header, reader):
        ln = rec["_line"]
        degree, birth, death = _check_point(rec, ln)
        if rec["essential"] not in ("0", "1"):
            raise FormatError(f"essential must be 0 or 1, got {rec['essential']!r}", ln)
        scale = _num(rec["scale"], int, ln, "scale")
        if scale < 1:
            raise FormatError("scale must be >= 1", ln)
        pts.append((degree, birth, death, rec["essential"] == "1"))
        scales.add(scale)
        tags.add(rec["filtration"])
    if len(scales) > 1 or len(tags) > 1:
        raise FormatError("a diagram file must hold a single scale and filtration")
    scale = scales.pop() if scales else (scale_index or 1)
    tag = tags.pop() if tags else (filtration_tag or "intensity")
    if scale_index is not None and scale != scale_index:
        raise FormatError(f"file holds scale {scale}, expected {scale_index}")
    if filtration_tag is not None and tag != filtration_tag:
        raise FormatError(f"file holds filtration {tag}, expected {filtration_tag}")
    return PersistenceDiagram.from_points(pts, scale, tag)


def stable_from_csv(text: str, filtration_tag: str = None) -> StableDiagram:
    header, reader = _records(text)
    if header != STABLE_HEADER:
        raise FormatError(f"expected header {','.join(STABLE_HEADER)}", 1)
    pts, tags = [], set()
    for rec in _parse_rows(header, reader):
        ln = rec["_line"]
        degree, birth, death = _check_point(rec, ln)
        sigma = _num(rec["sigma"], float, ln, "sigma")
        medial = _num(rec["medial_scale"], int, ln, "medial_scale")
        vine_id = _num(rec["vine_id"], int, ln, "vine_id")
        pts.append(StablePoint(degree, birth, death, sigma, medial, vine_id))
        tags.add(rec["filtration"])
    if len(tags) > 1:
        raise FormatError("a stable diagram file must hold a single filtration")
    tag = tags.pop() if tags else (filtration_tag or "intensity")
    return StableDiagram(tuple(pts), tag)


def read_points(text: str):
    """``(degree, birth, death)`` rows of either CSV flavour, for plotting."""
    header, _ = _records(text)
    if header == DIAGRAM_HEADER:
        return [(p.degree, p.birth, p.death) for p in diagram_from_csv(text)]
    if header == STABLE_HEADER:
        return [(p.degree, p.birth, p.death) for p in stable_from_csv(text)]
    raise FormatError("unrecognized header; expected a diagram or stable-diagram CSV", 1)


def vines_to_json(vines: Sequence[Vine]) -> str:
    return json.dumps([v.to_dict() for v in vines], indent=1) + "\n"
