"""Raster ingestion, filtration fields and resolution pyramids.

Every scalar field produced here is normalized to ``[0, 1]`` so that the
matching threshold used downstream is an absolute quantity that means the
same thing for every image, filtration and scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

FILTRATIONS = ("intensity", "gradient")

LAPLACIAN_KERNEL = np.array([[0, 1, 0], [1, -4, 1], [0, 1, 0]], dtype=np.float64)


class ImageFormatError(ValueError):
    """Raised when an image file cannot be decoded into a RasterImage."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RasterImage:
    """An 8-bit raster, stored as a ``(height, width, channels)`` uint8 array."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim == 2:
            s = s[:, :, None]
        if s.ndim != 3 or s.shape[2] not in (1, 3):
            raise ValueError(f"expected 1 or 3 channels, got array of shape {s.shape}")
        if s.shape[0] < 1 or s.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if s.dtype != np.uint8:
            if not np.issubdtype(s.dtype, np.integer) or s.min() < 0 or s.max() > 255:
                raise ValueError("samples must be 8-bit values")
            s = s.astype(np.uint8)
        object.__setattr__(self, "samples", _readonly(s))

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def channels(self) -> int:
        return self.samples.shape[2]

    def flat(self) -> List[int]:
        """Samples in row-major, channel-interleaved order."""
        return self.samples.ravel().tolist()

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return np.array_equal(self.samples, other.samples)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A 2D grid of finite filtration values, indexed ``values[row, col]``."""

    values: np.ndarray
    value_range: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(f"field values must be a non-empty 2D array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        lo, hi = (float(x) for x in self.value_range)
        if lo > hi or v.min() < lo or v.max() > hi:
            raise ValueError(f"values [{v.min()}, {v.max()}] fall outside value_range [{lo}, {hi}]")
        object.__setattr__(self, "values", _readonly(v))
        object.__setattr__(self, "value_range", (lo, hi))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def __eq__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self.value_range == other.value_range and np.array_equal(self.values, other.values)

    @classmethod
    def from_array(cls, values, value_range=None) -> "ScalarField":
        """Wrap an arbitrary finite 2D array, using its own extent as the range."""
        v = np.asarray(values, dtype=np.float64)
        if value_range is None:
            value_range = (float(v.min()), float(v.max())) if v.size else (0.0, 0.0)
        return cls(v, value_range)


@dataclass(frozen=True)
class ScalePyramid:
    """Finest-first list of fields, each level half the size of the previous."""

    levels: Tuple[ScalarField, ...]
    filtration_tag: str = "intensity"

    def __post_init__(self):
        levels = tuple(self.levels)
        if not levels:
            raise ValueError("a pyramid needs at least one level")
        for prev, nxt in zip(levels, levels[1:]):
            expected = (math.ceil(prev.height / 2), math.ceil(prev.width / 2))
            if nxt.shape != expected:
                raise ValueError(f"level of shape {nxt.shape} does not halve {prev.shape}")
        if self.filtration_tag not in FILTRATIONS:
            raise ValueError(f"unknown filtration {self.filtration_tag!r}")
        object.__setattr__(self, "levels", levels)

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __getitem__(self, i):
        return self.levels[i]


# --------------------------------------------------------------------------
# decoding


_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _sniff(path: Path) -> str:
    with open(path, "rb") as fh:
        head = fh.read(32)
    if head.startswith(_PNG_MAGIC):
        if len(head) < 26 or head[12:16] != b"IHDR":
            raise ImageFormatError(f"{path}: corrupt PNG header")
        bit_depth, color_type = head[24], head[25]
        if color_type in (4, 6):
            raise ImageFormatError(f"{path}: alpha channels are not supported")
        if color_type not in (0, 2, 3):
            raise ImageFormatError(f"{path}: corrupt PNG header (color type {color_type})")
        if bit_depth != 8 and color_type != 3:
            raise ImageFormatError(f"{path}: unsupported bit depth {bit_depth}")
        return "PNG"
    if head[:2] == b"P5":
        return "PGM"
    raise ImageFormatError(f"{path}: unsupported container (expected PNG or binary PGM)")


def load_image(path: Union[str, Path]) -> RasterImage:
    """Decode an 8-bit grayscale or RGB PNG, or a binary 8-bit PGM (P5).

    Raises FileNotFoundError for a missing path and ImageFormatError for
    anything that is not an 8-bit, alpha-free gray or RGB raster.
    """
    from PIL import Image

    path = Path(path)
    container = _sniff(path)
    try:
        with Image.open(path) as im:
            if "transparency" in im.info:
                raise ImageFormatError(f"{path}: alpha channels are not supported")
            mode = im.mode
            if mode == "P":
                im = im.convert("RGB")
                mode = "RGB"
            if mode not in ("L", "RGB"):
                raise ImageFormatError(f"{path}: unsupported bit depth or channel layout (mode {mode})")
            arr = np.asarray(im.copy())
    except ImageFormatError:
        raise
    except (OSError, SyntaxError, ValueError) as exc:
        raise ImageFormatError(f"{path}: corrupt {container} container ({exc})") from exc
    return RasterImage(arr)


# --------------------------------------------------------------------------
# filtrations


def intensity_field(img: RasterImage) -> ScalarField:
    """Channel mean scaled by 1/255."""
    mean = img.samples.astype(np.float64).sum(axis=2) / img.channels
    return ScalarField(np.clip(mean / 255.0, 0.0, 1.0), (0.0, 1.0))


def laplacian_response(img: RasterImage) -> np.ndarray:
    """Unnormalized channel-averaged absolute Laplacian with clamp-to-edge borders."""
    s = img.samples.astype(np.float64)
    p = np.pad(s, ((1, 1), (1, 1), (0, 0)), mode="edge")
    lap = p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * p[1:-1, 1:-1]
    return np.abs(lap).sum(axis=2) / img.channels


def gradient_field(img: RasterImage) -> ScalarField:
    """Absolute Laplacian response divided by its maximum (all zeros if flat)."""
    resp = laplacian_response(img)
    peak = resp.max()
    if peak > 0:
        resp = np.clip(resp / peak, 0.0, 1.0)
    return ScalarField(resp, (0.0, 1.0))


def filtration_field(img: RasterImage, tag: str) -> ScalarField:
    if tag == "intensity":
        return intensity_field(img)
    if tag == "gradient":
        return gradient_field(img)
    raise ValueError(f"unknown filtration {tag!r}; expected one of {FILTRATIONS}")


# --------------------------------------------------------------------------
# pyramids


def downsample(f: ScalarField) -> ScalarField:
    """Halve each dimension (rounding up) by averaging 2x2 blocks.

    Blocks on an odd trailing row or column are clipped to 2x1, 1x2 or 1x1.
    """
    v = f.values
    rows = np.arange(0, f.height, 2)
    cols = np.arange(0, f.width, 2)
    sums = np.add.reduceat(np.add.reduceat(v, rows, axis=0), cols, axis=1)
    rcount = np.minimum(2, f.height - rows)
    ccount = np.minimum(2, f.width - cols)
    out = sums / (rcount[:, None] * ccount[None, :])
    lo, hi = f.value_range
    return ScalarField(np.clip(out, lo, hi), f.value_range)


def build_pyramid(f: ScalarField, n_levels: int = 3, filtration_tag: str = "intensity") -> ScalePyramid:
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    levels = [f]
    for _ in range(n_levels - 1):
        levels.append(downsample(levels[-1]))
    return ScalePyramid(tuple(levels), filtration_tag)


# --------------------------------------------------------------------------
# CSV interchange


def format_value(x: float) -> str:
    return f"{x:.9g}"


def field_to_csv(f: ScalarField) -> str:
    lines = [f"{f.width},{f.height}"]
    for row in f.values:
        lines.append(",".join(format_value(x) for x in row))
    return "\n".join(lines) + "\n"


def field_from_csv(text: str, value_range: Sequence[float] = None) -> ScalarField:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty field CSV")
    try:
        width, height = (int(t) for t in lines[0].split(","))
    except ValueError as exc:
        raise ValueError(f"line 1: expected 'width,height', got {lines[0]!r}") from exc
    if len(lines) - 1 != height:
        raise ValueError(f"expected {height} value rows, found {len(lines) - 1}")
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        row = [float(t) for t in ln.split(",")]
        if len(row) != width:
            raise ValueError(f"line {lineno}: expected {width} values, found {len(row)}")
        rows.append(row)
    arr = np.array(rows, dtype=np.float64)
    if value_range is None:
        value_range = (min(0.0, arr.min()), max(1.0, arr.max()))
    return ScalarField(arr, tuple(value_range))
