"""Fixture builders and independent oracles shared across the test modules."""
import itertools
from pathlib import Path

import numpy as np
from PIL import Image

BLOB_CENTER = (32, 32)
BLOB_SIGMA = 12.0
SPIKE_RADIUS = 21
SPIKE_VALUE = 0.45


def blob_field(size=64, flat_spikes=False):
    """Gaussian bump (peak 1.0 over a 0.1 floor) plus ten single-pixel spikes.

    By default the spikes sit on the bump's flank, where block averaging
    absorbs them into the uphill neighbour at the first downsampling.
    Returns ``(field, spike_coords)``.
    """
    y, x = np.mgrid[0:size, 0:size]
    r2 = (y - BLOB_CENTER[0]) ** 2 + (x - BLOB_CENTER[1]) ** 2
    f = 0.1 + 0.9 * np.exp(-r2 / (2 * BLOB_SIGMA ** 2))
    if flat_spikes:
        spikes = [(4, 4), (4, 20), (4, 40), (4, 58), (58, 4),
                  (58, 20), (58, 40), (58, 58), (20, 4), (40, 58)]
    else:
        spikes = [
            (int(round(BLOB_CENTER[0] + SPIKE_RADIUS * np.sin(2 * np.pi * k / 10))),
             int(round(BLOB_CENTER[1] + SPIKE_RADIUS * np.cos(2 * np.pi * k / 10))))
            for k in range(10)
        ]
    for p in spikes:
        f[p] = SPIKE_VALUE
    return f, spikes


def ring_field():
    f = np.ones((3, 3))
    f[1, 1] = 0.0
    return f


def euler_characteristic(values, tau):
    """V - E + F of the V-construction on ``{values >= tau}``, counted directly."""
    m = np.asarray(values) >= tau
    V = int(m.sum())
    E = int((m[:, 1:] & m[:, :-1]).sum() + (m[1:, :] & m[:-1, :]).sum())
    F = int((m[1:, 1:] & m[1:, :-1] & m[:-1, 1:] & m[:-1, :-1]).sum())
    return V - E + F


def brute_force_assignment_cost(D):
    """Minimum total cost over all injective row/column pairings of size min(r, c)."""
    D = np.asarray(D, dtype=float)
    r, c = D.shape
    if r <= c:
        return min(sum(D[i, p[i]] for i in range(r)) for p in itertools.permutations(range(c), r))
    return min(sum(D[p[j], j] for j in range(c)) for p in itertools.permutations(range(r), c))


def write_png(path: Path, arr) -> Path:
    arr = np.asarray(arr, dtype=np.uint8)
    Image.fromarray(arr, mode="L" if arr.ndim == 2 else "RGB").save(path)
    return path


def write_pgm(path: Path, arr) -> Path:
    arr = np.asarray(arr, dtype=np.uint8)
    h, w = arr.shape
    path.write_bytes(f"P5\n{w} {h}\n255\n".encode() + arr.tobytes())
    return path


def field_to_png(path: Path, f) -> Path:
    return write_png(path, np.round(np.asarray(f) * 255))


def sorted_rows(pd):
    return sorted((p.degree, p.birth, p.death, p.essential) for p in pd)


def make_corpus(directory: Path, size=48) -> Path:
    """Three small deterministic images: the blob fixture, a ring, and RGB noise."""
    directory.mkdir(parents=True, exist_ok=True)
    blob, _ = blob_field(size=64)
    field_to_png(directory / "blob.png", blob)
    y, x = np.mgrid[0:size, 0:size] - size / 2
    ring = np.exp(-((np.hypot(y, x) - size / 4) ** 2) / 8.0)
    write_pgm(directory / "ring.pgm", np.round(ring * 255))
    noise = np.random.default_rng(1234).integers(0, 256, (size, size, 3))
    write_png(directory / "noise.png", noise)
    return directory


def tree_bytes(root: Path):
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}
