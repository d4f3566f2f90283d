"""Command-line front end: ``stablepd {pd,stabilize,plot,pipeline,match}``.

Exit codes: 0 success, 1 partial failure, 2 missing input, 3 incomplete
pyramid, 4 parse error, 64 usage error.
"""
from __future__ import annotations

import hashlib
import json
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import click

from .field import FILTRATIONS, ImageFormatError, build_pyramid, filtration_field, load_image
from .io import (FormatError, diagram_from_csv, diagram_to_csv, read_points,
                 stable_to_csv, vines_to_json)
from .matching import DistanceMetric, match_diagrams
from .plot import diagram_svg
from .vineyard import pyramid_diagrams, stable_diagram, vines_from_diagrams

log = logging.getLogger("stablepd")

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_MISSING = 2
EXIT_INCOMPLETE = 3
EXIT_PARSE = 4
EXIT_USAGE = 64

IMAGE_SUFFIXES = (".png", ".pgm")
DIAGRAM_NAME = re.compile(r"^(intensity|gradient)_s(\d+)\.csv$")
METRIC_CHOICES = ("euclidean", "pscaled", "relpers", "persistence_scaled", "relative_persistence")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class PipelineConfig:
    n_levels: int = 3
    metric: str = "relative_persistence"
    tau_m: float = 0.3
    tau_s: float = 0.7
    filtrations: Tuple[str, ...] = FILTRATIONS
    drop_zero_persistence: bool = True
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "metric", DistanceMetric.parse(self.metric).value)
        object.__setattr__(self, "filtrations", tuple(self.filtrations))
        if not self.filtrations or any(f not in FILTRATIONS for f in self.filtrations):
            raise ValueError(f"filtrations must be a non-empty subset of {FILTRATIONS}")
        if int(self.n_levels) != self.n_levels or self.n_levels < 1:
            raise ValueError("levels must be a positive integer")
        if not self.tau_m >= 0:
            raise ValueError("tau-m must be >= 0")
        if not 0.0 <= self.tau_s <= 1.0:
            raise ValueError("tau-s must lie in [0, 1]")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    @classmethod
    def resolve(cls, config_file: Optional[str], **flags) -> "PipelineConfig":
        """Flags override the config file, which overrides built-in defaults."""
        values = {}
        if config_file:
            try:
                loaded = json.loads(Path(config_file).read_text())
            except FileNotFoundError:
                raise CliError(EXIT_MISSING, f"config file not found: {config_file}")
            except json.JSONDecodeError as exc:
                raise CliError(EXIT_PARSE, f"{config_file}: {exc}")
            known = {f.name for f in fields(cls)}
            unknown = set(loaded) - known
            if unknown:
                raise click.UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
            values.update(loaded)
        values.update({k: v for k, v in flags.items() if v is not None and v != ()})
        try:
            return cls(**values)
        except (TypeError, ValueError) as exc:
            raise click.UsageError(str(exc))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["filtrations"] = list(self.filtrations)
        del d["jobs"]  # never affects output bytes
        return d


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _require_input(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise CliError(EXIT_MISSING, f"input not found: {path}")
    return p


def _load(path: Path):
    try:
        return load_image(path)
    except ImageFormatError as exc:
        raise CliError(EXIT_PARSE, str(exc))


def _write(outdir: Path, files: Dict[str, str]) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (outdir / name).write_text(text)


def image_outputs(img, config: PipelineConfig, stabilize: bool = True,
                  with_vines: bool = False) -> Dict[str, str]:
    """All output files for one image, as ``{relative name: content}``."""
    files: Dict[str, str] = {}
    for tag in config.filtrations:
        pyramid = build_pyramid(filtration_field(img, tag), config.n_levels, tag)
        pds = pyramid_diagrams(pyramid, keep_zero_persistence=not config.drop_zero_persistence)
        for pd in pds:
            files[f"{tag}_s{pd.scale_index}.csv"] = diagram_to_csv(pd)
        if stabilize:
            vines = vines_from_diagrams(pds, config.metric, config.tau_m)
            files[f"{tag}_stable.csv"] = stable_to_csv(stable_diagram(vines, config.tau_s, tag))
            if with_vines:
                files[f"{tag}_vines.json"] = vines_to_json(vines)
    return files


def _diagram_dir(path: Path, config: PipelineConfig) -> Dict[str, list]:
    found: Dict[str, Dict[int, Path]] = {}
    for p in sorted(path.iterdir()):
        m = DIAGRAM_NAME.match(p.name)
        if m and m.group(1) in config.filtrations:
            found.setdefault(m.group(1), {})[int(m.group(2))] = p
    if not found:
        raise CliError(EXIT_INCOMPLETE, f"incomplete pyramid: no diagram CSVs in {path}")
    out = {}
    for tag in config.filtrations:
        if tag not in found:
            continue
        scales = found[tag]
        missing = [k for k in range(1, config.n_levels + 1) if k not in scales]
        if missing:
            raise CliError(EXIT_INCOMPLETE,
                           f"incomplete pyramid: {tag} lacks scale(s) {', '.join(map(str, missing))}")
        pds = []
        for k in range(1, config.n_levels + 1):
            try:
                pds.append(diagram_from_csv(scales[k].read_text(), k, tag))
            except FormatError as exc:
                raise CliError(EXIT_PARSE, f"{scales[k]}: {exc}")
        out[tag] = pds
    return out


# --------------------------------------------------------------------------

_shared = [
    click.option("--config", "config_file", default=None, help="JSON file of defaults; flags win."),
    click.option("--levels", "n_levels", type=int, default=None, help="Pyramid levels (default 3)."),
    click.option("--filtration", "filtrations", multiple=True, type=click.Choice(FILTRATIONS),
                 help="Repeatable; default both."),
    click.option("--drop-zero-pers/--keep-zero-pers", "drop_zero_persistence", default=None,
                 help="Drop birth == death points (default: drop)."),
]
_vineyard = [
    click.option("--metric", type=click.Choice(METRIC_CHOICES), default=None,
                 help="Point distance (default relpers)."),
    click.option("--tau-m", "tau_m", type=float, default=None, help="Matching threshold (default 0.3)."),
    click.option("--tau-s", "tau_s", type=float, default=None, help="Stability threshold (default 0.7)."),
]


def _apply(options):
    def deco(f):
        for opt in reversed(options):
            f = opt(f)
        return f
    return deco


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose):
    """Multi-scale cubical persistence and stable diagrams of images."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)


@cli.command("pd")
@click.argument("input_path")
@click.option("--output", "-o", required=True, help="Directory for the diagram CSVs.")
@_apply(_shared)
def cmd_pd(input_path, output, config_file, **flags):
    """Write one diagram CSV per (filtration, scale) for an image."""
    config = PipelineConfig.resolve(config_file, **flags)
    img = _load(_require_input(input_path))
    _write(Path(output), image_outputs(img, config, stabilize=False))
    return EXIT_OK


@cli.command("stabilize")
@click.argument("input_path")
@click.option("--output", "-o", required=True, help="Directory for the stable CSVs.")
@click.option("--vines", "with_vines", is_flag=True, help="Also dump vines as JSON.")
@_apply(_shared + _vineyard)
def cmd_stabilize(input_path, output, with_vines, config_file, **flags):
    """Stable diagrams from an image, or from a directory written by ``pd``."""
    config = PipelineConfig.resolve(config_file, **flags)
    if config.n_levels < 2:
        raise click.UsageError("stabilization needs --levels >= 2")
    src = _require_input(input_path)
    files: Dict[str, str] = {}
    if src.is_dir():
        for tag, pds in _diagram_dir(src, config).items():
            vines = vines_from_diagrams(pds, config.metric, config.tau_m)
            files[f"{tag}_stable.csv"] = stable_to_csv(stable_diagram(vines, config.tau_s, tag))
            if with_vines:
                files[f"{tag}_vines.json"] = vines_to_json(vines)
    else:
        outs = image_outputs(_load(src), config, stabilize=True, with_vines=with_vines)
        files = {k: v for k, v in outs.items() if k.endswith(("_stable.csv", "_vines.json"))}
    _write(Path(output), files)
    return EXIT_OK


@cli.command("plot")
@click.argument("csv_path")
@click.option("--output", "-o", required=True, help="SVG file to write.")
@click.option("--title", default="", help="SVG title element.")
def cmd_plot(csv_path, output, title):
    """Render a diagram or stable-diagram CSV as an SVG scatter plot."""
    src = _require_input(csv_path)
    try:
        pts = read_points(src.read_text())
    except FormatError as exc:
        raise CliError(EXIT_PARSE, f"{src}: {exc}")
    out = Path(output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(diagram_svg(pts, title))
    return EXIT_OK


def _pipeline_one(path: Path, config: PipelineConfig):
    manifest = {"image": path.name, "config": config.to_dict()}
    files: Dict[str, str] = {}
    try:
        data = path.read_bytes()
        manifest["input_sha256"] = hashlib.sha256(data).hexdigest()
        files = image_outputs(load_image(path), config)
        manifest["status"] = "ok"
    except (ImageFormatError, OSError, ValueError) as exc:
        files = {}
        manifest["status"] = "failed"
        manifest["error"] = str(exc).replace(str(path), path.name)
    manifest["outputs"] = [{"path": name, "sha256": _sha256(text)} for name, text in sorted(files.items())]
    files["manifest.json"] = json.dumps(manifest, indent=1, sort_keys=True) + "\n"
    return manifest["status"] == "ok", files


@cli.command("pipeline")
@click.argument("input_dir")
@click.option("--output", "-o", required=True, help="Output root; one subdirectory per image.")
@click.option("--jobs", "-j", type=int, default=None, help="Worker threads (default 1).")
@_apply(_shared + _vineyard)
def cmd_pipeline(input_dir, output, config_file, **flags):
    """Diagrams, stable diagrams and a manifest for every image in a directory."""
    config = PipelineConfig.resolve(config_file, **flags)
    if config.n_levels < 2:
        raise click.UsageError("the pipeline needs --levels >= 2")
    src = _require_input(input_dir)
    if not src.is_dir():
        raise CliError(EXIT_MISSING, f"not a directory: {input_dir}")
    images = sorted(p for p in src.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)
    if not images:
        raise CliError(EXIT_MISSING, f"no .png or .pgm images in {input_dir}")
    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        results = list(pool.map(lambda p: _pipeline_one(p, config), images))
    root = Path(output)
    failed = 0
    for path, (ok, files) in zip(images, results):
        _write(root / path.name, files)
        if not ok:
            failed += 1
            log.warning("failed: %s", path.name)
    if failed:
        click.echo(f"{failed} of {len(images)} images failed; see manifests", err=True)
        return EXIT_PARTIAL
    return EXIT_OK


@cli.command("match")
@click.argument("diagram_a")
@click.argument("diagram_b")
@click.option("--degree", type=click.IntRange(0, 1), default=0)
@click.option("--metric", type=click.Choice(METRIC_CHOICES), default="relpers")
@click.option("--tau-m", "tau_m", type=click.FloatRange(min=0.0), default=0.3)
def cmd_match(diagram_a, diagram_b, degree, metric, tau_m):
    """Print the thresholded matching between two diagram CSVs as JSON."""
    pds = []
    for p in (diagram_a, diagram_b):
        src = _require_input(p)
        try:
            pds.append(diagram_from_csv(src.read_text()))
        except FormatError as exc:
            raise CliError(EXIT_PARSE, f"{src}: {exc}")
    result = match_diagrams(pds[0], pds[1], degree, metric, tau_m)
    click.echo(json.dumps(result.to_dict()))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="stablepd", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_PARTIAL
    except CliError as exc:
        click.echo(f"stablepd: {exc}", err=True)
        return exc.code
    except OSError as exc:
        click.echo(f"stablepd: {exc}", err=True)
        return EXIT_PARTIAL
    return rv if isinstance(rv, int) else EXIT_OK


def run():
    sys.exit(main())
