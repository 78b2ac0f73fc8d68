import logging
from pathlib import Path
from typing import List, Optional

import numpy as np
import typer

from src.conf.config import config
from src.middleware.middleware import exit_on_error
from src.repository.distances import load_distances
from src.repository.manifest import load_manifest
from src.repository.results import write_density
from src.routes import options
from src.schemas.lcdm import Hemisphere
from src.schemas.simulation import RemainderPlacement
from src.services import errors
from src.services.harness import PRESETS, QUICK_N
from src.services.kde import ecdf, gaussian_kde, shared_grid, silverman_bandwidth
from src.services.lcdm import pool_manifest
from src.services.plotting import density_figure, write_svg
from src.services.simulator import (derive_profile, derive_seed, generate, make_params,
                                    reference_profile)

logger = logging.getLogger(__name__)

router = typer.Typer()


def _unique_labels(paths: List[Path]) -> list[str]:
    labels: list[str] = []
    for path in paths:
        label = path.stem
        while label in labels:
            label = f"{label}_{len(labels) + 1}"
        labels.append(label)
    return labels


def _preset_samples(name: str, seed: int, quick: bool,
                    remainder_placement: RemainderPlacement) -> dict[str, np.ndarray]:
    if name not in PRESETS:
        raise errors.ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    specs, _ = PRESETS[name]
    reference = reference_profile()
    samples = {}
    for spec in specs:
        params = make_params(spec.eta, spec.r, QUICK_N if quick else spec.n,
                             derive_seed(seed, 0, spec.label))
        profile = derive_profile(reference, spec.eta, remainder_placement)
        samples[spec.label] = generate(profile, params).distances
    return samples


def _write(samples: dict[str, np.ndarray], stem: str, out: Path, bandwidth: Optional[float],
           points: int, counts: bool, with_ecdf: bool, svg: bool) -> None:
    if not samples:
        raise errors.EmptyCollection("no samples to estimate")
    arrays = list(samples.values())
    bandwidths = [silverman_bandwidth(a) if bandwidth is None else bandwidth for a in arrays]
    grid = shared_grid(arrays, bandwidths, points)
    curves = [gaussian_kde(a, h, grid, label=label, counts=counts)
              for (label, a), h in zip(samples.items(), bandwidths)]
    for curve in curves:
        logger.info("%s: n=%d, bandwidth %.4g mm", curve.label, curve.n, curve.bandwidth)
    ecdfs = [ecdf(a, grid) for a in arrays] if with_ecdf else ()
    typer.echo(str(write_density(curves, out / f"{stem}.csv", ecdfs)))
    if svg:
        write_svg(density_figure(curves, title=stem), out / f"{stem}.svg")


@router.command("kde")
@exit_on_error
def kde(
    files: Optional[List[Path]] = typer.Argument(None, help="Distance files, one curve each."),
    manifest: Optional[Path] = typer.Option(None, "--manifest",
                                            help="Pool each group of a study per hemisphere."),
    preset: Optional[str] = typer.Option(None, "--preset",
                                         help="One generated sample per preset sample."),
    bandwidth: Optional[float] = typer.Option(None, "--bandwidth",
                                              help="Kernel bandwidth (mm); Silverman if unset."),
    grid_points: Optional[int] = typer.Option(None, "--grid-points", min=2),
    counts: bool = typer.Option(False, "--counts", help="Scale densities to distances per mm."),
    with_ecdf: bool = typer.Option(False, "--ecdf", help="Add empirical CDF columns."),
    remainder_placement: RemainderPlacement = typer.Option(
        RemainderPlacement.append, "--remainder-placement"),
    quick: bool = options.quick_option(),
    seed: Optional[int] = options.seed_option(),
    out_dir: Optional[Path] = options.out_dir_option(),
    svg: bool = options.svg_option(),
):
    """Gaussian kernel density curves of distance samples."""
    sources = sum(bool(s) for s in (files, manifest, preset))
    if sources != 1:
        raise errors.ConfigError("give distance files, --manifest or --preset (exactly one)")
    out = options.resolve_out_dir(out_dir)
    points = grid_points or config.KDE_GRID_POINTS
    write = dict(out=out, bandwidth=bandwidth, points=points, counts=counts,
                 with_ecdf=with_ecdf, svg=svg)

    if files:
        samples = {label: load_distances(path, label, Hemisphere.left).distances
                   for label, path in zip(_unique_labels(files), files)}
        _write(samples, "kde", **write)
    elif manifest:
        study = load_manifest(manifest, config.CLIP_LO, config.CLIP_HI)
        for hemisphere in study.hemispheres:
            pooled, _ = pool_manifest(study, hemisphere)
            _write({p.group: p.distances for p in pooled}, f"kde_{hemisphere.value}", **write)
    else:
        samples = _preset_samples(preset, options.resolve_seed(seed), quick, remainder_placement)
        _write(samples, f"kde_{preset}", **write)
