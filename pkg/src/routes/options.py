"""Flags shared by every command; unset flags fall back to ``config``."""
from pathlib import Path

import typer

from src.conf.config import config
from src.schemas.censoring import CensoringSchedule
from src.services.censoring import make_schedule


def delta_option():
    return typer.Option(None, "--delta", help="Censoring bin size (mm).")


def dmax_option():
    return typer.Option(None, "--dmax", help="Largest censoring distance (mm).")


def reliable_lo_option():
    return typer.Option(None, "--reliable-lo", help="Lower end of the reliable window (mm).")


def alpha_option():
    return typer.Option(None, "--alpha", min=0.0, max=1.0, help="Significance level.")


def seed_option():
    return typer.Option(None, "--seed", min=0,
                        help="Master seed; falls back to CENSORMORPH_SEED, then 0.")


def threads_option():
    return typer.Option(None, "--threads", min=1, help="Worker processes.")


def out_dir_option():
    return typer.Option(None, "--out-dir", help="Directory for CSV and SVG output.")


def svg_option():
    return typer.Option(True, "--svg/--no-svg", help="Also write SVG figures.")


def quick_option():
    return typer.Option(False, "--quick", help="Desk-scale run (n=2000, N_mc=200).")


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    return config.SEED if config.SEED is not None else 0


def resolve_out_dir(out_dir: Path | None) -> Path:
    path = Path(out_dir) if out_dir is not None else Path(config.OUT_DIR)
    path.mkdir(parents=True, exist_ok=True)
    return path


def resolve_schedule(delta: float | None, dmax: float | None, reliable_lo: float | None,
                     voxel_size_mm: float | None = None) -> CensoringSchedule:
    return make_schedule(
        delta=config.DELTA if delta is None else delta,
        d_max=config.DMAX if dmax is None else dmax,
        reliable_lo=config.RELIABLE_LO if reliable_lo is None else reliable_lo,
        voxel_size_mm=voxel_size_mm,
    )


def file_label(text: str) -> str:
    """Filesystem-safe form of a comparison label such as ``X:Y``."""
    return text.replace(":", "-").replace("/", "-")
