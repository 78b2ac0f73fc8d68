import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import List, Optional

import typer

from src.conf.config import config
from src.middleware.middleware import exit_on_error
from src.repository.manifest import load_manifest
from src.repository.results import write_analysis, write_clip_report
from src.routes import options
from src.schemas.censoring import CensoringSchedule
from src.schemas.lcdm import Hemisphere, StudyManifest
from src.schemas.report import AnalysisReport
from src.schemas.stats import SWEEP_TESTS
from src.services import errors
from src.services.analysis import censored_analysis, pooled_analysis
from src.services.lcdm import ClipRecord, pool_manifest
from src.services.plotting import analysis_figure, write_svg
from src.services.sweep import Pair

logger = logging.getLogger(__name__)

router = typer.Typer()


def _analyze_hemisphere(manifest: StudyManifest, schedule: CensoringSchedule,
                        pairs: list[Pair] | None, pooled_mode: bool, holm: bool, n_mc: int,
                        seed: int, hemisphere: Hemisphere
                        ) -> tuple[AnalysisReport, list[ClipRecord]]:
    pooled, records = pool_manifest(manifest, hemisphere)
    if pooled_mode:
        rows = pooled_analysis(pooled, schedule, pairs, holm=holm, n_mc=n_mc, seed=seed)
    else:
        rows = censored_analysis(pooled, schedule, pairs)
    return AnalysisReport(rows=tuple(rows)), records


@router.command("analyze")
@exit_on_error
def analyze(
    manifest_path: Path = typer.Argument(..., help="Study manifest CSV."),
    pooled: bool = typer.Option(False, "--pooled",
                                help="Uncensored analysis with K-S and Lilliefors added."),
    holm: bool = typer.Option(False, "--holm",
                              help="Holm-adjust pairwise p-values (pooled mode only)."),
    pair: Optional[List[str]] = typer.Option(None, "--pair",
                                             help="Ordered pair FIRST:SECOND; repeatable."),
    n_mc: Optional[int] = typer.Option(None, "--n-mc", min=1,
                                       help="Lilliefors Monte Carlo replications."),
    delta: Optional[float] = options.delta_option(),
    dmax: Optional[float] = options.dmax_option(),
    reliable_lo: Optional[float] = options.reliable_lo_option(),
    alpha: Optional[float] = options.alpha_option(),
    seed: Optional[int] = options.seed_option(),
    threads: Optional[int] = options.threads_option(),
    out_dir: Optional[Path] = options.out_dir_option(),
    svg: bool = options.svg_option(),
):
    """Censored multi-group and pairwise tests for every hemisphere of a study."""
    if holm and not pooled:
        raise errors.ConfigError("--holm applies to pooled analyses only; add --pooled")
    manifest = load_manifest(manifest_path, config.CLIP_LO, config.CLIP_HI)
    schedule = options.resolve_schedule(delta, dmax, reliable_lo, manifest.voxel_size_mm)
    pairs = [Pair.parse(p) for p in pair] if pair else None
    alpha = config.ALPHA if alpha is None else alpha
    threads = threads or config.THREADS
    out = options.resolve_out_dir(out_dir)

    work = partial(_analyze_hemisphere, manifest, schedule, pairs, pooled, holm,
                   n_mc or config.LILLIEFORS_NMC, options.resolve_seed(seed))
    hemispheres = manifest.hemispheres
    if threads > 1 and len(hemispheres) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(hemispheres))) as pool:
            results = list(pool.map(work, hemispheres))
    else:
        results = [work(h) for h in hemispheres]

    all_records: list[ClipRecord] = []
    prefix = "pooled" if pooled else "analysis"
    for hemisphere, (report, records) in zip(hemispheres, results):
        all_records.extend(records)
        path = write_analysis(report, out / f"{prefix}_{hemisphere.value}.csv", holm=holm)
        typer.echo(str(path))
        if svg and not pooled:
            for test in SWEEP_TESTS:
                figure = analysis_figure(report.rows, test, alpha)
                write_svg(figure, out / f"{prefix}_{hemisphere.value}_{test.value}.svg")
    write_clip_report(all_records, out / "clip_report.csv")
