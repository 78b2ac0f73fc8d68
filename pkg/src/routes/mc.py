import logging
from pathlib import Path
from typing import List, Optional

import typer

from src.conf.config import config
from src.middleware.middleware import exit_on_error
from src.repository.results import write_curves
from src.routes import options
from src.schemas.simulation import RemainderPlacement
from src.schemas.stats import SWEEP_TESTS, TestName
from src.services.harness import (QUICK_N, QUICK_N_MC, build_scenario, parse_sample_spec,
                                  preset_scenario, run_scenario)
from src.services.plotting import curve_figure, write_svg
from src.services.sweep import Pair

logger = logging.getLogger(__name__)

router = typer.Typer(help="Monte Carlo empirical size and power curves.")


def _run(kind: str, preset: str, quick: bool, n: Optional[int], n_mc: Optional[int],
         sample: Optional[List[str]], pair: Optional[List[str]],
         test: Optional[List[TestName]], remainder_placement: RemainderPlacement,
         delta: Optional[float], dmax: Optional[float], reliable_lo: Optional[float],
         alpha: Optional[float], seed: Optional[int], threads: Optional[int],
         out_dir: Optional[Path], svg: bool) -> None:
    schedule = options.resolve_schedule(delta, dmax, reliable_lo)
    alpha = config.ALPHA if alpha is None else alpha
    tests = tuple(test) if test else SWEEP_TESTS
    common = dict(alpha=alpha, level=config.LEVEL, master_seed=options.resolve_seed(seed),
                  tests=tests, remainder_placement=remainder_placement)
    if sample:
        specs = [parse_sample_spec(s) for s in sample]
        size = n or (QUICK_N if quick else None)
        if size:
            specs = [s.model_copy(update={"n": size}) for s in specs]
        pairs = tuple(tuple(Pair.parse(p)) for p in pair) if pair else None
        scenario = build_scenario(specs, schedule, n_mc=n_mc or (QUICK_N_MC if quick else None),
                                  pairs=pairs, **common)
        name = "custom"
    else:
        scenario = preset_scenario(preset, schedule, quick=quick, n=n, n_mc=n_mc, **common)
        if pair:
            scenario = build_scenario(scenario.sample_specs, schedule, n_mc=scenario.n_mc,
                                      pairs=tuple(tuple(Pair.parse(p)) for p in pair), **common)
        name = preset

    curve_set = run_scenario(scenario, threads=threads or config.THREADS)
    out = options.resolve_out_dir(out_dir)
    typer.echo(str(write_curves(curve_set, out / f"mc_{kind}_{name}.csv")))
    if svg:
        rate_label = "empirical size" if kind == "size" else "empirical power"
        seen = dict.fromkeys((row.test, row.comparison) for row in curve_set.rows)
        for test_name, comparison in seen:
            figure = curve_figure(curve_set, test_name, comparison, alpha, rate_label)
            write_svg(figure, out / f"mc_{kind}_{name}_{test_name.value}_"
                                    f"{options.file_label(comparison)}.svg")


def _command(kind: str, default_preset: str):
    @exit_on_error
    def command(
        preset: str = typer.Option(default_preset, "--preset",
                                   help="Shipped scenario: null-eq10 or alt-eq12."),
        quick: bool = options.quick_option(),
        n: Optional[int] = typer.Option(None, "--n", min=1, help="Distances per sample."),
        n_mc: Optional[int] = typer.Option(None, "--n-mc", min=1, help="Replications."),
        sample: Optional[List[str]] = typer.Option(
            None, "--sample", help="Custom sample LABEL:ETA:R:N; repeatable, replaces the preset."),
        pair: Optional[List[str]] = typer.Option(None, "--pair",
                                                 help="Ordered pair FIRST:SECOND; repeatable."),
        test: Optional[List[TestName]] = typer.Option(None, "--test",
                                                      help="Test to run; repeatable."),
        remainder_placement: RemainderPlacement = typer.Option(
            RemainderPlacement.append, "--remainder-placement"),
        delta: Optional[float] = options.delta_option(),
        dmax: Optional[float] = options.dmax_option(),
        reliable_lo: Optional[float] = options.reliable_lo_option(),
        alpha: Optional[float] = options.alpha_option(),
        seed: Optional[int] = options.seed_option(),
        threads: Optional[int] = options.threads_option(),
        out_dir: Optional[Path] = options.out_dir_option(),
        svg: bool = options.svg_option(),
    ):
        _run(kind, preset, quick, n, n_mc, sample, pair, test, remainder_placement, delta,
             dmax, reliable_lo, alpha, seed, threads, out_dir, svg)

    command.__doc__ = (f"Empirical {kind} curves with confidence bands "
                       f"({default_preset} by default).")
    return command


router.command("size")(_command("size", "null-eq10"))
router.command("power")(_command("power", "alt-eq12"))
