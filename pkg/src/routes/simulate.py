import logging
from pathlib import Path
from typing import Optional

import typer

from src.middleware.middleware import exit_on_error
from src.repository.distances import write_distances
from src.routes import options
from src.schemas.simulation import RemainderPlacement
from src.services.simulator import derive_profile, generate, make_params, reference_profile

logger = logging.getLogger(__name__)

router = typer.Typer()


@router.command("simulate")
@exit_on_error
def simulate(
    eta: int = typer.Option(0, "--eta", help="Stack-count shift (0 <= eta < 2059)."),
    r: float = typer.Option(1.0, "--r", help="Uniform offset width (0 < r < 2)."),
    n: int = typer.Option(10_000, "--n", help="Number of distances."),
    remainder_placement: RemainderPlacement = typer.Option(
        RemainderPlacement.append, "--remainder-placement",
        help="Put the remainder stack last or sort it in."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output distance file."),
    seed: Optional[int] = options.seed_option(),
    out_dir: Optional[Path] = options.out_dir_option(),
):
    """Write one synthetic distance file from the stacked-uniform generator."""
    seed = options.resolve_seed(seed)
    profile = derive_profile(reference_profile(), eta, remainder_placement)
    sample = generate(profile, make_params(eta=eta, r=r, n=n, seed=seed))
    if out is None:
        out = options.resolve_out_dir(out_dir) / f"sim_eta{eta}_r{r:g}_seed{seed}.txt"
    typer.echo(str(write_distances(sample, out)))
