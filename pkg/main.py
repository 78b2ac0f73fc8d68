import sys
from typing import Optional

import click
import typer

from src.conf.config import LOG_LEVELS
from src.conf.logger import setup_logging
from src.routes import analyze, kde, mc, simulate

app = typer.Typer(name="censormorph", no_args_is_help=True, add_completion=False,
                  help="Censored LCDM distance analysis and Monte Carlo validation.")


def include_router(router: typer.Typer, name: Optional[str] = None) -> None:
    """Mount a router as a command group, or its commands at the top level."""
    if name:
        app.add_typer(router, name=name)
    else:
        app.registered_commands.extend(router.registered_commands)


include_router(analyze.router)
include_router(simulate.router)
include_router(mc.router, name="mc")
include_router(kde.router)


@app.callback()
def main(log_level: Optional[str] = typer.Option(None, "--log-level",
                                                 help="Logging level (default from config).")):
    if log_level is not None and log_level.upper() not in LOG_LEVELS:
        raise typer.BadParameter(f"choose from {', '.join(LOG_LEVELS)}", param_hint="--log-level")
    setup_logging(log_level)


def run() -> None:
    """Console entry point; Click usage errors exit with 1 instead of 2."""
    try:
        code = app(standalone_mode=False)
    except click.exceptions.UsageError as err:
        err.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    sys.exit(code or 0)


if __name__ == "__main__":
    run()
