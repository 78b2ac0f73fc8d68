import logging

from rich.console import Console
from rich.logging import RichHandler

from src.conf.config import config


def setup_logging(level: str | None = None) -> None:
    """Route every ``censormorph`` logger through a stderr rich handler."""
    logging.basicConfig(
        level=(level or config.LOG_LEVEL).upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True,
                              show_path=False)],
        force=True,
    )
