import functools
import logging
from typing import Callable

import typer

from src.services.errors import CensorMorphError

logger = logging.getLogger(__name__)


def exit_on_error(command: Callable) -> Callable:
    """Turn a ``CensorMorphError`` raised by a command into its process exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CensorMorphError as err:
            logger.error("%s: %s", type(err).__name__, err.detail)
            raise typer.Exit(code=err.exit_code) from err

    return wrapper
