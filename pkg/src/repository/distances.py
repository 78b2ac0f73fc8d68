import logging
import re
from pathlib import Path

import numpy as np

from src.schemas.lcdm import DistanceSet, Hemisphere
from src.services import errors

logger = logging.getLogger(__name__)

DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
SIGNIFICANT_DIGITS = 6


def read_text(path: Path, kind: str) -> str:
    """UTF-8 text of a study file; unreadable files are data errors."""
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError as err:
        raise errors.DataError(f"{kind} not found: {path}") from err
    except UnicodeDecodeError as err:
        raise errors.ParseError(f"{path}: not UTF-8 text at byte {err.start}") from err
    except OSError as err:
        raise errors.DataError(f"cannot read {kind} {path}: {err.strerror or err}") from err


def parse_distances(text: str) -> np.ndarray:
    """One decimal real per line; the final newline is optional, blank lines are not."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise errors.EmptyFile("distance file is empty")
    values = np.empty(len(lines))
    for number, line in enumerate(lines, start=1):
        token = line.strip()
        if not token:
            raise errors.ParseError("blank line", line=number)
        if not DECIMAL.fullmatch(token):
            raise errors.ParseError(f"not a decimal number: {token!r}", line=number)
        values[number - 1] = float(token)
    return values


def load_distances(path: Path | str, subject_id: str, hemisphere: Hemisphere) -> DistanceSet:
    path = Path(path)
    text = read_text(path, "distance file")
    try:
        values = parse_distances(text)
    except errors.DataError as err:
        raise type(err)(f"{path}: {err.detail}") from err
    logger.debug("read %d distances from %s", values.size, path)
    return DistanceSet(subject_id=subject_id, hemisphere=Hemisphere(hemisphere),
                       distances=np.sort(values, kind="stable"), raw_count=values.size)


def format_distances(distances: np.ndarray) -> str:
    return "".join(f"{d:.{SIGNIFICANT_DIGITS}g}\n" for d in distances)


def write_distances(distance_set: DistanceSet, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_distances(distance_set.distances))
    logger.info("wrote %d distances to %s", len(distance_set), path)
    return path
