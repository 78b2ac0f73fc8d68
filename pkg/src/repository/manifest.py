import io
import logging
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from src.repository.distances import read_text
from src.schemas.lcdm import DEFAULT_CLIP_HI, DEFAULT_CLIP_LO, ManifestEntry, StudyManifest
from src.services import errors

logger = logging.getLogger(__name__)

COLUMNS = ["subject_id", "group", "hemisphere", "path"]
METADATA_KEYS = {"clip_lo": "clip_lo_mm", "clip_hi": "clip_hi_mm", "voxel_size": "voxel_size_mm"}


def _parse_metadata(line: str, number: int) -> tuple[str, float] | None:
    body = line.lstrip("#").strip()
    if "=" not in body:
        return None
    key, _, value = body.partition("=")
    key = key.strip()
    if key not in METADATA_KEYS:
        return None
    try:
        return METADATA_KEYS[key], float(value)
    except ValueError as err:
        raise errors.ParseError(f"metadata {key!r} is not a number: {value.strip()!r}",
                                line=number) from err


def load_manifest(path: Path | str, clip_lo: float = DEFAULT_CLIP_LO,
                  clip_hi: float = DEFAULT_CLIP_HI) -> StudyManifest:
    """Read the study CSV; relative distance-file paths resolve against its directory.

    ``clip_lo`` and ``clip_hi`` apply when the file carries no clip metadata.
    """
    path = Path(path)
    text = read_text(path, "manifest")

    metadata: dict[str, float] = {}
    body: list[str] = []
    line_numbers: list[int] = []
    for number, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            parsed = _parse_metadata(line, number)
            if parsed:
                metadata[parsed[0]] = parsed[1]
        elif line.strip():
            body.append(line)
            line_numbers.append(number)
    if len(body) <= 1:
        raise errors.EmptyManifest(f"{path}: manifest has no entries")

    try:
        frame = pd.read_csv(io.StringIO("\n".join(body)), dtype=str, keep_default_na=False)
    except pd.errors.ParserError as err:
        raise errors.ParseError(f"{path}: {err}") from err
    if [c.strip() for c in frame.columns] != COLUMNS:
        raise errors.ParseError(f"header must be {','.join(COLUMNS)}", line=line_numbers[0])
    frame.columns = COLUMNS

    entries: list[ManifestEntry] = []
    seen: set[tuple[str, str]] = set()
    for row, number in zip(frame.itertuples(index=False), line_numbers[1:]):
        if any(not isinstance(value, str) for value in row):
            raise errors.ParseError("row has missing fields", line=number)
        try:
            entry = ManifestEntry(subject_id=row.subject_id, group=row.group,
                                  hemisphere=row.hemisphere.strip(), path=row.path.strip())
        except ValidationError as err:
            raise errors.ParseError(err.errors()[0]["msg"], line=number) from err
        if not entry.path.is_absolute():
            entry = entry.model_copy(update={"path": path.parent / entry.path})
        key = (entry.subject_id, entry.hemisphere.value)
        if key in seen:
            raise errors.DuplicateEntry(
                f"line {number}: subject {entry.subject_id!r} listed twice for {key[1]}")
        seen.add(key)
        entries.append(entry)

    try:
        manifest = StudyManifest(
            entries=tuple(entries),
            voxel_size_mm=metadata.get("voxel_size_mm"),
            clip_lo_mm=metadata.get("clip_lo_mm", clip_lo),
            clip_hi_mm=metadata.get("clip_hi_mm", clip_hi),
        )
    except ValidationError as err:
        raise errors.ParseError(f"{path}: {err.errors()[0]['msg']}") from err
    logger.info("manifest %s: %d entries, groups %s", path, len(entries), manifest.groups)
    return manifest
