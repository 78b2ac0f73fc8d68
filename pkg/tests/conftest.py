from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
import pytest

from src.repository.distances import format_distances
from src.services.censoring import make_schedule


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


@pytest.fixture
def schedule():
    return make_schedule(0.01, 5.5, 1.0)


@pytest.fixture
def coarse_schedule():
    return make_schedule(0.5, 5.5, 1.0)


@pytest.fixture
def write_study(tmp_path: Path) -> Callable[..., Path]:
    """Write distance files and a manifest; ``groups`` maps group -> list of subject samples."""

    def _write(groups: Mapping[str, Sequence[Sequence[float]]], hemispheres=("left",),
               metadata: str = "") -> Path:
        lines = [metadata] if metadata else []
        lines.append("subject_id,group,hemisphere,path")
        for hemisphere in hemispheres:
            for group, subjects in groups.items():
                for j, values in enumerate(subjects):
                    subject = f"{group}{j}"
                    name = f"{subject}_{hemisphere}.txt"
                    (tmp_path / name).write_text(format_distances(np.asarray(values)),
                                                 encoding="utf-8")
                    lines.append(f"{subject},{group},{hemisphere},{name}")
        manifest = tmp_path / "study.csv"
        manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return manifest

    return _write
