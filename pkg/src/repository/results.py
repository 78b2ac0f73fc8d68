import logging
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from src.schemas.kde import DensityCurve
from src.schemas.report import AnalysisReport, AnalysisRow
from src.schemas.simulation import CurveSet
from src.services.lcdm import ClipRecord

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6g"
MIN_GROUP_COLUMNS = 3
ANALYSIS_COLUMNS = ["hemisphere", "step", "gamma_mm", "test", "comparison", "alternative",
                    "statistic", "df1", "df2", "p_value", "reliable"]
CURVE_COLUMNS = ["step", "gamma_mm", "test", "comparison", "alternative", "mean_p", "p_lo",
                 "p_hi", "rejection_rate", "rej_lo", "rej_hi", "n_valid"]
CLIP_COLUMNS = ["subject_id", "group", "hemisphere", "raw_count", "clipped_count", "fraction"]


def write_csv(frame: pd.DataFrame, path: Path | str) -> Path:
    """Six significant digits, LF line ends, empty cells for missing values."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="")
    logger.info("wrote %d rows to %s", len(frame), path)
    return path


def analysis_frame(rows: Sequence[AnalysisRow], holm: bool = False) -> pd.DataFrame:
    groups = max([MIN_GROUP_COLUMNS] + [len(r.group_counts) for r in rows])
    records = []
    for row in rows:
        result = row.result
        df1, df2 = result.df if result.df else (np.nan, np.nan)
        record = {
            "hemisphere": row.hemisphere.value,
            "step": row.step,
            "gamma_mm": row.gamma_mm,
            "test": result.test.value,
            "comparison": row.comparison,
            "alternative": result.alternative.value,
            "statistic": result.statistic if result.valid else np.nan,
            "df1": df1,
            "df2": df2,
            "p_value": result.p_value if result.valid else np.nan,
            "reliable": "true" if row.reliable else "false",
        }
        for j in range(groups):
            record[f"n_group{j + 1}"] = (row.group_counts[j] if j < len(row.group_counts)
                                         else pd.NA)
        record["reason"] = result.invalid_reason.value if result.invalid_reason else ""
        if holm:
            record["p_adjusted"] = np.nan if row.p_adjusted is None else row.p_adjusted
        records.append(record)
    columns = (ANALYSIS_COLUMNS + [f"n_group{j + 1}" for j in range(groups)] + ["reason"]
               + (["p_adjusted"] if holm else []))
    frame = pd.DataFrame.from_records(records, columns=columns)
    for j in range(groups):
        frame[f"n_group{j + 1}"] = frame[f"n_group{j + 1}"].astype("Int64")
    return frame


def write_analysis(report: AnalysisReport, path: Path | str, holm: bool = False) -> Path:
    return write_csv(analysis_frame(report.rows, holm=holm), path)


def curve_frame(curve_set: CurveSet) -> pd.DataFrame:
    records = [row.model_dump(mode="json") for row in curve_set.rows]
    frame = pd.DataFrame.from_records(records, columns=CURVE_COLUMNS)
    for column in CURVE_COLUMNS[5:11]:
        frame[column] = frame[column].astype("float64")
    return frame


def write_curves(curve_set: CurveSet, path: Path | str) -> Path:
    return write_csv(curve_frame(curve_set), path)


def density_frame(curves: Sequence[DensityCurve], ecdfs: Sequence[np.ndarray] = ()) -> pd.DataFrame:
    """One ``grid_mm`` column shared by every curve, then one density column per label."""
    frame = pd.DataFrame({"grid_mm": curves[0].grid})
    for curve in curves:
        frame[curve.label] = curve.density
    for curve, values in zip(curves, ecdfs):
        frame[f"ecdf_{curve.label}"] = values
    return frame


def write_density(curves: Sequence[DensityCurve], path: Path | str,
                  ecdfs: Sequence[np.ndarray] = ()) -> Path:
    return write_csv(density_frame(curves, ecdfs), path)


def write_clip_report(records: Sequence[ClipRecord], path: Path | str) -> Path:
    frame = pd.DataFrame.from_records(
        [(r.subject_id, r.group, r.hemisphere, r.raw_count, r.clipped_count, r.fraction)
         for r in records], columns=CLIP_COLUMNS)
    return write_csv(frame, path)
