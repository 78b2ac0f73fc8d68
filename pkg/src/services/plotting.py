"""SVG line charts for p-value, size/power and density curves.

Coordinates are computed here; ``templates/curves.svg.j2`` only lays out the
elements.
"""
import logging
import math
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape

from src.schemas.kde import DensityCurve
from src.schemas.report import AnalysisRow
from src.schemas.simulation import CurveRow, CurveSet
from src.schemas.stats import TestName

logger = logging.getLogger(__name__)

TEMPLATE_FOLDER = Path(__file__).parent / "templates"
PALETTE = ("#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")
PANEL_WIDTH = 420
PANEL_HEIGHT = 260
MARGIN_LEFT = 60
MARGIN_TOP = 34
MARGIN_BOTTOM = 48
PANEL_GAP = 70
X_TICK_STEP = 0.5

env = Environment(loader=FileSystemLoader(TEMPLATE_FOLDER),
                  autoescape=select_autoescape(["j2"], default_for_string=True, default=True),
                  trim_blocks=True, lstrip_blocks=True)


class Series(NamedTuple):
    label: str
    x: np.ndarray
    y: np.ndarray
    color: str = PALETTE[0]
    dashed: bool = False
    in_legend: bool = True


class Panel(NamedTuple):
    series: list[Series]
    x_label: str = "censoring distance (mm)"
    y_label: str = "p-value"
    guides: tuple[float, ...] = ()
    y_range: tuple[float, float] | None = (0.0, 1.0)


def _ticks(lo: float, hi: float, step: float) -> list[float]:
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(first, last + 1)]


def _segments(x: np.ndarray, y: np.ndarray, sx, sy) -> list[str]:
    """Polyline point strings, split wherever y is missing."""
    segments, current = [], []
    for xi, yi in zip(x, y):
        if not math.isfinite(yi):
            if len(current) > 1:
                segments.append(" ".join(current))
            current = []
            continue
        current.append(f"{sx(xi):.2f},{sy(yi):.2f}")
    if len(current) > 1:
        segments.append(" ".join(current))
    return segments


def _layout(panel: Panel, index: int) -> dict:
    xs = np.concatenate([np.asarray(s.x, dtype=np.float64) for s in panel.series])
    x_lo, x_hi = float(np.min(xs)), float(np.max(xs))
    if panel.y_range:
        y_lo, y_hi = panel.y_range
    else:
        ys = np.concatenate([np.asarray(s.y, dtype=np.float64) for s in panel.series])
        y_lo, y_hi = 0.0, float(np.nanmax(ys)) * 1.05 or 1.0
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    def sx(v):
        return (v - x_lo) / (x_hi - x_lo) * PANEL_WIDTH

    def sy(v):
        return PANEL_HEIGHT - (v - y_lo) / (y_hi - y_lo) * PANEL_HEIGHT

    y_step = (y_hi - y_lo) / 5
    return {
        "left": MARGIN_LEFT + index * (PANEL_WIDTH + PANEL_GAP),
        "top": MARGIN_TOP,
        "width": PANEL_WIDTH,
        "height": PANEL_HEIGHT,
        "x_label": panel.x_label,
        "y_label": panel.y_label,
        "x_ticks": [{"pos": round(sx(t), 2), "label": f"{t:g}"}
                    for t in _ticks(x_lo, x_hi, X_TICK_STEP)],
        "y_ticks": [{"pos": round(sy(y_lo + k * y_step), 2), "label": f"{y_lo + k * y_step:.3g}"}
                    for k in range(6)],
        "guides": [f"{sy(g):.2f}" for g in panel.guides if y_lo <= g <= y_hi],
        "series": [{"segments": _segments(np.asarray(s.x, dtype=np.float64),
                                          np.asarray(s.y, dtype=np.float64), sx, sy),
                    "color": s.color, "dashed": s.dashed,
                    "stroke_width": 1.0 if s.dashed else 1.6} for s in panel.series],
        "legend": [{"label": s.label, "color": s.color} for s in panel.series if s.in_legend],
    }


def render(title: str, panels: Sequence[Panel]) -> str:
    width = MARGIN_LEFT + len(panels) * (PANEL_WIDTH + PANEL_GAP) - PANEL_GAP + 20
    height = MARGIN_TOP + PANEL_HEIGHT + MARGIN_BOTTOM
    template = env.get_template("curves.svg.j2")
    return template.render(title=title, width=width, height=height,
                           panels=[_layout(p, i) for i, p in enumerate(panels)])


def write_svg(text: str, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    logger.info("wrote %s", path)
    return path


def _optional(values) -> np.ndarray:
    return np.array([math.nan if v is None else v for v in values], dtype=np.float64)


def analysis_figure(rows: Sequence[AnalysisRow], test: TestName, alpha: float) -> str:
    """p-value curves of one test, one line per comparison.

    Pairwise panels carry guide lines at alpha and 1 - alpha, the latter marking
    significance of the reversed one-sided alternative.
    """
    by_comparison: dict[str, list[AnalysisRow]] = {}
    for row in rows:
        if row.result.test is test:
            by_comparison.setdefault(row.comparison, []).append(row)
    series = [Series(label=comparison, color=PALETTE[i % len(PALETTE)],
                     x=np.array([r.gamma_mm for r in group]),
                     y=np.array([r.result.p_value if r.result.valid else math.nan for r in group]))
              for i, (comparison, group) in enumerate(by_comparison.items())]
    guides = (alpha,) if test.multi_group else (alpha, 1.0 - alpha)
    hemisphere = rows[0].hemisphere.value if rows else ""
    return render(f"{test.value} ({hemisphere})", [Panel(series=series, guides=guides)])


def _banded(label: str, rows: Sequence[CurveRow], point: str, lo: str, hi: str) -> list[Series]:
    x = np.array([r.gamma_mm for r in rows])
    return [
        Series(label=label, x=x, y=_optional(getattr(r, point) for r in rows)),
        Series(label="band", x=x, y=_optional(getattr(r, lo) for r in rows), dashed=True,
               in_legend=False),
        Series(label="band", x=x, y=_optional(getattr(r, hi) for r in rows), dashed=True,
               in_legend=False),
    ]


def curve_figure(curve_set: CurveSet, test: TestName, comparison: str, alpha: float,
                 rate_label: str = "empirical size") -> str:
    """Average p-values (left) and rejection rates (right) with their bands."""
    rows = curve_set.select(test, comparison)
    alternative = rows[0].alternative.value if rows else ""
    guides = (alpha, 1.0 - alpha)
    return render(f"{test.value} {comparison} {alternative}".strip(), [
        Panel(series=_banded("mean p", rows, "mean_p", "p_lo", "p_hi"), guides=guides),
        Panel(series=_banded(rate_label, rows, "rejection_rate", "rej_lo", "rej_hi"),
              y_label=rate_label, guides=guides),
    ])


def density_figure(curves: Sequence[DensityCurve], title: str = "kernel density") -> str:
    counts = any(c.scale != 1.0 for c in curves)
    series = [Series(label=c.label or f"sample {i + 1}", x=c.grid, y=c.density,
                     color=PALETTE[i % len(PALETTE)]) for i, c in enumerate(curves)]
    return render(title, [Panel(series=series, x_label="distance (mm)",
                                y_label="distances per mm" if counts else "density",
                                y_range=None)])
