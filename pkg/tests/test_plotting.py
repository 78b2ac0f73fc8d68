import re

import numpy as np

from src.schemas.kde import DensityCurve
from src.schemas.simulation import CurveRow, CurveSet
from src.schemas.stats import Alternative, TestName
from src.services.plotting import curve_figure, density_figure, write_svg

COORDINATE = re.compile(r'\b(?:x|y|x1|x2|y1|y2)="([^"]*)"')


def coordinates(svg: str) -> list[float]:
    return [float(value) for value in COORDINATE.findall(svg)]


def curve_set() -> CurveSet:
    rows = []
    for step, gamma in enumerate((0.0, 0.5, 1.0, 1.5)):
        valid = step > 0
        rows.append(CurveRow(step=step, gamma_mm=gamma, test=TestName.wilcoxon, comparison="X:Y",
                             alternative=Alternative.less,
                             mean_p=0.5 if valid else None, p_lo=0.45 if valid else None,
                             p_hi=0.55 if valid else None,
                             rejection_rate=0.05 if valid else None,
                             rej_lo=0.02 if valid else None, rej_hi=0.08 if valid else None,
                             n_valid=10 if valid else 0))
    return CurveSet(n_mc=10, rows=tuple(rows))


class TestCurveFigure:
    def test_renders_both_panels(self):
        svg = curve_figure(curve_set(), TestName.wilcoxon, "X:Y", 0.05)
        assert svg.lstrip().startswith("<svg") and svg.rstrip().endswith("</svg>")
        assert svg.count("<polyline") == 6
        assert "empirical size" in svg

    def test_tick_coordinates_are_numbers(self):
        svg = curve_figure(curve_set(), TestName.wilcoxon, "X:Y", 0.05)
        values = coordinates(svg)
        assert values and all(np.isfinite(values))

    def test_tick_labels_sit_below_their_ticks(self):
        svg = curve_figure(curve_set(), TestName.wilcoxon, "X:Y", 0.05)
        ticks = [float(y) for y in re.findall(r'<line x1="-4" y1="([^"]*)"', svg)]
        labels = [float(y) for y in re.findall(r'<text x="-7" y="([^"]*)"', svg)]
        assert len(ticks) == len(labels) == 12
        np.testing.assert_allclose(labels, np.asarray(ticks) + 4, atol=0.01)

    def test_tick_positions_span_the_panel(self):
        svg = curve_figure(curve_set(), TestName.wilcoxon, "X:Y", 0.05)
        ticks = [float(y) for y in re.findall(r'<line x1="-4" y1="([^"]*)"', svg)]
        assert min(ticks) == 0.0 and max(ticks) == 260.0


class TestDensityFigure:
    def test_density(self, tmp_path):
        grid = np.linspace(0, 5, 50)
        curve = DensityCurve(label="CTRL", grid=grid, density=np.exp(-(grid - 2) ** 2),
                             bandwidth=0.2, n=100)
        path = write_svg(density_figure([curve]), tmp_path / "figs" / "kde.svg")
        text = path.read_text(encoding="utf-8")
        assert "CTRL" in text and ">density<" in text
        assert all(np.isfinite(coordinates(text)))

    def test_count_scaled_axis(self):
        grid = np.linspace(0, 1, 5)
        curve = DensityCurve(grid=grid, density=np.ones(5) * 40, bandwidth=0.1, n=40, scale=40)
        assert "distances per mm" in density_figure([curve])

    def test_labels_are_escaped(self):
        grid = np.linspace(0, 1, 5)
        curve = DensityCurve(label="a<b", grid=grid, density=np.ones(5), bandwidth=0.1, n=5)
        svg = density_figure([curve])
        assert "a&lt;b" in svg and "a<b" not in svg

