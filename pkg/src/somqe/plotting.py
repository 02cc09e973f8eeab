"""Deterministic SVG charts of QE against image index.

Each series is drawn as one line with circular markers; the line artist gets
the SVG id ``series-<k>`` so its polyline and markers can be located in the
output.  Fixed hash salt and no date metadata keep the bytes stable.
"""

from __future__ import annotations

import os
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

from matplotlib.backends.backend_svg import FigureCanvasSVG  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

_RC = {
    "svg.hashsalt": "somqe",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
}


def _values(series) -> list[float]:
    if hasattr(series, "qes"):
        return list(series.qes)
    return [float(v) for v in series]


def emit_plot(series: Mapping[str, object] | Sequence[object], path: str | os.PathLike,
              title: str = "", xlabel: str = "image index", ylabel: str = "quantization error"
              ) -> None:
    """Write an SVG line chart; ``series`` maps labels to reports or QE lists."""
    if not isinstance(series, Mapping):
        series = {f"series {i + 1}": s for i, s in enumerate(series)}
    if not series:
        raise ValueError("nothing to plot")
    data = {label: _values(s) for label, s in series.items()}
    if any(len(v) == 0 for v in data.values()):
        raise ValueError("cannot plot an empty report")

    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(6.4, 4.0))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot()
        for k, (label, ys) in enumerate(data.items()):
            xs = list(range(1, len(ys) + 1))
            (line,) = ax.plot(xs, ys, marker="o", label=label)
            line.set_gid(f"series-{k}")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
