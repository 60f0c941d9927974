"""
Residual Plots

Post-hoc figure of the residual norms of a trace, one panel per category,
with the thresholds drawn in.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..evaluation import DetectionReport, ThresholdSet  # noqa: E402
from ..sim import SimulationTrace  # noqa: E402

COLORS = {"AA": "#c0392b", "SA": "#8e44ad", "AF": "#2471a3", "SF": "#229954"}


def plot_residuals(
    trace: SimulationTrace,
    output_path: Union[str, Path],
    thresholds: Optional[ThresholdSet] = None,
    report: Optional[DetectionReport] = None,
    dpi: int = 150,
) -> Path:
    """
    Save ||res(t)|| for every category to a PNG

    Parameters
    ----------
    trace : SimulationTrace
        Simulated run
    output_path : str or Path
        Target file
    thresholds : ThresholdSet, optional
        Drawn as dashed lines
    report : DetectionReport, optional
        First crossings drawn as dotted verticals
    """
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    categories = trace.categories
    fig, axes = plt.subplots(len(categories), 1, figsize=(8, 2.2 * len(categories)), sharex=True, squeeze=False)
    for ax, category in zip(axes[:, 0], categories):
        color = COLORS.get(category, "black")
        ax.plot(trace.t, trace.residual_norm(category), color=color, linewidth=1.0)
        if thresholds is not None and category in thresholds:
            ax.axhline(thresholds[category], color="black", linestyle="--", linewidth=0.8)
        if report is not None and category in report.channels and report[category].detected:
            ax.axvline(report[category].first_crossing, color=color, linestyle=":", linewidth=0.8)
        ax.set_ylabel(f"||res_{category}||")
        ax.grid(alpha=0.3)

    axes[-1, 0].set_xlabel("t [s]")
    axes[0, 0].set_title(f"Residual norms: {trace.scenario}")
    fig.tight_layout()
    fig.savefig(output_path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return output_path
