"""
Evaluation Module

Thresholds, alarm decisions and Monte Carlo performance figures.

Modules:
- thresholds: ThresholdSet, calibrate_threshold
- detection: DetectionReport, detect, covertness_gap
- tpr: TprTable, table_grid, tpr_campaign, false_positive_counts
"""

from .detection import ChannelDetection, DetectionReport, covertness_gap, detect, first_crossing_index
from .thresholds import DEFAULT_FLOOR, DEFAULT_MARGIN, ThresholdSet, calibrate_threshold
from .tpr import (
    TprRow,
    TprTable,
    campaign_timeline,
    combo_label,
    false_positive_counts,
    table_grid,
    tpr_campaign,
)

__all__ = [
    "ChannelDetection",
    "DetectionReport",
    "covertness_gap",
    "detect",
    "first_crossing_index",
    "DEFAULT_FLOOR",
    "DEFAULT_MARGIN",
    "ThresholdSet",
    "calibrate_threshold",
    "TprRow",
    "TprTable",
    "campaign_timeline",
    "combo_label",
    "false_positive_counts",
    "table_grid",
    "tpr_campaign",
]
