"""
Detection Decisions

A residual raises an alarm when its norm stays above the threshold for
`debounce` consecutive samples; the set of alarmed residuals is the
isolation verdict.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Optional

import numpy as np

from ..design.bank import DetectorBank
from ..model import AugmentedModel
from ..sim import SimConfig, SimulationTrace, simulate
from ..threat import ATTACK_SIGNALS, ScenarioTimeline
from .thresholds import ThresholdSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelDetection:
    category: str
    detected: bool
    first_crossing: Optional[float]
    peak: float
    threshold: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "detected": self.detected,
            "first_crossing": self.first_crossing,
            "peak": self.peak,
            "threshold": self.threshold,
        }


@dataclass(frozen=True)
class DetectionReport:
    """
    Per-residual decisions of one trace

    Attributes
    ----------
    channels : dict
        Category -> ChannelDetection
    debounce : int
        Consecutive samples required above threshold
    truncated : bool
        Copied from the trace
    """
    channels: Dict[str, ChannelDetection]
    debounce: int = 1
    truncated: bool = False

    @property
    def verdict(self) -> FrozenSet[str]:
        return frozenset(c for c, d in self.channels.items() if d.detected)

    def crossing_order(self) -> List[str]:
        """Detected categories sorted by first crossing time"""
        detected = [d for d in self.channels.values() if d.detected]
        return [d.category for d in sorted(detected, key=lambda d: d.first_crossing)]

    def __getitem__(self, category: str) -> ChannelDetection:
        return self.channels[category]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": sorted(self.verdict),
            "crossing_order": self.crossing_order(),
            "debounce": self.debounce,
            "truncated": self.truncated,
            "channels": {c: d.to_dict() for c, d in self.channels.items()},
        }


def first_crossing_index(norms: np.ndarray, threshold: float, debounce: int = 1, start: int = 0) -> Optional[int]:
    """
    Index opening the first run of `debounce` samples with norm > threshold

    Examples
    --------
    >>> first_crossing_index(np.array([0.0, 2.0, 0.0, 2.0, 2.0]), 1.0, debounce=2)
    3
    """
    above = (np.asarray(norms) > threshold).astype(int)
    above[:start] = 0
    if above.size < debounce:
        return None
    window = np.convolve(above, np.ones(debounce, dtype=int), mode="valid")
    hits = np.flatnonzero(window == debounce)
    return int(hits[0]) if hits.size else None


def detect(
    trace: SimulationTrace,
    thresholds: ThresholdSet,
    debounce: int = 1,
    t_from: Optional[float] = None,
) -> DetectionReport:
    """
    Alarm decisions for every residual of a trace

    Parameters
    ----------
    trace : SimulationTrace
        Simulated residuals
    thresholds : ThresholdSet
        Must cover every category of the trace
    debounce : int
        Consecutive samples above threshold (>= 1)
    t_from : float, optional
        Ignore samples before this time

    Returns
    -------
    DetectionReport
    """
    if debounce < 1:
        raise ValueError(f"debounce must be at least 1, got {debounce}")
    missing = [c for c in trace.categories if c not in thresholds]
    if missing:
        raise ValueError(f"No threshold for {missing}")

    start = 0 if t_from is None else int(np.searchsorted(trace.t, t_from - 1e-12))
    channels = {}
    for category in trace.categories:
        norms = trace.residual_norm(category)
        eta = thresholds[category]
        index = first_crossing_index(norms, eta, debounce, start)
        channels[category] = ChannelDetection(
            category=category,
            detected=index is not None,
            first_crossing=None if index is None else float(trace.t[index]),
            peak=float(np.max(norms)) if norms.size else 0.0,
            threshold=eta,
        )
    return DetectionReport(channels=channels, debounce=debounce, truncated=trace.truncated)


def covertness_gap(
    aug: AugmentedModel,
    bank: DetectorBank,
    timeline: ScenarioTimeline,
    cfg: Optional[SimConfig] = None,
    output: str = "y_star",
) -> float:
    """
    max_t ||y(t) - y_attack_free(t)|| over two runs with the same seed

    The attack-free run drops the a_u, a_y and a_c generators and keeps
    everything else.

    Parameters
    ----------
    output : str
        'y_star' (C&C side) or 'y_p' (plant side)
    """
    if output not in ("y_star", "y_p"):
        raise ValueError(f"output must be 'y_star' or 'y_p', got '{output}'")
    cfg = cfg or SimConfig()
    attacked = simulate(aug, bank, timeline, cfg)
    clean = simulate(aug, bank, timeline.without(ATTACK_SIGNALS), cfg)

    length = min(attacked.t.size, clean.t.size)
    diff = getattr(attacked, output)[:length] - getattr(clean, output)[:length]
    gap = float(np.max(np.linalg.norm(diff, axis=1))) if length else 0.0
    logger.debug(f"Covertness gap at {output}: {gap:.3g}")
    return gap
