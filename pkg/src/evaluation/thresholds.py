"""
Threshold Calibration

Monte Carlo calibration of one threshold per residual: the largest residual
norm seen over healthy noisy runs, scaled by a safety margin.

    eta = max(margin * max_runs max_t ||res(t)||, floor)

A residual whose healthy peak stays under the floor (the AA/SA residuals of
a bank with C H = I are structurally noise free) is flagged degenerate and
gets the floor as threshold.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..design.bank import DetectorBank
from ..model import AugmentedModel
from ..sim import SimConfig, simulate
from ..threat import ScenarioTimeline

logger = logging.getLogger(__name__)

DEFAULT_MARGIN = 1.1
DEFAULT_FLOOR = 1e-6


@dataclass
class ThresholdSet:
    """
    Calibrated thresholds

    Attributes
    ----------
    values : dict
        Category -> eta (> 0)
    peaks : dict
        Category -> largest healthy residual norm
    degenerate : dict
        Category -> True when the peak fell below the floor
    n_runs : int
        Monte Carlo runs
    seed : int
        Base seed; run i used seed + i
    margin : float
        Scale applied to the peak
    floor : float
        Smallest admissible threshold
    config : dict
        Simulation settings of the calibration runs
    """
    values: Dict[str, float]
    peaks: Dict[str, float] = field(default_factory=dict)
    degenerate: Dict[str, bool] = field(default_factory=dict)
    n_runs: int = 0
    seed: int = 0
    margin: float = DEFAULT_MARGIN
    floor: float = DEFAULT_FLOOR
    config: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for category, eta in self.values.items():
            if not (np.isfinite(eta) and eta > 0):
                raise ValueError(f"Threshold for {category} must be positive, got {eta}")

    def __getitem__(self, category: str) -> float:
        return self.values[category]

    def __contains__(self, category: str) -> bool:
        return category in self.values

    def scaled(self, factor: float) -> "ThresholdSet":
        """Copy with every threshold multiplied by factor"""
        return replace(self, values={c: eta * factor for c, eta in self.values.items()})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "thresholds": dict(self.values),
            "peaks": dict(self.peaks),
            "degenerate": dict(self.degenerate),
            "n_runs": self.n_runs,
            "seed": self.seed,
            "margin": self.margin,
            "floor": self.floor,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ThresholdSet":
        return cls(
            values={c: float(v) for c, v in data["thresholds"].items()},
            peaks={c: float(v) for c, v in data.get("peaks", {}).items()},
            degenerate={c: bool(v) for c, v in data.get("degenerate", {}).items()},
            n_runs=int(data.get("n_runs", 0)),
            seed=int(data.get("seed", 0)),
            margin=float(data.get("margin", DEFAULT_MARGIN)),
            floor=float(data.get("floor", DEFAULT_FLOOR)),
            config=dict(data.get("config", {})),
        )

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ThresholdSet":
        with open(path) as f:
            return cls.from_dict(json.load(f))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {"category": c, "eta": eta, "peak": self.peaks.get(c), "degenerate": self.degenerate.get(c, False)}
            for c, eta in self.values.items()
        ])


def calibrate_threshold(
    aug: AugmentedModel,
    bank: DetectorBank,
    cfg: Optional[SimConfig] = None,
    n_runs: int = 100,
    margin: float = DEFAULT_MARGIN,
    floor: float = DEFAULT_FLOOR,
    progress: bool = False,
) -> ThresholdSet:
    """
    Calibrate every residual threshold on healthy runs

    Parameters
    ----------
    aug : AugmentedModel
        Augmented system
    bank : DetectorBank
        Filters and detectors
    cfg : SimConfig, optional
        Settings of the runs; run i uses seed cfg.seed + i
    n_runs : int
        Monte Carlo runs (>= 1)
    margin : float
        Safety factor (>= 1)
    floor : float
        Smallest threshold
    progress : bool
        Show a progress bar

    Returns
    -------
    ThresholdSet

    Raises
    ------
    ValueError
        If n_runs < 1, margin < 1 or floor <= 0
    """
    if n_runs < 1:
        raise ValueError(f"n_runs must be at least 1, got {n_runs}")
    if margin < 1:
        raise ValueError(f"margin must be >= 1, got {margin}")
    if not floor > 0:
        raise ValueError(f"floor must be positive, got {floor}")

    cfg = cfg or SimConfig()
    healthy = ScenarioTimeline(name="healthy")
    peaks = {c: 0.0 for c in bank.categories}

    for i in tqdm(range(n_runs), desc="Calibrating", disable=not progress):
        trace = simulate(aug, bank, healthy, replace(cfg, seed=cfg.seed + i))
        for category, peak in trace.max_residual().items():
            peaks[category] = max(peaks[category], peak)

    values, degenerate = {}, {}
    for category, peak in peaks.items():
        eta = margin * peak
        degenerate[category] = eta < floor
        values[category] = max(eta, floor)

    flagged = [c for c, d in degenerate.items() if d]
    if flagged:
        logger.info(f"Residuals {flagged} stayed below the floor {floor:g}; thresholds set to the floor")
    logger.info(f"Calibrated thresholds over {n_runs} runs: " + ", ".join(f"{c}={v:.4g}" for c, v in values.items()))

    return ThresholdSet(
        values=values,
        peaks=peaks,
        degenerate=degenerate,
        n_runs=n_runs,
        seed=cfg.seed,
        margin=margin,
        floor=floor,
        config=cfg.to_dict(),
    )
