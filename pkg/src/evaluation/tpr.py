"""
True Positive Rate Campaigns

Each table targets one residual; each row switches on a combination of
anomaly categories that contains the target, and counts over seeded noisy
runs how often the target residual raises an alarm after the onset.

    TPR = TP / (TP + FN)

Anomalies, all switched on at the campaign onset:
- AA: actuator attack a_u, steps spaced from 2 to 1
- SA: sensor attack a_y of the covert pair built on that a_u
- AF: actuator fault f1 = 40
- SF: pseudo actuator fault f2 = 20

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import itertools
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from sklearn.metrics import confusion_matrix
from tqdm import tqdm

from ..design.bank import DetectorBank
from ..design.uio import CATEGORIES
from ..model import AugmentedModel
from ..sim import SimConfig, simulate
from ..threat import ScenarioTimeline, bias_fault, covert_amplitude, covert_attack, waveform
from .detection import detect
from .thresholds import ThresholdSet

logger = logging.getLogger(__name__)

CAMPAIGN_ONSET = 5.0
ACTUATOR_FAULT = 40.0
SENSOR_FAULT = 20.0
FP_SEED_OFFSET = 1000

Combination = Tuple[str, ...]


def combo_label(combo: Sequence[str]) -> str:
    return " & ".join(combo)


@dataclass
class TprRow:
    combo: Combination
    tp: int
    fn: int

    @property
    def n_runs(self) -> int:
        return self.tp + self.fn

    @property
    def tpr(self) -> float:
        return self.tp / self.n_runs if self.n_runs else float("nan")

    def to_dict(self) -> Dict[str, Any]:
        return {"combo": combo_label(self.combo), "tp": self.tp, "fn": self.fn, "tpr": self.tpr}


@dataclass
class TprTable:
    """
    TPR of one target residual over a grid of anomaly combinations

    Attributes
    ----------
    table : str
        Target category
    rows : list of TprRow
        One per combination
    metadata : dict
        Runs, seeds and debounce of the campaign
    """
    table: str
    rows: List[TprRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, combo: Union[str, Sequence[str]]) -> TprRow:
        label = combo if isinstance(combo, str) else combo_label(combo)
        for row in self.rows:
            if combo_label(row.combo) == label:
                return row
        raise KeyError(label)

    def to_dict(self) -> Dict[str, Any]:
        return {"table": self.table, "rows": [row.to_dict() for row in self.rows], "metadata": self.metadata}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.to_dict() for row in self.rows], columns=["combo", "tp", "fn", "tpr"])

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path

    def to_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)
        return path


def table_grid(target: str) -> List[Combination]:
    """
    The eight rows of a table: the target alone, then with every combination
    of the other categories

    Examples
    --------
    >>> table_grid("SF")[:2]
    [('SF',), ('SF', 'AA')]
    """
    if target not in CATEGORIES:
        raise ValueError(f"Unknown category '{target}'. Expected one of {CATEGORIES}")
    others = [c for c in CATEGORIES if c != target]
    rows: List[Combination] = [(target,)]
    for size in range(1, len(others) + 1):
        rows.extend((target,) + extra for extra in itertools.combinations(others, size))
    return rows


def campaign_timeline(aug: AugmentedModel, combo: Sequence[str], onset: float = CAMPAIGN_ONSET) -> ScenarioTimeline:
    """Timeline switching on the anomalies of a combination at the onset"""
    active = set(combo)
    a_u = waveform("a_u", "step", covert_amplitude(aug.dims.m_a), onset)
    generators = []
    if "AA" in active:
        generators.append(a_u)
    if "SA" in active:
        generators.append(covert_attack(aug, a_u))
    if "AF" in active:
        generators.append(bias_fault("f1", ACTUATOR_FAULT, onset, aug.dims.m_f))
    if "SF" in active:
        generators.append(bias_fault("f2", SENSOR_FAULT, onset, aug.dims.p_f))
    return ScenarioTimeline(name=combo_label(combo), generators=generators)


def _count(detected: Sequence[bool]) -> Tuple[int, int]:
    """(TP, FN) for runs whose anomaly is always present"""
    y_true = np.ones(len(detected), dtype=int)
    y_pred = np.asarray(detected, dtype=int)
    matrix = confusion_matrix(y_true, y_pred, labels=[0, 1])
    return int(matrix[1, 1]), int(matrix[1, 0])


def tpr_campaign(
    aug: AugmentedModel,
    bank: DetectorBank,
    thresholds: ThresholdSet,
    grid: Optional[Mapping[str, Sequence[Sequence[str]]]] = None,
    n_runs: int = 100,
    base_seed: int = 0,
    cfg: Optional[SimConfig] = None,
    debounce: int = 1,
    onset: float = CAMPAIGN_ONSET,
    progress: bool = False,
) -> List[TprTable]:
    """
    TPR tables over seeded noisy runs

    Parameters
    ----------
    grid : mapping, optional
        Target category -> list of combinations (default: the eight rows of
        every table)
    n_runs : int
        Runs per combination; run i uses seed base_seed + i
    cfg : SimConfig, optional
        Step and duration; noise and seed are set per run
    debounce : int
        Passed to detect; crossings count from the onset on

    Returns
    -------
    list of TprTable
        One per target, in grid order

    Raises
    ------
    ValueError
        If a row does not contain its table's target, or n_runs < 1
    """
    if n_runs < 1:
        raise ValueError(f"n_runs must be at least 1, got {n_runs}")
    grid = grid or {c: table_grid(c) for c in bank.categories}
    for target, rows in grid.items():
        if target not in bank:
            raise ValueError(f"Bank has no '{target}' channel")
        for combo in rows:
            if target not in combo:
                raise ValueError(f"Row '{combo_label(combo)}' of table {target} does not activate the target anomaly")

    cfg = replace(cfg or SimConfig(), noise_on=True)
    if onset >= cfg.t_end:
        raise ValueError(f"Onset {onset} s is not inside the run (t_end = {cfg.t_end} s)")

    # rows shared between tables reuse the same runs
    unique = sorted({frozenset(combo) for rows in grid.values() for combo in rows}, key=lambda s: (len(s), sorted(s)))
    verdicts: Dict[FrozenSet[str], List[FrozenSet[str]]] = {}
    for active in tqdm(unique, desc="TPR campaign", disable=not progress):
        combo = tuple(c for c in CATEGORIES if c in active)
        runs = []
        for i in range(n_runs):
            trace = simulate(aug, bank, campaign_timeline(aug, combo, onset), replace(cfg, seed=base_seed + i))
            runs.append(detect(trace, thresholds, debounce, t_from=onset).verdict)
        verdicts[active] = runs

    tables = []
    for target, rows in grid.items():
        table = TprTable(table=target, metadata={
            "n_runs": n_runs, "base_seed": base_seed, "debounce": debounce, "onset": onset, "config": cfg.to_dict(),
        })
        for combo in rows:
            tp, fn = _count([target in verdict for verdict in verdicts[frozenset(combo)]])
            table.rows.append(TprRow(combo=tuple(combo), tp=tp, fn=fn))
        logger.info(f"Table {target}: " + ", ".join(f"{combo_label(r.combo)}={r.tpr:.2f}" for r in table.rows))
        tables.append(table)
    return tables


def false_positive_counts(
    aug: AugmentedModel,
    bank: DetectorBank,
    thresholds: ThresholdSet,
    n_runs: int = 100,
    base_seed: int = 0,
    cfg: Optional[SimConfig] = None,
    debounce: int = 1,
    progress: bool = False,
) -> Dict[str, int]:
    """
    Alarms per residual on healthy runs with seeds disjoint from calibration

    Run i uses seed base_seed + FP_SEED_OFFSET + i.
    """
    cfg = replace(cfg or SimConfig(), noise_on=True)
    healthy = ScenarioTimeline(name="healthy")
    counts = {c: 0 for c in bank.categories}
    for i in tqdm(range(n_runs), desc="False positives", disable=not progress):
        trace = simulate(aug, bank, healthy, replace(cfg, seed=base_seed + FP_SEED_OFFSET + i))
        for category in detect(trace, thresholds, debounce).verdict:
            counts[category] += 1
    return counts
