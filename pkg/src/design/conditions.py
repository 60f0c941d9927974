"""
Detector Bank Condition Checks

Evaluates every design condition of the bank numerically and reports the
outcome as data. Nothing here raises on a failed condition.

Condition identifiers:
- P1.C1 .. P1.C10, P1.GAINS : actuator-attack channel (AA)
- P2.C1 .. P2.C5, P2.C7, P2.C10, P2.S1 .. P2.S3 : sensor-attack channel (SA)
- P3.L0, P3.C1 .. P3.C3, P3.SENS : actuator-fault channel (AF)
- P4.L0, P4.C1 .. P4.C3, P4.SENS : sensor-fault channel (SF)
- A3 : rank(D_ac) < n
- T1 : F_1^T F_2 = 0 (fault isolability)

Matrix identities pass when their max-abs residual is at most
tol * max(1, scale), scale being the product of the operand norms.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..model import AugmentedModel
from ..numerics import DEFAULT_TOL, is_hurwitz, product_rank, rank_tol
from .filters import filter_zero_check
from .geometry import left_invertibility_gap

if TYPE_CHECKING:
    from .bank import DetectorBank

logger = logging.getLogger(__name__)

PROPOSITION_PREFIX = {"AA": "P1", "SA": "P2", "AF": "P3", "SF": "P4"}


@dataclass
class ConditionCheck:
    """Outcome of one condition"""
    condition_id: str
    category: str
    description: str
    residual: float
    passed: bool
    required: bool = True
    zeros: Optional[List[complex]] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "id": self.condition_id,
            "category": self.category,
            "description": self.description,
            "residual": float(self.residual),
            "passed": bool(self.passed),
            "required": bool(self.required),
        }
        if self.zeros is not None:
            data["zeros"] = [[float(np.real(z)), float(np.imag(z))] for z in self.zeros]
        return data


@dataclass
class ConditionReport:
    """
    Condition checks of a whole bank

    ``passed`` only looks at required checks; sensitivity checks are
    informational.
    """
    checks: List[ConditionCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    @property
    def failures(self) -> List[ConditionCheck]:
        return [c for c in self.checks if c.required and not c.passed]

    @property
    def ids(self) -> List[str]:
        return [c.condition_id for c in self.checks]

    def __getitem__(self, condition_id: str) -> ConditionCheck:
        for check in self.checks:
            if check.condition_id == condition_id:
                return check
        raise KeyError(condition_id)

    def __contains__(self, condition_id: str) -> bool:
        return condition_id in self.ids

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "failures": [c.condition_id for c in self.failures],
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_frame(self) -> pd.DataFrame:
        rows = [{k: v for k, v in c.to_dict().items() if k != "zeros"} for c in self.checks]
        return pd.DataFrame(rows, columns=["id", "category", "description", "residual", "passed", "required"])

    def __repr__(self):
        return f"ConditionReport({len(self.checks)} checks, failures={[c.condition_id for c in self.failures]})"


def _norm(m) -> float:
    m = np.asarray(m, dtype=float)
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def _max_abs(m) -> float:
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m))) if m.size else 0.0


class _Collector:
    """Accumulates checks for one category"""

    def __init__(self, category: str, tol: float):
        self.category = category
        self.prefix = PROPOSITION_PREFIX.get(category, "")
        self.tol = tol
        self.checks: List[ConditionCheck] = []

    def _id(self, suffix: str) -> str:
        return f"{self.prefix}.{suffix}" if self.prefix else suffix

    def identity(self, suffix: str, description: str, residual_matrix, scale: float, required: bool = True):
        residual = _max_abs(residual_matrix)
        passed = residual <= self.tol * max(1.0, scale)
        self.checks.append(ConditionCheck(self._id(suffix), self.category, description, residual, passed, required))

    def flag(self, suffix: str, description: str, passed: bool, residual: float = 0.0,
             zeros=None, required: bool = True):
        zeros = None if zeros is None else [complex(z) for z in zeros]
        self.checks.append(
            ConditionCheck(self._id(suffix), self.category, description, float(residual), bool(passed), required, zeros)
        )


def augmented_error_matrix(uio, side_filter) -> np.ndarray:
    """[[F, -L], [0, F_p + L_p]]"""
    n = side_filter.n
    top = np.hstack([uio.f, -uio.l])
    bottom = np.hstack([np.zeros((n, uio.size)), side_filter.closed])
    return np.vstack([top, bottom])


def _max_real_part(m: np.ndarray) -> float:
    return float(np.max(np.linalg.eigvals(m).real)) if m.size else -np.inf


def _common_checks(col: _Collector, aug: AugmentedModel, uio, decouple):
    eye = np.eye(aug.size)
    hc = uio.h @ aug.c
    col.identity("C1", "T = I - HC", uio.t - (eye - hc), _norm(hc))
    for suffix, name in decouple:
        target = getattr(aug, name)
        col.identity(suffix, f"(I - HC){name.upper()} = 0", (eye - hc) @ target, max(1.0, _norm(hc)) * _norm(target))


def _hurwitz_check(col: _Collector, suffix: str, uio, side_filter):
    f_check = augmented_error_matrix(uio, side_filter)
    col.flag(suffix, "augmented error matrix is Hurwitz", is_hurwitz(f_check), _max_real_part(f_check))


def _left_invertibility_check(col: _Collector, suffix: str, aug: AugmentedModel, uio, tol: float):
    gap = left_invertibility_gap(uio.f, uio.l, aug.c, tol)
    col.flag(suffix, "(C, F, L) is left invertible", gap == 0, gap)


def _link_checks(col: _Collector, uio, side_filter, d_ac):
    col.identity("C4", "L D_ac = 0", uio.l @ d_ac, _norm(uio.l) * _norm(d_ac))
    col.identity("C5", "L_p D_ac = 0", side_filter.l_p @ d_ac, _norm(side_filter.l_p) * _norm(d_ac))


def _gain_checks(col: _Collector, uio):
    residual = np.abs(uio.k2 - uio.f @ uio.h).max(initial=0.0) + np.abs(uio.k - uio.k1 - uio.k2).max(initial=0.0)
    col.identity("GAINS", "K_2 = F H and K = K_1 + K_2", np.array([[residual]]), _norm(uio.f) * _norm(uio.h))


def _actuator_attack_checks(aug: AugmentedModel, channel, d_ac, tol: float) -> List[ConditionCheck]:
    uio, side_filter = channel.uio, channel.filter
    col = _Collector("AA", tol)
    _common_checks(col, aug, uio, [("C2", "f1"), ("C3", "f2")])
    _link_checks(col, uio, side_filter, d_ac)
    col.identity("C6", "K_p D_a = 0", side_filter.k_p @ aug.d_a, _norm(side_filter.k_p) * _norm(aug.d_a))
    _left_invertibility_check(col, "C7", aug, uio, tol)

    b_a_s = aug.plant.b_a_s
    tpb = side_filter.t_p @ b_a_s
    passed, zeros, degenerate = filter_zero_check(side_filter.closed, tpb, uio.l, tol)
    worst = float(np.max(zeros.real)) if zeros.size else 0.0
    col.flag("C8", "(F_p + L_p, T_p B_a, L) has no non-minimum-phase zeros" + (" (degenerate pencil)" if degenerate else ""),
             passed, worst, zeros=zeros)

    rank_ltb = product_rank(uio.l, tpb, tol=tol)
    rank_tb = product_rank(side_filter.t_p, b_a_s, tol=tol)
    col.flag("C9", f"rank(L T_p B_a) = rank(T_p B_a) ({rank_ltb} vs {rank_tb})", rank_ltb == rank_tb,
             rank_tb - rank_ltb)
    _hurwitz_check(col, "C10", uio, side_filter)
    _gain_checks(col, uio)
    return col.checks


def _sensor_attack_checks(aug: AugmentedModel, channel, d_ac, tol: float) -> List[ConditionCheck]:
    uio, side_filter = channel.uio, channel.filter
    col = _Collector("SA", tol)
    _common_checks(col, aug, uio, [("C2", "f1"), ("C3", "f2")])
    _link_checks(col, uio, side_filter, d_ac)
    _left_invertibility_check(col, "C7", aug, uio, tol)
    _hurwitz_check(col, "C10", uio, side_filter)

    b_a_s = aug.plant.b_a_s
    col.identity("S1", "T_p B_a = 0", side_filter.t_p @ b_a_s, _norm(side_filter.t_p) * _norm(b_a_s))

    kpd = side_filter.k_p @ aug.d_a
    passed, zeros, degenerate = filter_zero_check(side_filter.closed, -kpd, uio.l, tol)
    worst = float(np.max(zeros.real)) if zeros.size else 0.0
    col.flag("S2", "(F_p + L_p, K_p D_a, L) has no non-minimum-phase zeros" + (" (degenerate pencil)" if degenerate else ""),
             passed, worst, zeros=zeros)

    rank_lkd = product_rank(uio.l, kpd, tol=tol)
    rank_kd = product_rank(side_filter.k_p, aug.d_a, tol=tol)
    col.flag("S3", f"rank(L K_p D_a) = rank(K_p D_a) ({rank_lkd} vs {rank_kd})", rank_lkd == rank_kd,
             rank_kd - rank_lkd)
    return col.checks


def _fault_sensitivity(aug: AugmentedModel, uio, signature: np.ndarray, tol: float) -> float:
    """Largest Markov parameter C F^k (I - HC) F_d over k < N, zero when res ignores the fault"""
    direction = uio.t @ signature
    largest = 0.0
    for _ in range(aug.size):
        if product_rank(aug.c, direction, tol=tol):
            largest = max(largest, _norm(aug.c @ direction))
        direction = uio.f @ direction
    return largest


def _fault_checks(aug: AugmentedModel, category: str, channel, tol: float) -> List[ConditionCheck]:
    uio, side_filter = channel.uio, channel.filter
    col = _Collector(category, tol)
    decoupled, sensed = ("f2", "f1") if category == "AF" else ("f1", "f2")

    col.identity("L0", "L = 0", uio.l, 0.0)
    _common_checks(col, aug, uio, [("C2", decoupled)])
    _hurwitz_check(col, "C3", uio, side_filter)
    sensitivity = _fault_sensitivity(aug, uio, getattr(aug, sensed), tol)
    col.flag("SENS", f"residual responds to {sensed}", sensitivity > 0.0, sensitivity, required=False)
    return col.checks


def verify_conditions(bank: "DetectorBank", aug: AugmentedModel, tol: float = DEFAULT_TOL) -> ConditionReport:
    """
    Evaluate every condition of the bank

    Parameters
    ----------
    bank : DetectorBank
        Designed (or frozen) bank; categories it does not carry are skipped
    aug : AugmentedModel
        Augmented system the bank was designed for
    tol : float
        Relative tolerance of identities and rank decisions

    Returns
    -------
    ConditionReport
        Deterministic for a given bank; Rosenbrock checks carry the zeros found
    """
    report = ConditionReport()
    d_ac = bank.d_ac
    n = aug.dims.n

    rank_dac = rank_tol(d_ac, tol) if np.any(d_ac) else 0
    glob = _Collector("", tol)
    glob.flag("A3", f"rank(D_ac) < n ({rank_dac} vs {n})", rank_dac < n, rank_dac)
    glob.identity("T1", "F_1^T F_2 = 0", aug.f1.T @ aug.f2, _norm(aug.f1) * _norm(aug.f2))
    report.checks.extend(glob.checks)

    if "AA" in bank:
        report.checks.extend(_actuator_attack_checks(aug, bank["AA"], d_ac, tol))
    if "SA" in bank:
        report.checks.extend(_sensor_attack_checks(aug, bank["SA"], d_ac, tol))
    for category in ("AF", "SF"):
        if category in bank:
            report.checks.extend(_fault_checks(aug, category, bank[category], tol))

    if report.passed:
        logger.info(f"All {len(report.checks)} conditions pass")
    else:
        logger.warning(f"Failing conditions: {[c.condition_id for c in report.failures]}")
    return report
