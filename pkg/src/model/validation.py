"""
Solvability Validation

Checks the preconditions under which decoupling detectors exist for an
augmented model. Failures are reported, never raised.

Checks:
- rank(C F_1) = rank(F_1)               actuator-fault detector solvable
- rank(C F_2) = rank(F_2)               sensor-fault detector solvable
- rank(C [F_1 F_2]) = rank([F_1 F_2])   attack detectors decouple both faults
- F_1^T F_2 = 0                         faults isolable from each other
- a_a Hurwitz                           auxiliary dynamics stable
- B_a^s full column rank, D_a full column rank (informational)

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from ..numerics import DEFAULT_TOL, is_hurwitz, rank_tol
from .plant import AugmentedModel


@dataclass
class ValidationCheck:
    """One named check with its numeric evidence"""
    name: str
    passed: bool
    residual: float
    message: str = ""
    required: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "message": self.message,
            "required": self.required,
        }


@dataclass
class ValidationReport:
    """Result of validate(); ``passed`` considers required checks only"""
    checks: List[ValidationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.required)

    @property
    def failures(self) -> List[ValidationCheck]:
        return [check for check in self.checks if check.required and not check.passed]

    def __getitem__(self, name: str) -> ValidationCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "checks": [check.to_dict() for check in self.checks]}

    def __repr__(self):
        return f"ValidationReport(passed={self.passed}, failures={[c.name for c in self.failures]})"


def _rank_gap(c: np.ndarray, f: np.ndarray, tol: float) -> Tuple[bool, float, str]:
    if f.shape[1] == 0:
        return True, 0.0, "no columns"
    rank_cf = rank_tol(c @ f, tol)
    rank_f = rank_tol(f, tol)
    return rank_cf == rank_f, float(rank_f - rank_cf), f"rank(CF)={rank_cf}, rank(F)={rank_f}"


def validate(aug: AugmentedModel, tol: float = DEFAULT_TOL) -> ValidationReport:
    """
    Evaluate every solvability check on an augmented model

    Parameters
    ----------
    aug : AugmentedModel
        Model to check
    tol : float
        Relative rank tolerance

    Returns
    -------
    ValidationReport
        One entry per check; never raises on a failed check
    """
    c = aug.c

    def check_cf1():
        return _rank_gap(c, aug.f1, tol)

    def check_cf2():
        return _rank_gap(c, aug.f2, tol)

    def check_joint():
        return _rank_gap(c, aug.fault_matrix, tol)

    def check_isolable():
        cross = aug.f1.T @ aug.f2
        residual = float(np.abs(cross).max()) if cross.size else 0.0
        scale = max(1.0, float(np.abs(aug.fault_matrix).max()) ** 2) if aug.fault_matrix.size else 1.0
        return residual <= tol * scale, residual, "F1^T F2 = 0" if residual <= tol * scale else "F1^T F2 != 0"

    def check_aux_hurwitz():
        if aug.aux.size == 0:
            return True, 0.0, "no auxiliary state"
        top = float(np.max(np.linalg.eigvals(aug.aux.a_a).real))
        return is_hurwitz(aug.aux.a_a), top, f"max Re eig(a_a) = {top:.4g}"

    def check_b_a():
        b_a_s = aug.plant.b_a_s
        rank = rank_tol(b_a_s, tol) if b_a_s.size else 0
        return rank == b_a_s.shape[1], float(b_a_s.shape[1] - rank), f"rank(B_a^s)={rank} of {b_a_s.shape[1]}"

    def check_d_a():
        d_a = aug.d_a
        rank = rank_tol(d_a, tol) if d_a.size else 0
        return rank == d_a.shape[1], float(d_a.shape[1] - rank), f"rank(D_a)={rank} of {d_a.shape[1]}"

    checks: List[Tuple[str, Callable[[], Tuple[bool, float, str]], bool]] = [
        ("rank_CF1", check_cf1, True),
        ("rank_CF2", check_cf2, True),
        ("rank_CF_joint", check_joint, True),
        ("isolability_F1tF2", check_isolable, True),
        ("aux_hurwitz", check_aux_hurwitz, True),
        ("b_a_full_column_rank", check_b_a, False),
        ("d_a_full_column_rank", check_d_a, False),
    ]

    report = ValidationReport()
    for name, check_func, required in checks:
        passed, residual, message = check_func()
        report.checks.append(ValidationCheck(name, bool(passed), residual, message, required))
    return report
