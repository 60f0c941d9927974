"""
Unknown-Input-Observer Detectors

Plant-side detector of one anomaly category:

    z'    = F z + T B u* + K y_p + L (z_p - z_c - D_ac a_c)
    x_hat = z + H y_p
    res   = y_p - C x_hat

with T = I - H C, F = A - H C A - K_1 C, K_2 = F H and K = K_1 + K_2. H is
chosen so (I - H C) annihilates the fault signatures the residual must
ignore; K_1 places the observable part of F.

Categories:
- AA: actuator attack, decouples F_1 and F_2, L fed by the filter error
- SA: sensor attack, shares the AA detector matrices
- AF: actuator fault, decouples F_2, L = 0
- SF: sensor (pseudo actuator) fault, decouples F_1, L = 0

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..model import AugmentedModel
from ..numerics import (
    DEFAULT_TOL,
    DesignInfeasibleError,
    DimensionError,
    as_matrix,
    is_hurwitz,
    null_space_basis,
    place_observer_gain,
    rank_tol,
)
from .geometry import left_invertibility_gap

logger = logging.getLogger(__name__)

CATEGORIES = ("AA", "SA", "AF", "SF")
ATTACK_CATEGORIES = ("AA", "SA")
FAULT_CATEGORIES = ("AF", "SF")

# fault signatures each detector must be blind to
DECOUPLE_TARGETS = {
    "AA": ("f1", "f2"),
    "SA": ("f1", "f2"),
    "AF": ("f2",),
    "SF": ("f1",),
}

DEFAULT_MAX_RETRIES = 100
ENTRY_RANGE = 5


def check_category(category: str) -> str:
    if category not in CATEGORIES:
        raise ValueError(f"Unknown category '{category}'. Expected one of {CATEGORIES}")
    return category


def default_observer_poles(size: int) -> List[float]:
    """-2, -3, ... one per state"""
    return [-2.0 - k for k in range(size)]


@dataclass(frozen=True, eq=False)
class UIODetector:
    """
    Detector matrices for one category

    Attributes
    ----------
    category : str
        One of AA, SA, AF, SF
    h, t, k1, k2, k, f, l : np.ndarray
        H (N x p), T (N x N), K_1, K_2, K (N x p), F (N x N), L (N x n)
    """
    category: str
    h: np.ndarray
    t: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    k: np.ndarray
    f: np.ndarray
    l: np.ndarray

    def __post_init__(self):
        check_category(self.category)
        for name in ("h", "t", "k1", "k2", "k", "f", "l"):
            arr = as_matrix(getattr(self, name), name).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        size = self.f.shape[0]
        if self.t.shape != (size, size) or self.h.shape[0] != size or self.l.shape[0] != size:
            raise DimensionError(f"Detector matrices do not share the state size {size}", field="f")

    @property
    def size(self) -> int:
        return self.f.shape[0]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"category": self.category}
        for name in ("h", "k1", "l"):
            data[name] = getattr(self, name).tolist()
        return data

    def __repr__(self):
        return f"UIODetector({self.category}, size={self.size}, rank(L)={rank_tol(self.l) if self.l.size else 0})"


def assemble_uio(aug: AugmentedModel, category: str, h, k1, l) -> UIODetector:
    """
    Derive T, F, K_2 and K from the free matrices (H, K_1, L)

    F is computed before K_2 because K_2 = F H.
    """
    check_category(category)
    size, p, n = aug.size, aug.dims.p, aug.dims.n
    h = as_matrix(h, "h") if np.size(h) else np.zeros((size, p))
    k1 = as_matrix(k1, "k1") if np.size(k1) else np.zeros((size, p))
    l = as_matrix(l, "l") if np.size(l) else np.zeros((size, n))
    for name, mat, shape in (("h", h, (size, p)), ("k1", k1, (size, p)), ("l", l, (size, n))):
        if mat.shape != shape:
            raise DimensionError(f"{name} must be {shape[0]}x{shape[1]}, got {mat.shape}", field=name)

    t = np.eye(size) - h @ aug.c
    f = aug.a - h @ aug.c @ aug.a - k1 @ aug.c
    k2 = f @ h
    return UIODetector(category=category, h=h, t=t, k1=k1, k2=k2, k=k1 + k2, f=f, l=l)


def _resolve_targets(aug: AugmentedModel, targets: Iterable[Union[str, np.ndarray]]) -> np.ndarray:
    blocks = []
    for target in targets:
        if isinstance(target, str):
            if target not in ("f1", "f2"):
                raise ValueError(f"Unknown decoupling target '{target}'. Expected 'f1' or 'f2'")
            blocks.append(getattr(aug, target))
        else:
            mat = as_matrix(target, "target")
            if mat.shape[0] != aug.size:
                raise DimensionError(f"Target has {mat.shape[0]} rows, expected {aug.size}", field="targets")
            blocks.append(mat)
    blocks = [b for b in blocks if b.shape[1]]
    return np.hstack(blocks) if blocks else np.zeros((aug.size, 0))


def solve_decoupling_gain(
    aug: AugmentedModel,
    targets: Sequence[Union[str, np.ndarray]],
    y: Optional[np.ndarray] = None,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """
    Gain H with (I - H C) F = 0 for F = [targets]

    H = F (CF)^+ + Y (I - CF (CF)^+), Y free (zero by default). With no
    targets the minimal-norm solution is H = Y.

    Parameters
    ----------
    aug : AugmentedModel
        Augmented system providing C
    targets : sequence
        Fault signatures to decouple, given as matrices or the names 'f1'/'f2'
    y : np.ndarray, optional
        N x p free parameter
    tol : float
        Rank tolerance of the solvability test

    Returns
    -------
    np.ndarray
        N x p gain

    Raises
    ------
    DesignInfeasibleError
        If rank(C F) != rank(F)
    """
    fault = _resolve_targets(aug, targets)
    size, p = aug.size, aug.dims.p
    y = np.zeros((size, p)) if y is None else as_matrix(y, "y")
    if y.shape != (size, p):
        raise DimensionError(f"y must be {size}x{p}, got {y.shape}", field="y")

    if fault.shape[1] == 0:
        return y.copy()

    cf = aug.c @ fault
    rank_cf, rank_f = rank_tol(cf, tol), rank_tol(fault, tol)
    if rank_cf != rank_f:
        raise DesignInfeasibleError(
            f"Decoupling is not solvable: rank(CF)={rank_cf} but rank(F)={rank_f}",
            condition_id="rank(CF)=rank(F)",
        )

    cf_pinv = linalg.pinv(cf)
    return fault @ cf_pinv + y @ (np.eye(p) - cf @ cf_pinv)


def admissible_rows(d: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Basis U (k x r) of Ker(d^T); any M U^T satisfies (M U^T) d = 0

    For d = 0 every row is admissible and U is the identity.
    """
    d = as_matrix(d, "d")
    if not np.any(d):
        return np.eye(d.shape[0])
    return null_space_basis(d.T, tol).basis


def check_assumption3(d_ac, n: int, tol: float = DEFAULT_TOL):
    """rank(D_ac) < n, otherwise no nonzero L can satisfy L D_ac = 0"""
    d_ac = as_matrix(d_ac, "d_ac")
    if d_ac.shape[0] != n:
        raise DimensionError(f"d_ac must have n={n} rows, got {d_ac.shape[0]}", field="d_ac")
    rank = rank_tol(d_ac, tol) if np.any(d_ac) else 0
    if rank >= n:
        raise DesignInfeasibleError(
            f"C&C link rank condition violated: rank(D_ac) = {rank} is not < n = {n}; "
            "the attacker controls every filter channel",
            condition_id="A3",
        )


def design_uio(
    aug: AugmentedModel,
    decouple: Optional[Sequence[Union[str, np.ndarray]]] = None,
    d_ac: Optional[np.ndarray] = None,
    poles: Optional[Sequence[complex]] = None,
    category: str = "AA",
    seed: int = 0,
    max_retries: int = DEFAULT_MAX_RETRIES,
    l: Optional[np.ndarray] = None,
    tol: float = DEFAULT_TOL,
) -> UIODetector:
    """
    Design the UIO detector of one category

    Steps: H from the decoupling equations, K_1 by observer pole placement
    on ((I - H C) A, C), then for attack categories an L with L D_ac = 0
    whose triple (C, F, L) is left invertible. L is drawn from seeded integer
    entries in [-5, 5] on the rows admissible for D_ac and redrawn until the
    left-invertibility test passes.

    Parameters
    ----------
    aug : AugmentedModel
        Augmented system
    decouple : sequence, optional
        Decoupling targets; defaults to the category's standard set
    d_ac : np.ndarray, optional
        n x n_c link-attack signature, required for AA/SA
    poles : sequence of complex, optional
        N observer poles (default -2, -3, ...)
    category : str
        AA, SA, AF or SF
    seed : int
        Seed of the L search
    max_retries : int
        Number of L draws before giving up
    l : np.ndarray, optional
        Fixed L (checked, not searched)

    Returns
    -------
    UIODetector

    Raises
    ------
    DesignInfeasibleError
        Unsolvable decoupling, undetectable (C, (I-HC)A), the D_ac rank condition
        violated ("A3") or no left-invertible L found ("P1.C7")
    """
    check_category(category)
    targets = DECOUPLE_TARGETS[category] if decouple is None else decouple
    n, size = aug.dims.n, aug.size

    h = solve_decoupling_gain(aug, targets, tol=tol)
    a1 = aug.a - h @ aug.c @ aug.a
    poles = default_observer_poles(size) if poles is None else list(poles)
    k1 = place_observer_gain(a1, aug.c, poles, tol)

    if category in FAULT_CATEGORIES:
        detector = assemble_uio(aug, category, h, k1, np.zeros((size, n)))
        logger.info(f"{category} detector designed (L = 0)")
        return detector

    if d_ac is None:
        raise ValueError(f"{category} detector needs d_ac")
    d_ac = as_matrix(d_ac, "d_ac")
    check_assumption3(d_ac, n, tol)
    condition_id = "P1.C7" if category == "AA" else "P2.C7"

    if l is not None:
        detector = assemble_uio(aug, category, h, k1, l)
        if left_invertibility_gap(detector.f, detector.l, aug.c, tol):
            raise DesignInfeasibleError(f"(C, F, L) is not left invertible for {category}", condition_id)
        return detector

    rows = admissible_rows(d_ac, tol)
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_retries + 1):
        draw = rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=(size, rows.shape[1])).astype(float)
        candidate = draw @ rows.T
        detector = assemble_uio(aug, category, h, k1, candidate)
        if not left_invertibility_gap(detector.f, detector.l, aug.c, tol):
            logger.info(f"{category} detector designed after {attempt} L draw(s)")
            return detector

    raise DesignInfeasibleError(
        f"No left-invertible L with L D_ac = 0 found in {max_retries} draws for {category}",
        condition_id,
    )


def detector_is_stable(detector: UIODetector, margin: float = 0.0) -> bool:
    return is_hurwitz(detector.f, margin)
