"""
Plant-Side and C&C-Side Filters

Both sides run the same filter on the physical state space (dimension n):

    C&C side:    z_c' = F_p z_c + T_p B^s u  + K_p y*
    plant side:  z_p' = F_p z_p + T_p B^s u* + K_p y_p + L_p (z_p - z_c - D_ac a_c)

so the filter error e_p = z_p - z_c obeys

    e_p' = (F_p + L_p) e_p + T_p B_a^s a_u - K_p D_a a_y - L_p D_ac a_c

The actuator-attack filter blocks a_y (K_p D_a = 0) and keeps a_u visible
through L; the sensor-attack filter does the opposite (T_p B_a^s = 0).

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..model import AugmentedModel
from ..numerics import (
    DEFAULT_TOL,
    DesignInfeasibleError,
    DimensionError,
    as_matrix,
    invariant_zeros,
    is_hurwitz,
    product_rank,
    rank_tol,
)
from .uio import (
    ATTACK_CATEGORIES,
    DEFAULT_MAX_RETRIES,
    ENTRY_RANGE,
    UIODetector,
    admissible_rows,
    check_category,
)

logger = logging.getLogger(__name__)

DEFAULT_STABILITY_MARGIN = 0.5
# zeros with Re(z) > -MINIMUM_PHASE_MARGIN count as non-minimum-phase
MINIMUM_PHASE_MARGIN = 1e-8


def default_filter_poles(n: int) -> List[float]:
    return [-2.0 - k for k in range(n)]


@dataclass(frozen=True, eq=False)
class SideFilter:
    """
    Filter parameters shared by the plant side and the C&C side

    Attributes
    ----------
    category : str
        Anomaly category the filter serves
    f_p : np.ndarray
        n x n state matrix
    t_p : np.ndarray
        n x n input weighting, applied to B^s and B_a^s
    k_p : np.ndarray
        n x p output injection
    l_p : np.ndarray
        n x n feedback of the filter error
    """
    category: str
    f_p: np.ndarray
    t_p: np.ndarray
    k_p: np.ndarray
    l_p: np.ndarray

    def __post_init__(self):
        check_category(self.category)
        for name in ("f_p", "t_p", "k_p", "l_p"):
            arr = as_matrix(getattr(self, name), name).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

        n = self.f_p.shape[0]
        for name in ("f_p", "t_p", "l_p"):
            if getattr(self, name).shape != (n, n):
                raise DimensionError(f"{name} must be {n}x{n}, got {getattr(self, name).shape}", field=name)
        if self.k_p.shape[0] != n:
            raise DimensionError(f"k_p must have {n} rows, got {self.k_p.shape[0]}", field="k_p")

        if self.category in ATTACK_CATEGORIES and not is_hurwitz(self.closed):
            raise ValueError(f"{self.category} filter: F_p + L_p is not Hurwitz")

    @property
    def n(self) -> int:
        return self.f_p.shape[0]

    @property
    def closed(self) -> np.ndarray:
        """Filter-error matrix F_p + L_p"""
        return self.f_p + self.l_p

    def to_dict(self) -> Dict[str, Any]:
        return {
            "category": self.category,
            "f_p": self.f_p.tolist(),
            "t_p": self.t_p.tolist(),
            "k_p": self.k_p.tolist(),
            "l_p": self.l_p.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SideFilter":
        return cls(
            category=data["category"],
            f_p=np.array(data["f_p"], dtype=float),
            t_p=np.array(data["t_p"], dtype=float),
            k_p=np.array(data["k_p"], dtype=float),
            l_p=np.array(data["l_p"], dtype=float),
        )

    def __repr__(self):
        return f"SideFilter({self.category}, n={self.n})"


@dataclass
class FilterSpec:
    """
    Pole and search settings for the filter design

    Attributes
    ----------
    poles : sequence of float, optional
        Diagonal of F_p (default -2, -3, ..., -(n+1))
    stability_margin : float
        Required decay rate of F_p + L_p
    max_retries : int
        Draws of the random free parameters before giving up
    seed : int
        Seed of the draws
    tol : float
        Rank tolerance of the checks
    """
    poles: Optional[Sequence[float]] = None
    stability_margin: float = DEFAULT_STABILITY_MARGIN
    max_retries: int = DEFAULT_MAX_RETRIES
    seed: int = 0
    tol: float = DEFAULT_TOL


def filter_zero_check(
    closed: np.ndarray,
    input_map: np.ndarray,
    l: np.ndarray,
    tol: float = DEFAULT_TOL,
) -> Tuple[bool, np.ndarray, bool]:
    """
    Minimum-phase test of the filter-error system seen through L

    Returns
    -------
    tuple
        (passed, zeros, degenerate); a degenerate pencil never passes
    """
    zero_set = invariant_zeros(closed, input_map, l, None, tol)
    bad = zero_set.unstable(MINIMUM_PHASE_MARGIN)
    return (not zero_set.degenerate and bad.size == 0), zero_set.zeros, zero_set.degenerate


def _random_block(rng: np.random.Generator, rows: int, basis: np.ndarray) -> np.ndarray:
    """rows x k matrix M U^T with integer M in [-5, 5] and U the given basis"""
    draw = rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=(rows, basis.shape[1])).astype(float)
    return draw @ basis.T


def _check_inputs(aug: AugmentedModel, uio: UIODetector, d_ac) -> np.ndarray:
    d_ac = as_matrix(d_ac, "d_ac")
    if d_ac.shape[0] != aug.dims.n:
        raise DimensionError(f"d_ac must have n={aug.dims.n} rows, got {d_ac.shape[0]}", field="d_ac")
    if uio.size != aug.size or uio.l.shape[1] != aug.dims.n:
        raise DimensionError("Detector does not match the augmented model", field="uio")
    return d_ac


def _design_actuator_filter(aug, uio, d_ac, spec, rng) -> SideFilter:
    n, p = aug.dims.n, aug.dims.p
    b_a_s = aug.plant.b_a_s
    f_p = np.diag(spec.poles if spec.poles is not None else default_filter_poles(n))
    k_p = _random_block(rng, n, admissible_rows(aug.d_a, spec.tol)) if aug.d_a.size else np.zeros((n, p))
    l_p_rows = admissible_rows(d_ac, spec.tol)
    target_rank = rank_tol(b_a_s, spec.tol) if np.any(b_a_s) else 0

    failing = "P1.C10"
    for attempt in range(1, spec.max_retries + 1):
        l_p = _random_block(rng, n, l_p_rows)
        t_p = rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=(n, n)).astype(float)

        if not is_hurwitz(f_p + l_p, spec.stability_margin):
            failing = "P1.C10"
            continue
        if product_rank(t_p, b_a_s, tol=spec.tol) != target_rank:
            failing = "P1.C9"
            continue
        tpb = t_p @ b_a_s
        passed, _, _ = filter_zero_check(f_p + l_p, tpb, uio.l, spec.tol)
        if not passed:
            failing = "P1.C8"
            continue
        if product_rank(uio.l, tpb, tol=spec.tol) != product_rank(t_p, b_a_s, tol=spec.tol):
            failing = "P1.C9"
            continue

        logger.info(f"AA filter designed after {attempt} draw(s)")
        return SideFilter(category="AA", f_p=f_p, t_p=t_p, k_p=k_p, l_p=l_p)

    raise DesignInfeasibleError(f"AA filter search exhausted {spec.max_retries} draws; last failure {failing}", failing)


def _design_sensor_filter(aug, uio, d_ac, spec, rng) -> SideFilter:
    n, p = aug.dims.n, aug.dims.p
    b_a_s = aug.plant.b_a_s
    d_a = aug.d_a
    f_p = np.diag(spec.poles if spec.poles is not None else default_filter_poles(n))
    t_p_rows = admissible_rows(b_a_s, spec.tol)
    l_p_rows = admissible_rows(d_ac, spec.tol)
    target_rank = rank_tol(d_a, spec.tol) if np.any(d_a) else 0

    failing = "P2.C10"
    for attempt in range(1, spec.max_retries + 1):
        t_p = _random_block(rng, n, t_p_rows)
        l_p = _random_block(rng, n, l_p_rows)
        k_p = rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=(n, p)).astype(float)

        if not is_hurwitz(f_p + l_p, spec.stability_margin):
            failing = "P2.C10"
            continue
        if product_rank(k_p, d_a, tol=spec.tol) != target_rank:
            failing = "P2.S3"
            continue
        kpd = k_p @ d_a
        passed, _, _ = filter_zero_check(f_p + l_p, -kpd, uio.l, spec.tol)
        if not passed:
            failing = "P2.S2"
            continue
        if product_rank(uio.l, kpd, tol=spec.tol) != product_rank(k_p, d_a, tol=spec.tol):
            failing = "P2.S3"
            continue

        logger.info(f"SA filter designed after {attempt} draw(s)")
        return SideFilter(category="SA", f_p=f_p, t_p=t_p, k_p=k_p, l_p=l_p)

    raise DesignInfeasibleError(f"SA filter search exhausted {spec.max_retries} draws; last failure {failing}", failing)


def design_plant_filter(
    aug: AugmentedModel,
    uio: UIODetector,
    d_ac,
    category: str = "AA",
    spec: Optional[FilterSpec] = None,
) -> SideFilter:
    """
    Design the filter pair of an attack category

    AA: K_p from the left null space of D_a, L_p from the left null space of
    D_ac, random T_p. The draw is accepted when F_p + L_p is stable with the
    requested margin, the error system (F_p + L_p, T_p B_a^s, L) is minimum
    phase and L keeps the rank of T_p B_a^s.

    SA: T_p from the left null space of B_a^s, random K_p, and the same tests
    on (F_p + L_p, K_p D_a, L).

    Parameters
    ----------
    aug : AugmentedModel
        Augmented system
    uio : UIODetector
        Detector of the same category (provides L)
    d_ac : array_like
        n x n_c link-attack signature
    category : str
        'AA' or 'SA'
    spec : FilterSpec, optional
        Poles and search settings

    Returns
    -------
    SideFilter

    Raises
    ------
    ValueError
        If the category is not an attack category
    DesignInfeasibleError
        If no draw satisfies the conditions; ``condition_id`` names the last
        failing one
    """
    check_category(category)
    if category not in ATTACK_CATEGORIES:
        raise ValueError(f"Filters are designed for {ATTACK_CATEGORIES}, got '{category}'")
    spec = spec or FilterSpec()
    d_ac = _check_inputs(aug, uio, d_ac)
    if spec.poles is not None and len(spec.poles) != aug.dims.n:
        raise ValueError(f"Expected {aug.dims.n} filter poles, got {len(spec.poles)}")

    rng = np.random.default_rng(spec.seed)
    if category == "AA":
        return _design_actuator_filter(aug, uio, d_ac, spec, rng)
    return _design_sensor_filter(aug, uio, d_ac, spec, rng)
