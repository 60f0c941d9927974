"""
Observer Gain Placement

Places the observable eigenvalues of (a - K c) and leaves the unobservable
ones where they are, after checking they are stable.

The state space is split with an orthonormal basis [Q1 Q2], Q2 spanning the
unobservable subspace (largest a-invariant subspace inside Ker c). In these
coordinates a - K c is block lower-triangular once K = Q1·K1, so the
observable block is assigned with scipy.signal.place_poles on the dual pair
and the unobservable block keeps its spectrum.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from typing import Sequence

import numpy as np
from scipy import linalg
from scipy.signal import place_poles

from .errors import DesignInfeasibleError, DimensionError, NonConvergenceError
from .linalg import (
    DEFAULT_TOL,
    SubspaceBasis,
    as_matrix,
    null_space_basis,
    orthogonal_complement,
    preimage,
    subspace_intersect,
)

logger = logging.getLogger(__name__)


def unobservable_subspace(a, c, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """
    Largest a-invariant subspace contained in Ker(c)

    Recursion V_0 = Ker c, V_{k+1} = V_k ∩ a^{-1} V_k until the dimension stops
    shrinking.

    Raises
    ------
    NonConvergenceError
        If the recursion has not settled after n + 1 steps
    """
    a = as_matrix(a, "a")
    c = as_matrix(c, "c")
    n = a.shape[0]
    if c.shape[1] != n:
        raise DimensionError(f"c has {c.shape[1]} columns, expected {n}", field="c")

    current = null_space_basis(c, tol) if c.shape[0] else SubspaceBasis.full(n)
    for _ in range(n + 1):
        if current.is_zero:
            return current
        following = subspace_intersect(current, preimage(a, current, tol), tol)
        if following.dim == current.dim:
            return current
        current = following

    raise NonConvergenceError(f"Unobservable-subspace recursion did not settle within {n + 1} steps")


def _select_poles(poles: np.ndarray, fixed: np.ndarray, count: int, match_tol: float) -> np.ndarray:
    remaining = list(poles)
    # requested poles equal to an unobservable eigenvalue are already in place
    for mode in fixed:
        if len(remaining) <= count:
            break
        distances = np.abs(np.asarray(remaining) - mode)
        idx = int(np.argmin(distances))
        if distances[idx] <= match_tol * max(1.0, abs(mode)):
            remaining.pop(idx)
    chosen = np.asarray(remaining[:count], dtype=complex)
    # a conjugate pair must not be split between the assigned and dropped parts
    if np.sort_complex(chosen).tolist() != np.sort_complex(np.conj(chosen)).tolist():
        raise ValueError(f"Requested poles left for the {count} observable mode(s) are not closed under conjugation: {chosen}")
    return chosen


def place_observer_gain(a, c, poles: Sequence[complex], tol: float = DEFAULT_TOL, check_tol: float = 1e-6) -> np.ndarray:
    """
    Observer gain K with eig(a - K c) at the requested poles

    Parameters
    ----------
    a : array_like
        n x n state matrix
    c : array_like
        p x n output matrix
    poles : sequence of complex
        n requested poles, closed under conjugation. Poles matching an
        unobservable eigenvalue are set aside; the first n_o of the rest go
        to the n_o observable modes.
    tol : float
        Rank tolerance for the observability split
    check_tol : float
        Tolerance of the eigenvalue postcondition

    Returns
    -------
    np.ndarray
        n x p gain

    Raises
    ------
    DesignInfeasibleError
        If an unobservable mode is not stable, or placement misses a pole
    ValueError
        If the pole list has the wrong length or is not conjugate closed

    Examples
    --------
    >>> place_observer_gain([[0.0]], [[1.0]], [-2.0])
    array([[2.]])
    """
    a = as_matrix(a, "a")
    c = as_matrix(c, "c")
    n = a.shape[0]
    p = c.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"a must be square, got {a.shape}", field="a")
    if c.shape[1] != n:
        raise DimensionError(f"c has {c.shape[1]} columns, expected {n}", field="c")

    poles = np.atleast_1d(np.asarray(poles, dtype=complex))
    if poles.size != n:
        raise ValueError(f"Expected {n} poles, got {poles.size}")
    if not np.allclose(np.sort_complex(poles), np.sort_complex(np.conj(poles))):
        raise ValueError(f"Poles are not closed under conjugation: {poles}")

    unobservable = unobservable_subspace(a, c, tol)
    q2 = unobservable.basis
    q1 = orthogonal_complement(unobservable, tol).basis
    n_obs = q1.shape[1]

    fixed = np.zeros(0, dtype=complex)
    if unobservable.dim:
        fixed = np.linalg.eigvals(q2.T @ a @ q2)
        bad = fixed[fixed.real >= 0]
        if bad.size:
            raise DesignInfeasibleError(
                f"Unobservable mode(s) {np.round(bad, 6).tolist()} are not stable; (c, a) is not detectable"
            )
        logger.debug(f"Keeping {unobservable.dim} unobservable mode(s): {np.round(fixed, 6).tolist()}")

    if n_obs == 0:
        return np.zeros((n, p))

    requested = _select_poles(poles, fixed, n_obs, check_tol)
    a11 = q1.T @ a @ q1
    c1 = c @ q1

    # compress dependent outputs so the dual input matrix has full column rank
    u, s, _ = linalg.svd(c1, full_matrices=False)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    u_r = u[:, :rank]
    c_r = u_r.T @ c1

    try:
        result = place_poles(a11.T, c_r.T, requested)
    except ValueError as e:
        raise DesignInfeasibleError(f"Pole placement failed: {e}") from e

    k1 = result.gain_matrix.T @ u_r.T
    gain = q1 @ k1

    achieved = np.linalg.eigvals(a - gain @ c)
    for pole in requested:
        if np.min(np.abs(achieved - pole)) > check_tol * max(1.0, abs(pole)):
            raise DesignInfeasibleError(
                f"Requested pole {pole} not achieved; closest eigenvalue {achieved[np.argmin(np.abs(achieved - pole))]}"
            )

    return gain
