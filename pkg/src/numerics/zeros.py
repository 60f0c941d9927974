"""
Invariant Zeros of State-Space Systems

Computes the invariant zeros of (A, B, C, D) as the finite generalized
eigenvalues of the Rosenbrock pencil

    P(s) = [[sI - A, -B],
            [  C   ,  D]]

at which P(s) loses rank relative to its normal rank.

Square systems go straight to the QZ step on ([A B; C D], diag(I, 0)).
Non-square systems are squared down first by a seeded random compression of
the outputs (tall) or inputs (wide); the squared pencil's eigenvalues are only
candidates and each one is confirmed by a rank-drop test on the original
pencil.

Reference:
    Emami-Naeini & Van Dooren (1982), "Computation of zeros of linear
    multivariable systems"; python-control StateSpace.zeros QZ fallback

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Tuple

import numpy as np
from scipy import linalg

from .errors import DimensionError
from .linalg import DEFAULT_TOL, as_matrix, rank_tol

logger = logging.getLogger(__name__)

# fixed seeds keep every zero computation a pure function of its inputs
_NORMAL_RANK_SEED = 1729
_SQUARE_DOWN_SEED = 4104

DEFAULT_DROP_TOL = 1e-7
NORMAL_RANK_POINTS = 5


@dataclass
class ZeroSet:
    """
    Invariant zeros of a Rosenbrock pencil

    Attributes
    ----------
    zeros : np.ndarray
        Complex zeros, sorted by (real, imag)
    normal_rank : int
        Rank of P(s) at a generic s
    pencil_shape : tuple
        (n + p, n + m)
    degenerate : bool
        True when P(s) is rank deficient for every s
    """
    zeros: np.ndarray
    normal_rank: int
    pencil_shape: Tuple[int, int]
    degenerate: bool = False
    notes: list = field(default_factory=list)

    def unstable(self, margin: float = 1e-8) -> np.ndarray:
        """Zeros with Re(z) > -margin (non-minimum-phase or marginal)"""
        return self.zeros[self.zeros.real > -margin]

    def real_zeros(self, imag_tol: float = 1e-9) -> np.ndarray:
        return self.zeros[np.abs(self.zeros.imag) <= imag_tol].real

    def to_dict(self) -> dict:
        return {
            "zeros": [[float(z.real), float(z.imag)] for z in self.zeros],
            "normal_rank": self.normal_rank,
            "pencil_shape": list(self.pencil_shape),
            "degenerate": self.degenerate,
        }

    def __repr__(self):
        zs = ", ".join(f"{z.real:.4g}{z.imag:+.4g}j" for z in self.zeros)
        return f"ZeroSet([{zs}], normal_rank={self.normal_rank}, degenerate={self.degenerate})"


def _state_space(a, b, c, d=None):
    a = as_matrix(a, "a")
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"a must be square, got {a.shape}", field="a")

    b = np.zeros((n, 0)) if b is None else as_matrix(b, "b")
    c = np.zeros((0, n)) if c is None else as_matrix(c, "c")
    if b.shape[0] != n:
        raise DimensionError(f"b has {b.shape[0]} rows, expected {n}", field="b")
    if c.shape[1] != n:
        raise DimensionError(f"c has {c.shape[1]} columns, expected {n}", field="c")

    p, m = c.shape[0], b.shape[1]
    if d is None or np.size(d) == 0:
        d = np.zeros((p, m))
    else:
        d = as_matrix(d, "d")
    if d.shape != (p, m):
        raise DimensionError(f"d must be {p}x{m}, got {d.shape}", field="d")
    return a, b, c, d


def rosenbrock(a, b, c, d, s: complex) -> np.ndarray:
    """Rosenbrock system matrix P(s) = [[sI - A, -B], [C, D]]"""
    n = a.shape[0]
    top = np.hstack([s * np.eye(n) - a, -b])
    bottom = np.hstack([c, d])
    return np.vstack([top, bottom])


def pencil_normal_rank(
    a, b, c, d=None,
    tol: float = DEFAULT_TOL,
    avoid: Iterable[complex] = (),
    n_points: int = NORMAL_RANK_POINTS,
) -> int:
    """
    Normal rank of the Rosenbrock pencil

    Maximum rank of P(s) over n_points seeded random real s in [-10, 10],
    redrawing any point closer than 1e-3 to a value in ``avoid``.
    """
    a, b, c, d = _state_space(a, b, c, d)
    avoid = np.asarray(list(avoid), dtype=complex)
    rng = np.random.default_rng(_NORMAL_RANK_SEED)

    best = 0
    drawn = 0
    while drawn < n_points:
        s = rng.uniform(-10.0, 10.0)
        if avoid.size and np.min(np.abs(avoid - s)) < 1e-3:
            continue
        drawn += 1
        best = max(best, rank_tol(rosenbrock(a, b, c, d, s), tol))
    return best


def _square_down(a, b, c, d):
    """Compress outputs (tall) or inputs (wide) to a square system with a seeded random map"""
    p, m = c.shape[0], b.shape[1]
    if p == m:
        return a, b, c, d

    rng = np.random.default_rng(_SQUARE_DOWN_SEED)
    if p > m:
        w = rng.standard_normal((m, p))
        return a, b, w @ c, w @ d
    v = rng.standard_normal((m, p))
    return a, b @ v, c, d @ v


def _candidate_zeros(a, b, c, d) -> np.ndarray:
    a, b, c, d = _square_down(a, b, c, d)
    n, k = a.shape[0], b.shape[1]

    if k == 0:
        # no inputs left: candidates are the modes of a
        big = a
        eigs = np.linalg.eigvals(a)
    else:
        big = np.vstack([np.hstack([a, b]), np.hstack([c, d])])
        mass = np.zeros_like(big)
        mass[:n, :n] = np.eye(n)
        with np.errstate(divide="ignore", invalid="ignore"):
            eigs = linalg.eigvals(big, mass)

    finite = eigs[np.isfinite(eigs)]
    bound = 1e6 * (1.0 + np.linalg.norm(big, 1))
    return finite[np.abs(finite) < bound]


def _clean_conjugates(zeros: np.ndarray) -> np.ndarray:
    zeros = np.asarray(zeros, dtype=complex)
    tiny = np.abs(zeros.imag) <= 1e-10 * (1.0 + np.abs(zeros))
    zeros = np.where(tiny, zeros.real + 0j, zeros)
    return np.array(sorted(zeros, key=lambda z: (round(z.real, 12), round(z.imag, 12))), dtype=complex)


def invariant_zeros(
    a, b, c, d=None,
    tol: float = DEFAULT_TOL,
    drop_tol: float = DEFAULT_DROP_TOL,
) -> ZeroSet:
    """
    Invariant zeros of (a, b, c, d)

    Parameters
    ----------
    a, b, c, d : array_like
        State-space matrices (d defaults to zero)
    tol : float
        Relative tolerance for the normal-rank estimate
    drop_tol : float
        Relative tolerance for the rank-drop test at a candidate zero.
        Looser than ``tol`` because candidates carry eigenvalue rounding.

    Returns
    -------
    ZeroSet
        Finite zeros; ``degenerate`` set when the pencil is rank deficient
        for all s

    Examples
    --------
    >>> invariant_zeros([[-1.0]], [[1.0]], [[1.0]]).zeros.size
    0
    """
    a, b, c, d = _state_space(a, b, c, d)
    n, p, m = a.shape[0], c.shape[0], b.shape[1]
    shape = (n + p, n + m)

    if n == 0:
        rank = rank_tol(d, tol) if d.size else 0
        return ZeroSet(np.zeros(0, dtype=complex), rank, shape, rank < min(shape))

    candidates = _candidate_zeros(a, b, c, d)
    normal_rank = pencil_normal_rank(a, b, c, d, tol, avoid=candidates)
    degenerate = normal_rank < min(shape)

    accepted = []
    for z in candidates:
        if rank_tol(rosenbrock(a, b, c, d, z), drop_tol) < normal_rank:
            accepted.append(z)

    zero_set = ZeroSet(_clean_conjugates(accepted), normal_rank, shape, degenerate)
    if degenerate:
        zero_set.notes.append("pencil rank deficient for every s; zeros are not isolated")
        logger.debug(f"Degenerate pencil {shape}, normal rank {normal_rank}")
    return zero_set


def zero_direction(a, b, c, d=None, z: float = 0.0, tol: float = DEFAULT_DROP_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    State and input directions (x0, u0) of a real zero z

    Solves [[zI - A, -B], [C, D]] [x0; u0] = 0 and scales the pair so the
    largest-magnitude entry of x0 is +1 (u0 instead when x0 vanishes).

    Raises
    ------
    ValueError
        If z is not a zero (the pencil keeps full column rank)
    """
    a, b, c, d = _state_space(a, b, c, d)
    n = a.shape[0]
    pencil = rosenbrock(a, b, c, d, float(np.real(z)))

    _, s, vh = linalg.svd(pencil, full_matrices=True)
    # a wide pencil always has a right kernel
    smallest = s[-1] if pencil.shape[0] >= pencil.shape[1] else 0.0
    if smallest > tol * s[0]:
        raise ValueError(f"s = {z} is not an invariant zero (pencil has full column rank)")

    v = vh[-1]
    x0, u0 = v[:n], v[n:]
    pivot_vec = x0 if np.max(np.abs(x0)) > 1e-12 else u0
    pivot = pivot_vec[np.argmax(np.abs(pivot_vec))]
    return x0 / pivot, u0 / pivot
