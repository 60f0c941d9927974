"""
Geometric Subspace Recursions

Output-nulling and conditioned-invariant recursions for a triple (l, f, b)
with state equation x' = f x + b u and output y = l x:

    V_0 = Ker l        V_k = V_0 ∩ f^{-1}(V_{k-1} + Im b)
    W_0 = Im b         W_k = W_0 + f(W_{k-1} ∩ Ker l)

V_k shrinks to the weakly unobservable subspace V*, W_k grows to the
smallest conditioned invariant subspace W* containing Im b. Their
intersection is R*, the largest controllability subspace inside Ker l.
Both recursions settle within dim(f) steps in exact arithmetic.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging

import numpy as np

from ..numerics import (
    DEFAULT_TOL,
    DimensionError,
    NonConvergenceError,
    SubspaceBasis,
    as_matrix,
    column_space,
    null_space_basis,
    pencil_normal_rank,
    preimage,
    rank_tol,
    subspace_image,
    subspace_intersect,
    subspace_sum,
)

logger = logging.getLogger(__name__)


def _check_triple(f, b, l):
    f = as_matrix(f, "f")
    n = f.shape[0]
    if f.shape != (n, n):
        raise DimensionError(f"f must be square, got {f.shape}", field="f")
    b = np.zeros((n, 0)) if np.size(b) == 0 else as_matrix(b, "b")
    l = np.zeros((0, n)) if np.size(l) == 0 else as_matrix(l, "l")
    if b.shape[0] != n:
        raise DimensionError(f"b has {b.shape[0]} rows, expected {n}", field="b")
    if l.shape[1] != n:
        raise DimensionError(f"l has {l.shape[1]} columns, expected {n}", field="l")
    return f, b, l


def weakly_unobservable_subspace(f, b, l, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """
    V*: states from which some input keeps l x identically zero

    Raises
    ------
    NonConvergenceError
        If the recursion is still shrinking after dim(f) steps
    """
    f, b, l = _check_triple(f, b, l)
    n = f.shape[0]
    image_b = column_space(b, tol)
    v0 = null_space_basis(l, tol) if l.shape[0] else SubspaceBasis.full(n)

    current = v0
    for step in range(n + 1):
        following = subspace_intersect(v0, preimage(f, subspace_sum(current, image_b, tol), tol), tol)
        if following.dim == current.dim:
            logger.debug(f"V* settled after {step} step(s), dim {current.dim}")
            return current
        current = following
    raise NonConvergenceError(f"V recursion did not settle within {n} steps")


def conditioned_invariant_subspace(f, b, l, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """
    W*: smallest (l, f)-conditioned invariant subspace containing Im b

    Raises
    ------
    NonConvergenceError
        If the recursion is still growing after dim(f) steps
    """
    f, b, l = _check_triple(f, b, l)
    n = f.shape[0]
    w0 = column_space(b, tol)
    ker_l = null_space_basis(l, tol) if l.shape[0] else SubspaceBasis.full(n)

    current = w0
    for step in range(n + 1):
        following = subspace_sum(w0, subspace_image(f, subspace_intersect(current, ker_l, tol), tol), tol)
        if following.dim == current.dim:
            logger.debug(f"W* settled after {step} step(s), dim {current.dim}")
            return current
        current = following
    raise NonConvergenceError(f"W recursion did not settle within {n} steps")


def controllability_subspace(f, b, l, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """
    Largest controllability subspace R* = V* ∩ W* of the triple (l, f, b)

    Parameters
    ----------
    f : array_like
        n x n state matrix
    b : array_like
        n x k input matrix
    l : array_like
        r x n output matrix
    tol : float
        Relative rank tolerance for every subspace operation

    Returns
    -------
    SubspaceBasis
        R* in R^n; zero when Ker(l) ∩ Im(b) = 0, the reachable subspace of
        (f, b) when l = 0

    Raises
    ------
    NonConvergenceError
        If either recursion fails to settle within n steps

    Examples
    --------
    >>> controllability_subspace(-np.eye(2), np.eye(2)[:, :1], np.eye(2)).is_zero
    True
    """
    v_star = weakly_unobservable_subspace(f, b, l, tol)
    w_star = conditioned_invariant_subspace(f, b, l, tol)
    return subspace_intersect(v_star, w_star, tol)


def left_invertibility_gap(f, l, c, tol: float = DEFAULT_TOL) -> int:
    """
    How far the triple (c, f, l) is from left invertibility

    The pencil [[sI - f, -l], [c, 0]] has normal rank dim(f) + rank(l) when
    the map from the l-input to the c-output is left invertible on Im(l).
    Returns the shortfall (0 means left invertible); a zero l counts as a
    shortfall of one.
    """
    f, l_in, c = _check_triple(f, np.asarray(l, dtype=float), c)
    rank_l = rank_tol(l_in) if l_in.size else 0
    if rank_l == 0:
        return 1
    normal_rank = pencil_normal_rank(f, -l_in, c, None, tol)
    return max(f.shape[0] + rank_l - normal_rank, 0)
