"""
Tolerance-Aware Linear Algebra

Rank decisions and subspace arithmetic used by the condition checks and the
geometric recursions of the detector design.

Features:
- SVD rank with a tolerance relative to the largest singular value
- Orthonormal subspace bases (null space, column space, complement)
- Subspace sum, intersection, image and preimage
- Hurwitz test with a stability margin

All rank decisions use DEFAULT_TOL (1e-9, relative) unless the caller passes
its own tolerance.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from .errors import DimensionError, InvalidInputError

DEFAULT_TOL = 1e-9


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """
    Convert input to a finite 2-D float array

    Parameters
    ----------
    m : array_like
        Matrix entries (nested rows or ndarray)
    name : str
        Name used in error messages

    Returns
    -------
    np.ndarray
        2-D float array

    Raises
    ------
    InvalidInputError
        If the entries are not finite or the input is more than 2-D
    """
    arr = np.asarray(m, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim > 2:
        raise InvalidInputError(f"{name} must be 2-D, got {arr.ndim}-D")

    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")

    return arr


def _check_tol(tol: float):
    if not tol > 0:
        raise InvalidInputError(f"Tolerance must be positive, got {tol}")


def _numerical_rank(singular_values: np.ndarray, tol: float, reference: Optional[float] = None) -> int:
    """Count singular values above tol * reference (reference defaults to the largest one)"""
    if singular_values.size == 0:
        return 0
    scale = singular_values[0] if reference is None else reference
    if scale <= 0:
        return 0
    return int(np.sum(singular_values > tol * scale))


def rank_tol(m, tol: float = DEFAULT_TOL, reference: Optional[float] = None) -> int:
    """
    Numerical rank

    Parameters
    ----------
    m : array_like
        Real (or complex) matrix
    tol : float
        Relative tolerance against the largest singular value
    reference : float, optional
        Scale to measure against instead of sigma_max. Use the product of the
        factor norms when m is a product that may vanish up to rounding.

    Returns
    -------
    int
        Number of singular values > tol * sigma_max; 0 for the zero matrix

    Examples
    --------
    >>> rank_tol(np.eye(4))
    4
    """
    _check_tol(tol)
    arr = np.asarray(m)
    if np.iscomplexobj(arr):
        if arr.ndim != 2 or not np.all(np.isfinite(arr)):
            raise InvalidInputError("Complex matrix must be 2-D and finite")
    else:
        arr = as_matrix(arr)

    if arr.size == 0:
        return 0

    s = linalg.svd(arr, compute_uv=False)
    return _numerical_rank(s, tol, reference)


def product_rank(*factors, tol: float = DEFAULT_TOL) -> int:
    """Rank of a matrix product, measured against the product of the factor norms"""
    mats = [as_matrix(f) for f in factors]
    product = mats[0]
    for mat in mats[1:]:
        product = product @ mat
    if product.size == 0:
        return 0
    reference = float(np.prod([np.linalg.norm(mat, 2) if mat.size else 0.0 for mat in mats]))
    return rank_tol(product, tol, reference=reference)


@dataclass(frozen=True)
class SubspaceBasis:
    """
    Orthonormal basis of a subspace of R^ambient_dim

    Attributes
    ----------
    ambient_dim : int
        Dimension of the surrounding space
    basis : np.ndarray
        ambient_dim x k matrix with orthonormal columns (k may be 0)
    """
    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.ndim == 1:
            basis = basis.reshape(self.ambient_dim, -1) if basis.size else np.zeros((self.ambient_dim, 0))
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise DimensionError(
                f"Basis shape {basis.shape} does not live in R^{self.ambient_dim}", field="basis"
            )
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @classmethod
    def zero(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim, np.eye(ambient_dim))

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace"""
        return self.basis @ self.basis.T

    def distance(self, v: np.ndarray) -> float:
        """Euclidean distance from v to the subspace"""
        v = np.asarray(v, dtype=float).reshape(-1)
        return float(np.linalg.norm(v - self.projector() @ v))

    def contains(self, v: np.ndarray, tol: float = 1e-8) -> bool:
        v = np.asarray(v, dtype=float).reshape(-1)
        return self.distance(v) <= tol * max(1.0, float(np.linalg.norm(v)))

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient_dim={self.ambient_dim})"


def null_space_basis(m, tol: float = DEFAULT_TOL, reference: Optional[float] = None) -> SubspaceBasis:
    """
    Orthonormal basis of {x : m x = 0}

    Parameters
    ----------
    m : array_like
        r x c matrix
    tol : float
        Relative rank tolerance
    reference : float, optional
        Scale the tolerance is taken against (defaults to sigma_max of m).
        Pass the norm of an unprojected operand when m is a product that may
        vanish up to rounding.

    Returns
    -------
    SubspaceBasis
        Basis in R^c
    """
    _check_tol(tol)
    arr = as_matrix(m)
    cols = arr.shape[1]
    if arr.shape[0] == 0 or cols == 0:
        return SubspaceBasis.full(cols)

    _, s, vh = linalg.svd(arr, full_matrices=True)
    rank = _numerical_rank(s, tol, reference)
    return SubspaceBasis(cols, vh[rank:].T.copy())


def column_space(m, tol: float = DEFAULT_TOL, reference: Optional[float] = None) -> SubspaceBasis:
    """Orthonormal basis of Im(m)"""
    _check_tol(tol)
    arr = as_matrix(m)
    rows = arr.shape[0]
    if arr.shape[1] == 0 or rows == 0:
        return SubspaceBasis.zero(rows)

    u, s, _ = linalg.svd(arr, full_matrices=False)
    rank = _numerical_rank(s, tol, reference)
    return SubspaceBasis(rows, u[:, :rank].copy())


def orthogonal_complement(s: SubspaceBasis, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement of span(s)"""
    if s.is_zero:
        return SubspaceBasis.full(s.ambient_dim)
    return null_space_basis(s.basis.T, tol)


def _check_same_ambient(a: SubspaceBasis, b: SubspaceBasis):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(
            f"Ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}",
            field="ambient_dim",
        )


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """Basis of span(a) + span(b)"""
    _check_same_ambient(a, b)
    return column_space(np.hstack([a.basis, b.basis]), tol)


def subspace_intersect(a: SubspaceBasis, b: SubspaceBasis, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """
    Basis of span(a) ∩ span(b)

    Solves a.basis·alpha = b.basis·beta through the null space of
    [a.basis, -b.basis] and maps the alpha part back into the ambient space.

    Raises
    ------
    DimensionError
        If the ambient dimensions differ
    """
    _check_same_ambient(a, b)
    if a.is_zero or b.is_zero:
        return SubspaceBasis.zero(a.ambient_dim)

    stacked = np.hstack([a.basis, -b.basis])
    kernel = null_space_basis(stacked, tol)
    if kernel.is_zero:
        return SubspaceBasis.zero(a.ambient_dim)

    vectors = a.basis @ kernel.basis[: a.dim, :]
    return column_space(vectors, tol)


def subspace_image(f, s: SubspaceBasis, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """Basis of f·span(s)"""
    f = as_matrix(f, "f")
    if f.shape[1] != s.ambient_dim:
        raise DimensionError(f"f has {f.shape[1]} columns, subspace lives in R^{s.ambient_dim}", field="f")
    if s.is_zero:
        return SubspaceBasis.zero(f.shape[0])
    return column_space(f @ s.basis, tol, reference=max(float(np.linalg.norm(f, 2)), np.finfo(float).tiny))


def preimage(f, s: SubspaceBasis, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """
    Basis of {x : f x ∈ span(s)}

    Computed as the null space of (I - P_s)·f where P_s projects onto span(s).

    Parameters
    ----------
    f : array_like
        r x c matrix
    s : SubspaceBasis
        Subspace of R^r

    Returns
    -------
    SubspaceBasis
        Subspace of R^c

    Examples
    --------
    >>> preimage(np.diag([1.0, 2.0]), SubspaceBasis(2, np.array([[1.0], [0.0]]))).dim
    1
    """
    f = as_matrix(f, "f")
    if f.shape[0] != s.ambient_dim:
        raise DimensionError(f"f has {f.shape[0]} rows, subspace lives in R^{s.ambient_dim}", field="f")

    complement = np.eye(s.ambient_dim) - s.projector()
    f_norm = float(np.linalg.norm(f, 2)) if f.size else 0.0
    if f_norm == 0.0:
        return SubspaceBasis.full(f.shape[1])
    return null_space_basis(complement @ f, tol, reference=f_norm)


def is_hurwitz(a, margin: float = 0.0) -> bool:
    """
    True iff every eigenvalue of a has real part < -margin

    Examples
    --------
    >>> is_hurwitz(-np.eye(3))
    True
    >>> is_hurwitz(np.array([[0.0, 1.0], [0.0, 0.0]]))
    False
    """
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"Hurwitz test needs a square matrix, got {a.shape}", field="a")
    if a.size == 0:
        return True
    return bool(np.max(np.linalg.eigvals(a).real) < -margin)
