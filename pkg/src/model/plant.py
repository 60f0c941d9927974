"""
Plant and Augmented Models

Value types for the physical plant with its attack/fault signatures, the
auxiliary dynamics that turn sensor faults and measurement noise into pseudo
actuator inputs, and the augmented system both of them assemble into.

Augmented state x = [x^s; x^a] of size N = n + p_f + p:

    A = diag(A^s, A^a)        B   = [B^s; 0]       B_a = [B^s S_a; 0]
    F_1 = [L_1; 0]            F_2 = [0; L_2^a]     N   = diag(N^s, N^a)
    C = [C^s  C^a]

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np
from scipy import linalg

from ..numerics import DEFAULT_TOL, DimensionError, InvalidInputError, as_matrix, is_hurwitz

logger = logging.getLogger(__name__)


def _matrix_field(obj, name: str, rows=None, cols=None) -> np.ndarray:
    value = getattr(obj, name)
    arr = as_matrix(value, name).copy() if np.size(value) else np.zeros((rows or 0, cols or 0))
    if rows is not None and arr.shape[0] != rows:
        raise DimensionError(f"{name} has {arr.shape[0]} rows, expected {rows}", field=name)
    if cols is not None and arr.shape[1] != cols:
        raise DimensionError(f"{name} has {arr.shape[1]} columns, expected {cols}", field=name)
    arr.setflags(write=False)
    object.__setattr__(obj, name, arr)
    return arr


def _check_covariance(mat: np.ndarray, name: str):
    if mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"{name} must be square, got {mat.shape}", field=name)
    if mat.size == 0:
        return
    if not np.allclose(mat, mat.T, atol=DEFAULT_TOL * max(1.0, np.abs(mat).max())):
        raise InvalidInputError(f"{name} must be symmetric")
    if np.min(np.linalg.eigvalsh(mat)) < -DEFAULT_TOL * max(1.0, np.abs(mat).max()):
        raise InvalidInputError(f"{name} must be positive semidefinite")


@dataclass(frozen=True)
class PlantModel:
    """
    Physical plant with attack, fault and noise signatures

    Attributes
    ----------
    a_s, b_s, c_s : np.ndarray
        n x n, n x m, p x n plant matrices
    n_s : np.ndarray
        n x q process-noise input matrix
    l1 : np.ndarray
        n x m_f actuator-fault signature
    l2 : np.ndarray
        p x p_f sensor-fault signature
    s_a : np.ndarray
        m x m_a attacked input channels
    d_a : np.ndarray
        p x p_a sensor-attack signature
    q_cov : np.ndarray
        q x q process-noise covariance
    r_cov : np.ndarray
        p x p measurement-noise covariance
    """
    a_s: np.ndarray
    b_s: np.ndarray
    c_s: np.ndarray
    n_s: np.ndarray
    l1: np.ndarray
    l2: np.ndarray
    s_a: np.ndarray
    d_a: np.ndarray
    q_cov: np.ndarray
    r_cov: np.ndarray

    def __post_init__(self):
        a_s = _matrix_field(self, "a_s")
        n = a_s.shape[0]
        if a_s.shape != (n, n):
            raise DimensionError(f"a_s must be square, got {a_s.shape}", field="a_s")
        m = _matrix_field(self, "b_s", rows=n).shape[1]
        p = _matrix_field(self, "c_s", cols=n).shape[0]
        _matrix_field(self, "n_s", rows=n)
        _matrix_field(self, "l1", rows=n)
        _matrix_field(self, "l2", rows=p)
        _matrix_field(self, "s_a", rows=m)
        _matrix_field(self, "d_a", rows=p)
        q_cov = _matrix_field(self, "q_cov", rows=self.n_s.shape[1], cols=self.n_s.shape[1])
        r_cov = _matrix_field(self, "r_cov", rows=p, cols=p)
        _check_covariance(q_cov, "q_cov")
        _check_covariance(r_cov, "r_cov")

    @property
    def n(self) -> int:
        return self.a_s.shape[0]

    @property
    def m(self) -> int:
        return self.b_s.shape[1]

    @property
    def p(self) -> int:
        return self.c_s.shape[0]

    @property
    def q(self) -> int:
        return self.n_s.shape[1]

    @property
    def m_f(self) -> int:
        return self.l1.shape[1]

    @property
    def p_f(self) -> int:
        return self.l2.shape[1]

    @property
    def m_a(self) -> int:
        return self.s_a.shape[1]

    @property
    def p_a(self) -> int:
        return self.d_a.shape[1]

    @property
    def b_a_s(self) -> np.ndarray:
        """Attacked-input matrix B_a^s = B^s S_a"""
        return self.b_s @ self.s_a

    def to_dict(self) -> Dict[str, Any]:
        return {name: getattr(self, name).tolist() for name in PLANT_FIELDS}


PLANT_FIELDS = ("a_s", "b_s", "c_s", "n_s", "l1", "l2", "s_a", "d_a", "q_cov", "r_cov")


@dataclass(frozen=True)
class AuxiliarySensorModel:
    """
    Auxiliary dynamics carrying sensor faults and measurement noise

    Attributes
    ----------
    a_a : np.ndarray
        (p_f+p) x (p_f+p) state matrix (expected Hurwitz)
    l2_a : np.ndarray
        (p_f+p) x p_f pseudo-actuator fault signature
    n_a : np.ndarray
        (p_f+p) x p pseudo process-noise input
    c_a : np.ndarray
        p x (p_f+p) output map
    """
    a_a: np.ndarray
    l2_a: np.ndarray
    n_a: np.ndarray
    c_a: np.ndarray

    def __post_init__(self):
        a_a = _matrix_field(self, "a_a")
        k = a_a.shape[0]
        if a_a.shape != (k, k):
            raise DimensionError(f"a_a must be square, got {a_a.shape}", field="a_a")
        _matrix_field(self, "l2_a", rows=k)
        _matrix_field(self, "n_a", rows=k)
        _matrix_field(self, "c_a", cols=k)

    @property
    def size(self) -> int:
        return self.a_a.shape[0]

    def to_dict(self) -> Dict[str, Any]:
        return {name: getattr(self, name).tolist() for name in AUX_FIELDS}


AUX_FIELDS = ("a_a", "l2_a", "n_a", "c_a")


@dataclass(frozen=True)
class AugmentedDims:
    n: int
    m: int
    p: int
    m_f: int
    p_f: int
    m_a: int
    p_a: int
    q: int

    @property
    def size(self) -> int:
        """Augmented state dimension n + p_f + p"""
        return self.n + self.p_f + self.p


@dataclass(frozen=True)
class AugmentedModel:
    """
    Augmented plant (physical state plus auxiliary state)

    Attributes
    ----------
    a, b, b_a, f1, f2, n_mat, c : np.ndarray
        Augmented matrices
    dims : AugmentedDims
        Dimension record
    plant : PlantModel
    aux : AuxiliarySensorModel
    """
    a: np.ndarray
    b: np.ndarray
    b_a: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    n_mat: np.ndarray
    c: np.ndarray
    dims: AugmentedDims
    plant: PlantModel = field(repr=False)
    aux: AuxiliarySensorModel = field(repr=False)

    @property
    def size(self) -> int:
        return self.dims.size

    @property
    def d_a(self) -> np.ndarray:
        return self.plant.d_a

    @property
    def s_a(self) -> np.ndarray:
        return self.plant.s_a

    @property
    def noise_cov(self) -> np.ndarray:
        """Covariance of the stacked noise [omega^s; omega^a]"""
        return linalg.block_diag(self.plant.q_cov, self.plant.r_cov)

    @property
    def fault_matrix(self) -> np.ndarray:
        """[F_1 F_2]"""
        return np.hstack([self.f1, self.f2])


def build_augmented(plant: PlantModel, aux: AuxiliarySensorModel) -> AugmentedModel:
    """
    Assemble the augmented model from a plant and its auxiliary dynamics

    Parameters
    ----------
    plant : PlantModel
        Physical plant
    aux : AuxiliarySensorModel
        Auxiliary sensor dynamics

    Returns
    -------
    AugmentedModel
        Block matrices; the upper n rows of B, B_a, F_1 carry the plant, the
        lower p_f + p rows of F_2 carry the auxiliary fault input

    Raises
    ------
    TypeError
        If the arguments are not model objects
    DimensionError
        If the auxiliary model does not fit the plant's p and p_f
    """
    if not isinstance(plant, PlantModel):
        raise TypeError(f"Expected PlantModel, got {type(plant)}")
    if not isinstance(aux, AuxiliarySensorModel):
        raise TypeError(f"Expected AuxiliarySensorModel, got {type(aux)}")

    n, m, p, p_f = plant.n, plant.m, plant.p, plant.p_f
    if aux.size != p_f + p:
        raise DimensionError(f"a_a must be {p_f + p}x{p_f + p} (p_f + p), got {aux.a_a.shape}", field="a_a")
    if aux.l2_a.shape[1] != p_f:
        raise DimensionError(f"l2_a must have p_f={p_f} columns, got {aux.l2_a.shape[1]}", field="l2_a")
    if aux.n_a.shape[1] != p:
        raise DimensionError(f"n_a must have p={p} columns, got {aux.n_a.shape[1]}", field="n_a")
    if aux.c_a.shape[0] != p:
        raise DimensionError(f"c_a must have p={p} rows, got {aux.c_a.shape[0]}", field="c_a")

    k = aux.size
    if not is_hurwitz(aux.a_a):
        logger.warning("Auxiliary matrix a_a is not Hurwitz")

    dims = AugmentedDims(n=n, m=m, p=p, m_f=plant.m_f, p_f=p_f, m_a=plant.m_a, p_a=plant.p_a, q=plant.q)
    matrices = {
        "a": linalg.block_diag(plant.a_s, aux.a_a),
        "b": np.vstack([plant.b_s, np.zeros((k, m))]),
        "b_a": np.vstack([plant.b_a_s, np.zeros((k, plant.m_a))]),
        "f1": np.vstack([plant.l1, np.zeros((k, plant.m_f))]),
        "f2": np.vstack([np.zeros((n, p_f)), aux.l2_a]),
        "n_mat": linalg.block_diag(plant.n_s, aux.n_a),
        "c": np.hstack([plant.c_s, aux.c_a]),
    }
    for mat in matrices.values():
        mat.setflags(write=False)

    return AugmentedModel(dims=dims, plant=plant, aux=aux, **matrices)
