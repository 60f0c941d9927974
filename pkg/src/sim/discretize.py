"""
Step Discretization

One-step maps x_{k+1} = Phi x_k + Gamma w_k for x' = A x + B w with w held
constant over the step.

Integrators:
- zoh: exact zero-order hold, from the exponential of [[A, B], [0, 0]] dt
- rk4: classical Runge-Kutta, which for a linear system with held input is
  the fourth-order Taylor polynomial of the exact map

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

from typing import Tuple

import numpy as np
from scipy import linalg

from ..numerics import DimensionError, as_matrix

INTEGRATORS = ("zoh", "rk4")
INTEGRATOR_ALIASES = {"zoh": "zoh", "exact": "zoh", "rk4": "rk4"}


def normalize_integrator(name: str) -> str:
    try:
        return INTEGRATOR_ALIASES[name.lower()]
    except (KeyError, AttributeError):
        raise ValueError(f"Unknown integrator '{name}'. Expected one of {sorted(INTEGRATOR_ALIASES)}") from None


def discretize(a, b, dt: float, integrator: str = "zoh") -> Tuple[np.ndarray, np.ndarray]:
    """
    Discrete-time (Phi, Gamma) of x' = a x + b w

    Parameters
    ----------
    a : array_like
        n x n state matrix
    b : array_like
        n x k input matrix (k may be 0)
    dt : float
        Step size in seconds
    integrator : str
        'zoh' (alias 'exact') or 'rk4'

    Returns
    -------
    tuple of np.ndarray
        Phi (n x n) and Gamma (n x k)

    Examples
    --------
    >>> phi, gamma = discretize([[0.0]], [[1.0]], 0.5)
    >>> float(phi[0, 0]), float(gamma[0, 0])
    (1.0, 0.5)
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    integrator = normalize_integrator(integrator)

    a = as_matrix(a, "a")
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"a must be square, got {a.shape}", field="a")
    b = np.zeros((n, 0)) if np.size(b) == 0 else as_matrix(b, "b")
    if b.shape[0] != n:
        raise DimensionError(f"b has {b.shape[0]} rows, expected {n}", field="b")
    k = b.shape[1]

    if integrator == "zoh":
        block = np.zeros((n + k, n + k))
        block[:n, :n] = a
        block[:n, n:] = b
        exp_block = linalg.expm(block * dt)
        return exp_block[:n, :n], exp_block[:n, n:]

    ah = a * dt
    ah2 = ah @ ah
    ah3 = ah2 @ ah
    eye = np.eye(n)
    phi = eye + ah + ah2 / 2.0 + ah3 / 6.0 + ah3 @ ah / 24.0
    gamma = dt * (eye + ah / 2.0 + ah2 / 6.0 + ah3 / 24.0) @ b
    return phi, gamma
