"""
Numerics Module

Tolerance-aware linear algebra and geometric-control primitives that the
model, design and threat packages build on.

Modules:
- linalg: rank, subspace bases and subspace arithmetic, Hurwitz test
- zeros: Rosenbrock pencil, normal rank, invariant zeros and directions
- observer: unobservable subspace and observer gain placement
- errors: exception types shared across packages
"""

from .errors import (
    AttackInfeasibleError,
    CovertnessInfeasibleError,
    DesignInfeasibleError,
    DimensionError,
    InvalidInputError,
    InvalidWindowError,
    NonConvergenceError,
    UnsupportedAttackError,
)
from .linalg import (
    DEFAULT_TOL,
    SubspaceBasis,
    as_matrix,
    column_space,
    is_hurwitz,
    null_space_basis,
    orthogonal_complement,
    preimage,
    product_rank,
    rank_tol,
    subspace_image,
    subspace_intersect,
    subspace_sum,
)
from .observer import place_observer_gain, unobservable_subspace
from .zeros import ZeroSet, invariant_zeros, pencil_normal_rank, rosenbrock, zero_direction

__all__ = [
    "DEFAULT_TOL",
    "SubspaceBasis",
    "ZeroSet",
    "as_matrix",
    "column_space",
    "is_hurwitz",
    "null_space_basis",
    "orthogonal_complement",
    "preimage",
    "product_rank",
    "rank_tol",
    "subspace_image",
    "subspace_intersect",
    "subspace_sum",
    "invariant_zeros",
    "pencil_normal_rank",
    "rosenbrock",
    "zero_direction",
    "place_observer_gain",
    "unobservable_subspace",
    "AttackInfeasibleError",
    "CovertnessInfeasibleError",
    "DesignInfeasibleError",
    "DimensionError",
    "InvalidInputError",
    "InvalidWindowError",
    "NonConvergenceError",
    "UnsupportedAttackError",
]
