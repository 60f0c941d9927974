"""
Design Module

Filters, UIO detectors and the condition checks of the detector bank.

Modules:
- geometry: weakly unobservable / conditioned invariant / controllability subspaces
- uio: decoupling gain and UIO detector design
- filters: plant-side and C&C-side filter design
- conditions: numeric evaluation of every design condition
- bank: DetectorBank, design_bank, degrade_condition9
- presets: frozen AA matrices of the benchmark
"""

from .bank import BankChannel, DesignOptions, DetectorBank, degrade_condition9, design_bank
from .conditions import ConditionCheck, ConditionReport, augmented_error_matrix, verify_conditions
from .filters import FilterSpec, SideFilter, design_plant_filter, filter_zero_check
from .geometry import (
    conditioned_invariant_subspace,
    controllability_subspace,
    left_invertibility_gap,
    weakly_unobservable_subspace,
)
from .presets import benchmark_aa_channel, benchmark_bank
from .uio import (
    CATEGORIES,
    DECOUPLE_TARGETS,
    UIODetector,
    admissible_rows,
    assemble_uio,
    design_uio,
    solve_decoupling_gain,
)

__all__ = [
    "BankChannel",
    "DesignOptions",
    "DetectorBank",
    "degrade_condition9",
    "design_bank",
    "ConditionCheck",
    "ConditionReport",
    "augmented_error_matrix",
    "verify_conditions",
    "FilterSpec",
    "SideFilter",
    "design_plant_filter",
    "filter_zero_check",
    "conditioned_invariant_subspace",
    "controllability_subspace",
    "left_invertibility_gap",
    "weakly_unobservable_subspace",
    "benchmark_aa_channel",
    "benchmark_bank",
    "CATEGORIES",
    "DECOUPLE_TARGETS",
    "UIODetector",
    "admissible_rows",
    "assemble_uio",
    "design_uio",
    "solve_decoupling_gain",
]
