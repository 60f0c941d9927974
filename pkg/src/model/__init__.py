"""
Model Module

Plant, auxiliary sensor dynamics and the augmented system the detector bank
is designed against.

Modules:
- plant: PlantModel, AuxiliarySensorModel, AugmentedModel, build_augmented
- validation: solvability checks reported as data
- presets: built-in benchmark plant ("paper-siv", alias "benchmark")
"""

from .plant import (
    AUX_FIELDS,
    PLANT_FIELDS,
    AugmentedDims,
    AugmentedModel,
    AuxiliarySensorModel,
    PlantModel,
    build_augmented,
)
from .presets import (
    BENCHMARK_PRESET,
    PRESET_ALIASES,
    canonical_preset,
    load_plant_preset,
    benchmark_augmented,
    benchmark_aux,
    benchmark_d_ac,
    benchmark_plant,
)
from .validation import ValidationCheck, ValidationReport, validate

__all__ = [
    "AUX_FIELDS",
    "PLANT_FIELDS",
    "AugmentedDims",
    "AugmentedModel",
    "AuxiliarySensorModel",
    "PlantModel",
    "build_augmented",
    "BENCHMARK_PRESET",
    "PRESET_ALIASES",
    "canonical_preset",
    "load_plant_preset",
    "benchmark_augmented",
    "benchmark_aux",
    "benchmark_d_ac",
    "benchmark_plant",
    "ValidationCheck",
    "ValidationReport",
    "validate",
]
