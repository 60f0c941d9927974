"""
Built-in Plant Presets

The four-state benchmark plant with two inputs and two outputs, all of them
compromised, together with its auxiliary sensor dynamics.

Noise matrices: the benchmark covariances do not match the noise input
matrices column for column, so the preset drives the plant with one process
noise channel (N^s = [1 1 1 1]^T, Q = 0.01) and the auxiliary state with one
channel per output (R = diag(0.02, 0.02)).

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

from typing import Callable, Dict, Tuple

import numpy as np

from .plant import AugmentedModel, AuxiliarySensorModel, PlantModel, build_augmented

BENCHMARK_PRESET = "paper-siv"

# alternative names accepted wherever a preset name is
PRESET_ALIASES = {"benchmark": BENCHMARK_PRESET}


def benchmark_plant() -> PlantModel:
    a_s = np.array([
        [-1.0, 0.0, 1.0, 0.0],
        [0.0, -3.0, 0.0, 1.0],
        [0.0, 0.0, -2.0, 0.0],
        [0.0, 0.0, 0.0, -2.0],
    ])
    b_s = np.array([
        [-2.0, -1.0],
        [0.0, -2.0],
        [0.0, -3.0],
        [-4.0, 0.0],
    ])
    c_s = 0.2 * np.hstack([np.eye(2), np.zeros((2, 2))])

    return PlantModel(
        a_s=a_s,
        b_s=b_s,
        c_s=c_s,
        n_s=np.ones((4, 1)),
        l1=np.array([[-2.0], [0.0], [0.0], [-4.0]]),
        # sensor fault shows up on both outputs, the same way C^a L_2^a does
        l2=np.ones((2, 1)),
        s_a=np.eye(2),
        d_a=0.2 * np.eye(2),
        q_cov=np.array([[0.01]]),
        r_cov=0.02 * np.eye(2),
    )


def benchmark_aux() -> AuxiliarySensorModel:
    return AuxiliarySensorModel(
        a_a=np.diag([-1.0, -2.0, -3.0]),
        l2_a=np.array([[1.0], [0.0], [0.0]]),
        n_a=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        c_a=np.ones((2, 3)),
    )


def benchmark_d_ac() -> np.ndarray:
    """Communication-link attack signature: two of the four filter channels exposed"""
    return np.diag([1.0, 1.0, 0.0, 0.0])


def benchmark_augmented() -> AugmentedModel:
    return build_augmented(benchmark_plant(), benchmark_aux())


PLANT_PRESETS: Dict[str, Callable[[], Tuple[PlantModel, AuxiliarySensorModel, np.ndarray]]] = {
    BENCHMARK_PRESET: lambda: (benchmark_plant(), benchmark_aux(), benchmark_d_ac()),
}


def canonical_preset(name: str) -> str:
    """Registered name of a preset, resolving aliases"""
    return PRESET_ALIASES.get(name, name)


def load_plant_preset(name: str) -> Tuple[PlantModel, AuxiliarySensorModel, np.ndarray]:
    """
    Plant, auxiliary model and D_ac of a named preset (aliases accepted)

    Raises
    ------
    ValueError
        If the preset name is unknown
    """
    name = canonical_preset(name)
    if name not in PLANT_PRESETS:
        raise ValueError(
            f"Unknown preset '{name}'. Available: {sorted(PLANT_PRESETS)} (aliases: {sorted(PRESET_ALIASES)})"
        )
    return PLANT_PRESETS[name]()
