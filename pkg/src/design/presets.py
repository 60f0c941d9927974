"""
Benchmark Bank Matrices

AA filter and detector matrices of the four-state benchmark, frozen so the
bank can be rebuilt without a search. The remaining channels are designed
around them.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

from typing import Optional

import numpy as np

from ..model import BENCHMARK_PRESET, AugmentedModel, benchmark_augmented, benchmark_d_ac
from .bank import BankChannel, DesignOptions, DetectorBank, design_bank
from .filters import SideFilter
from .uio import assemble_uio

BENCHMARK_F_P = np.diag([-3.0, -2.0, -4.0, -5.0])

BENCHMARK_T_P = np.array([
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 2.0, 3.0, 1.0],
    [2.0, 0.0, 0.0, -4.0],
    [0.0, 1.0, 0.0, 0.0],
])

BENCHMARK_L_P = np.array([
    [0.0, 0.0, 4.0, -1.0],
    [0.0, 0.0, 3.0, -2.0],
    [0.0, 0.0, 2.0, -3.0],
    [0.0, 0.0, 5.0, -1.0],
])

BENCHMARK_H = np.array([
    [5.0, -5.0],
    [0.0, 0.0],
    [0.0, 0.0],
    [10.0, -10.0],
    [0.0, 1.0],
    [0.0, 0.0],
    [0.0, 0.0],
])

BENCHMARK_K1 = np.array([
    [6.0, -2.0],
    [-3.0, 1.0],
    [6.0, 2.0],
    [3.0, 1.0],
    [3.0, 1.0],
    [6.0, 2.0],
    [3.0, 1.0],
])

# rows 5-7 repeat rows 2-4
BENCHMARK_L = np.vstack([BENCHMARK_L_P, BENCHMARK_L_P[1:]])


def benchmark_aa_channel(aug: AugmentedModel) -> BankChannel:
    uio = assemble_uio(aug, "AA", BENCHMARK_H, BENCHMARK_K1, BENCHMARK_L)
    side_filter = SideFilter(
        category="AA",
        f_p=BENCHMARK_F_P,
        t_p=BENCHMARK_T_P,
        k_p=np.zeros((aug.dims.n, aug.dims.p)),
        l_p=BENCHMARK_L_P,
    )
    return BankChannel(filter=side_filter, uio=uio)


def benchmark_bank(aug: Optional[AugmentedModel] = None, options: Optional[DesignOptions] = None) -> DetectorBank:
    """
    Bank with the frozen benchmark AA matrices

    Parameters
    ----------
    aug : AugmentedModel, optional
        Defaults to the benchmark preset
    options : DesignOptions, optional
        Settings for the SA, AF and SF channels

    Returns
    -------
    DetectorBank
    """
    aug = aug or benchmark_augmented()
    bank = design_bank(aug, benchmark_d_ac(), options, aa_channel=benchmark_aa_channel(aug))
    bank.metadata["preset"] = BENCHMARK_PRESET
    return bank
