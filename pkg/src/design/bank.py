"""
Detector Bank

Four channels (AA, SA, AF, SF), each holding the filter run on both sides of
the link and the plant-side UIO detector, together with the link-attack
signature D_ac the bank was designed against.

Design order:
1. AA detector: decouple F_1 and F_2, place K_1, search L with L D_ac = 0
2. AA filter: K_p D_a = 0, L_p D_ac = 0, search T_p
3. SA detector: reuses the AA detector matrices
4. SA filter: T_p B_a^s = 0, search K_p
5. AF / SF detectors: decouple F_2 / F_1, L = 0; filters copied from AA

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..model import AugmentedModel
from ..numerics import DEFAULT_TOL, DimensionError, as_matrix, null_space_basis
from .filters import DEFAULT_STABILITY_MARGIN, FilterSpec, SideFilter, design_plant_filter
from .uio import (
    CATEGORIES,
    DEFAULT_MAX_RETRIES,
    UIODetector,
    assemble_uio,
    check_assumption3,
    check_category,
    design_uio,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BankChannel:
    """Filter (both sides) and detector of one category"""
    filter: SideFilter
    uio: UIODetector

    def to_dict(self) -> Dict[str, Any]:
        return {"filter": self.filter.to_dict(), "uio": self.uio.to_dict()}


@dataclass(frozen=True, eq=False)
class DetectorBank:
    """
    Bank of filters and UIO detectors

    Attributes
    ----------
    channels : dict
        Category -> BankChannel
    d_ac : np.ndarray
        n x n_c link-attack signature
    metadata : dict
        Design settings (seed, options) carried into frozen bank files
    """
    channels: Dict[str, BankChannel]
    d_ac: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for category in self.channels:
            check_category(category)
        d_ac = as_matrix(self.d_ac, "d_ac").copy()
        d_ac.setflags(write=False)
        object.__setattr__(self, "d_ac", d_ac)
        if self.channels:
            n = next(iter(self.channels.values())).filter.n
            check_assumption3(d_ac, n)

    def __getitem__(self, category: str) -> BankChannel:
        return self.channels[category]

    def __contains__(self, category: str) -> bool:
        return category in self.channels

    @property
    def categories(self) -> List[str]:
        return [c for c in CATEGORIES if c in self.channels]

    def with_channel(self, category: str, side_filter: Optional[SideFilter] = None,
                     uio: Optional[UIODetector] = None) -> "DetectorBank":
        """Copy of the bank with one channel's filter and/or detector swapped"""
        current = self.channels[category]
        channels = dict(self.channels)
        channels[category] = BankChannel(filter=side_filter or current.filter, uio=uio or current.uio)
        return DetectorBank(channels=channels, d_ac=self.d_ac, metadata=dict(self.metadata))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d_ac": self.d_ac.tolist(),
            "channels": {c: self.channels[c].to_dict() for c in self.categories},
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], aug: AugmentedModel) -> "DetectorBank":
        """
        Rebuild a frozen bank

        Detector matrices T, F, K_2, K are recomputed from (H, K_1, L), which
        reproduces them exactly.
        """
        channels = {}
        for category, entry in data["channels"].items():
            uio_data = entry["uio"]
            uio = assemble_uio(aug, category, np.array(uio_data["h"], dtype=float),
                               np.array(uio_data["k1"], dtype=float), np.array(uio_data["l"], dtype=float))
            channels[category] = BankChannel(filter=SideFilter.from_dict(entry["filter"]), uio=uio)
        return cls(channels=channels, d_ac=np.array(data["d_ac"], dtype=float), metadata=dict(data.get("metadata", {})))

    def __repr__(self):
        return f"DetectorBank({self.categories}, n_c={self.d_ac.shape[1]})"


def _poles_to_json(poles):
    """Real poles as floats, complex ones as [re, im] pairs"""
    if poles is None:
        return None
    return [float(np.real(p)) if np.imag(p) == 0 else [float(np.real(p)), float(np.imag(p))] for p in poles]


@dataclass
class DesignOptions:
    """
    Settings of the bank design

    Attributes
    ----------
    observer_poles : sequence of complex, optional
        N poles for K_1 (default -2, -3, ...)
    filter_poles : sequence of float, optional
        Diagonal of F_p (default -2, -3, ...)
    stability_margin : float
        Required decay rate of F_p + L_p
    max_retries : int
        Draws per random search
    seed : int
        Base seed; the AA filter uses seed + 1, the SA filter seed + 2
    tol : float
        Rank tolerance
    """
    observer_poles: Optional[Sequence[complex]] = None
    filter_poles: Optional[Sequence[float]] = None
    stability_margin: float = DEFAULT_STABILITY_MARGIN
    max_retries: int = DEFAULT_MAX_RETRIES
    seed: int = 0
    tol: float = DEFAULT_TOL

    def filter_spec(self, offset: int) -> FilterSpec:
        return FilterSpec(
            poles=self.filter_poles,
            stability_margin=self.stability_margin,
            max_retries=self.max_retries,
            seed=self.seed + offset,
            tol=self.tol,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "observer_poles": _poles_to_json(self.observer_poles),
            "filter_poles": None if self.filter_poles is None else [float(p) for p in self.filter_poles],
            "stability_margin": self.stability_margin,
            "max_retries": self.max_retries,
            "seed": self.seed,
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DesignOptions":
        data = dict(data)
        if data.get("observer_poles") is not None:
            data["observer_poles"] = [complex(*p) if isinstance(p, (list, tuple)) else float(p) for p in data["observer_poles"]]
        return cls(**data)


def design_bank(
    aug: AugmentedModel,
    d_ac,
    options: Optional[DesignOptions] = None,
    aa_channel: Optional[BankChannel] = None,
) -> DetectorBank:
    """
    Design all four channels

    Parameters
    ----------
    aug : AugmentedModel
        Augmented system
    d_ac : array_like
        n x n_c link-attack signature, rank(D_ac) < n
    options : DesignOptions, optional
        Poles, margins and seeds
    aa_channel : BankChannel, optional
        Fixed AA filter and detector; the remaining channels are designed
        around it

    Returns
    -------
    DetectorBank

    Raises
    ------
    DesignInfeasibleError
        From any design step, with the failing condition id
    """
    options = options or DesignOptions()
    d_ac = as_matrix(d_ac, "d_ac")
    if d_ac.shape[0] != aug.dims.n:
        raise DimensionError(f"d_ac must have n={aug.dims.n} rows, got {d_ac.shape[0]}", field="d_ac")
    check_assumption3(d_ac, aug.dims.n, options.tol)

    if aa_channel is None:
        aa_uio = design_uio(
            aug, d_ac=d_ac, poles=options.observer_poles, category="AA",
            seed=options.seed, max_retries=options.max_retries, tol=options.tol,
        )
        aa_filter = design_plant_filter(aug, aa_uio, d_ac, "AA", options.filter_spec(1))
    else:
        aa_uio, aa_filter = aa_channel.uio, aa_channel.filter

    sa_uio = replace(aa_uio, category="SA")
    sa_filter = design_plant_filter(aug, sa_uio, d_ac, "SA", options.filter_spec(2))

    channels = {
        "AA": BankChannel(filter=aa_filter, uio=aa_uio),
        "SA": BankChannel(filter=sa_filter, uio=sa_uio),
    }
    for category in ("AF", "SF"):
        uio = design_uio(aug, category=category, poles=options.observer_poles, tol=options.tol)
        channels[category] = BankChannel(filter=replace(aa_filter, category=category), uio=uio)

    metadata = {"options": options.to_dict(), "aa_fixed": aa_channel is not None}
    logger.info(f"Designed detector bank for categories {list(channels)}")
    return DetectorBank(channels=channels, d_ac=d_ac, metadata=metadata)


def degrade_condition9(bank: DetectorBank, zero_tol: float = 1e-12) -> DetectorBank:
    """
    Bank whose AA filter violates rank(L T_p B_a) = rank(T_p B_a)

    Projects T_p^AA onto Ker(L^AA), so Im(T_p B_a^s) lies inside Ker(L) and
    the filter error can be steered without reaching the residual. Entries
    below zero_tol * ||T_p|| are set to exactly zero.
    """
    channel = bank["AA"]
    kernel = null_space_basis(channel.uio.l, DEFAULT_TOL)
    t_p = kernel.projector() @ channel.filter.t_p
    t_p[np.abs(t_p) < zero_tol * max(np.linalg.norm(channel.filter.t_p, 2), 1.0)] = 0.0

    degraded = bank.with_channel("AA", side_filter=replace(channel.filter, t_p=t_p))
    degraded.metadata["degraded"] = "condition9"
    logger.info(f"Projected T_p^AA onto Ker(L^AA) (dim {kernel.dim})")
    return degraded
