"""
Config Documents

One JSON (or YAML) document describes a full run:

    {
      "plant":     {"a_s": ..., "b_s": ..., "c_s": ..., "n_s": ..., "l1": ...,
                    "l2": ..., "s_a": ..., "d_a": ..., "q_cov": ..., "r_cov": ...},
      "auxiliary": {"a_a": ..., "l2_a": ..., "n_a": ..., "c_a": ...},
      "design":    {"d_ac": ..., "observer_poles": ..., "filter_poles": ...,
                    "stability_margin": ..., "max_retries": ..., "seed": ..., "tol": ...},
      "bank":      {... frozen DetectorBank ...},                      (optional)
      "scenario":  {"name": ..., "t_end": ..., "events": [...]},       (optional)
      "sim":       {"dt": ..., "t_end": ..., "seed": ..., "noise_on": ..., "integrator": ...},
      "eval":      {"runs": ..., "margin": ..., "floor": ..., "debounce": ..., "onset": ...}
    }

Matrices are nested row lists and times are in seconds. Unknown keys are
rejected with their dotted path.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np
import yaml

from ..design import DesignOptions, DetectorBank, benchmark_bank, design_bank
from ..model import (
    AUX_FIELDS,
    BENCHMARK_PRESET,
    PLANT_FIELDS,
    AugmentedModel,
    AuxiliarySensorModel,
    PlantModel,
    build_augmented,
    canonical_preset,
    load_plant_preset,
)
from ..sim import SimConfig

logger = logging.getLogger(__name__)

SECTIONS = ("plant", "auxiliary", "design", "bank", "scenario", "sim", "eval")
DESIGN_KEYS = ("d_ac", "observer_poles", "filter_poles", "stability_margin", "max_retries", "seed", "tol")
SCENARIO_KEYS = ("name", "t_end", "events")
SIM_KEYS = ("dt", "t_end", "seed", "noise_on", "integrator", "x0", "z0")
EVAL_KEYS = ("runs", "margin", "floor", "debounce", "onset")


class ConfigError(ValueError):
    """Invalid config document; carries the dotted path of the offending field"""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


@dataclass
class EvalSettings:
    runs: int = 100
    margin: float = 1.1
    floor: float = 1e-6
    debounce: int = 1
    onset: float = 5.0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be at least 1, got {self.runs}")
        if self.debounce < 1:
            raise ValueError(f"debounce must be at least 1, got {self.debounce}")


@dataclass
class ConfigDocument:
    """
    Parsed config

    Attributes
    ----------
    plant, auxiliary : PlantModel, AuxiliarySensorModel
        Model matrices
    d_ac : np.ndarray
        Link-attack signature
    design : DesignOptions
        Bank design settings
    bank : dict, optional
        Frozen bank (DetectorBank.to_dict form)
    scenario : dict, optional
        {name, t_end, events}
    sim : SimConfig
    eval : EvalSettings
    preset : str, optional
        Name of the built-in preset the document came from
    """
    plant: PlantModel
    auxiliary: AuxiliarySensorModel
    d_ac: np.ndarray
    design: DesignOptions = field(default_factory=DesignOptions)
    bank: Optional[Dict[str, Any]] = None
    scenario: Optional[Dict[str, Any]] = None
    sim: SimConfig = field(default_factory=SimConfig)
    eval: EvalSettings = field(default_factory=EvalSettings)
    preset: Optional[str] = None

    def augmented(self) -> AugmentedModel:
        return build_augmented(self.plant, self.auxiliary)

    def matches_preset(self) -> bool:
        """True when plant, auxiliary and D_ac are still those of the named preset"""
        if self.preset is None:
            return False
        try:
            plant, aux, d_ac = load_plant_preset(self.preset)
        except ValueError:
            return False
        return (
            _same_matrices(self.plant.to_dict(), plant.to_dict())
            and _same_matrices(self.auxiliary.to_dict(), aux.to_dict())
            and np.array_equal(np.asarray(self.d_ac, dtype=float), d_ac)
        )

    def build_bank(self, aug: Optional[AugmentedModel] = None) -> DetectorBank:
        """
        Frozen bank if present, else the preset bank or a fresh design

        The frozen benchmark AA channel is used only while the document's
        matrices equal the preset's; an edited preset document is designed
        from scratch.
        """
        aug = aug or self.augmented()
        if self.bank is not None:
            return DetectorBank.from_dict(self.bank, aug)
        if self.preset is not None and canonical_preset(self.preset) == BENCHMARK_PRESET:
            if self.matches_preset():
                return benchmark_bank(aug, self.design)
            logger.info(f"Document differs from preset '{self.preset}'; designing the bank from its own matrices")
        return design_bank(aug, self.d_ac, self.design)

    def to_dict(self) -> Dict[str, Any]:
        design = self.design.to_dict()
        design["d_ac"] = np.asarray(self.d_ac).tolist()
        data: Dict[str, Any] = {
            "plant": self.plant.to_dict(),
            "auxiliary": self.auxiliary.to_dict(),
            "design": design,
            "sim": self.sim.to_dict(),
            "eval": asdict(self.eval),
        }
        if self.bank is not None:
            data["bank"] = self.bank
        if self.scenario is not None:
            data["scenario"] = self.scenario
        if self.preset is not None:
            data["preset"] = self.preset
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ConfigDocument":
        return parse_config(data)


def _same_matrices(a: Mapping[str, Any], b: Mapping[str, Any]) -> bool:
    if set(a) != set(b):
        return False
    return all(np.array_equal(np.asarray(a[k], dtype=float), np.asarray(b[k], dtype=float)) for k in a)


def _check_keys(section: Mapping[str, Any], allowed, path: str):
    if not isinstance(section, Mapping):
        raise ConfigError(f"expected an object, got {type(section).__name__}", path)
    for key in section:
        if key not in allowed:
            raise ConfigError("unknown key", f"{path}.{key}" if path else key)


def _matrices(section: Mapping[str, Any], names, path: str) -> Dict[str, np.ndarray]:
    _check_keys(section, names, path)
    out = {}
    for name in names:
        if name not in section:
            raise ConfigError("missing required matrix", f"{path}.{name}")
        try:
            out[name] = np.array(section[name], dtype=float)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"not a numeric matrix ({e})", f"{path}.{name}") from e
    return out


def _build(factory, kwargs: Dict[str, Any], path: str):
    try:
        return factory(**kwargs)
    except ValueError as e:
        sub = getattr(e, "field", None)
        raise ConfigError(str(e), f"{path}.{sub}" if sub else path) from e
    except TypeError as e:
        raise ConfigError(str(e), path) from e


def parse_config(data: Mapping[str, Any]) -> ConfigDocument:
    """
    Validate and parse a config mapping

    Raises
    ------
    ConfigError
        For unknown keys, missing matrices, or dimension mismatches
    """
    _check_keys(data, SECTIONS + ("preset",), "")
    for section in ("plant", "auxiliary"):
        if section not in data:
            raise ConfigError("missing required section", section)

    plant = _build(PlantModel, _matrices(data["plant"], PLANT_FIELDS, "plant"), "plant")
    aux = _build(AuxiliarySensorModel, _matrices(data["auxiliary"], AUX_FIELDS, "auxiliary"), "auxiliary")
    aug = _build(build_augmented, {"plant": plant, "aux": aux}, "auxiliary")

    design_section = dict(data.get("design") or {})
    _check_keys(design_section, DESIGN_KEYS, "design")
    if "d_ac" in design_section:
        d_ac = np.array(design_section.pop("d_ac"), dtype=float)
        if d_ac.ndim != 2 or d_ac.shape[0] != aug.dims.n:
            raise ConfigError(f"must be a matrix with n={aug.dims.n} rows, got shape {d_ac.shape}", "design.d_ac")
    else:
        d_ac = np.zeros((aug.dims.n, aug.dims.n))
    design = _build(DesignOptions.from_dict, {"data": design_section}, "design")

    scenario = data.get("scenario")
    if scenario is not None:
        _check_keys(scenario, SCENARIO_KEYS, "scenario")
        scenario = dict(scenario)

    sim_section = dict(data.get("sim") or {})
    _check_keys(sim_section, SIM_KEYS, "sim")
    sim = _build(SimConfig, sim_section, "sim")

    eval_section = dict(data.get("eval") or {})
    _check_keys(eval_section, EVAL_KEYS, "eval")
    settings = _build(EvalSettings, eval_section, "eval")

    bank = data.get("bank")
    if bank is not None:
        _check_keys(bank, ("d_ac", "channels", "metadata"), "bank")

    return ConfigDocument(
        plant=plant,
        auxiliary=aux,
        d_ac=d_ac,
        design=design,
        bank=None if bank is None else dict(bank),
        scenario=scenario,
        sim=sim,
        eval=settings,
        preset=data.get("preset"),
    )


def preset_document(name: str = BENCHMARK_PRESET) -> ConfigDocument:
    """ConfigDocument of a built-in preset"""
    plant, aux, d_ac = load_plant_preset(name)
    return ConfigDocument(plant=plant, auxiliary=aux, d_ac=d_ac, preset=canonical_preset(name))


def load_config(path: Union[str, Path]) -> ConfigDocument:
    """
    Read a JSON or YAML (.yaml / .yml) config file

    Raises
    ------
    ConfigError
        If the file cannot be parsed or fails validation
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            if path.suffix.lower() in (".yaml", ".yml"):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
    except (OSError, json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    logger.debug(f"Loaded config {path}")
    return parse_config(data or {})


def save_config(doc: ConfigDocument, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        if path.suffix.lower() in (".yaml", ".yml"):
            yaml.safe_dump(doc.to_dict(), f, sort_keys=False)
        else:
            json.dump(doc.to_dict(), f, indent=2)
    return path
