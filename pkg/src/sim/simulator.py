"""
Closed-Loop Simulator

Plant, auxiliary sensor dynamics, the filter pair of every channel and the
UIO detectors advanced together as one linear system:

    X = [x; per channel (z_c, z_p, z)]
    w = [u; a_u; a_y; a_c; f1; f2; omega]
    X_{k+1} = Phi X_k + Gamma w_k

Signal wiring:
- u* = u + S_a a_u reaches the plant, the plant-side filter and the UIO
- y_p = C x, y* = y_p + D_a a_y (C&C side)
- the C&C filter runs on (u, y*) and sends z_c; the plant side receives
  z_c + D_ac a_c
- x_hat = z + H y_p, res = y_p - C x_hat

Process and sensor noise enter through the augmented noise matrix; each
step draws omega ~ N(0, diag(Q, R) / dt).

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..design.bank import DetectorBank
from ..design.uio import CATEGORIES
from ..model import AugmentedModel
from ..numerics import DimensionError
from ..threat.signals import SIGNALS, ScenarioTimeline, signal_dim, waveform
from .discretize import discretize, normalize_integrator

logger = logging.getLogger(__name__)

DEFAULT_DT = 0.001
DEFAULT_T_END = 30.0

# order of the exogenous blocks in w, noise last
INPUT_ORDER = SIGNALS


@dataclass
class SimConfig:
    """
    Simulation settings

    Attributes
    ----------
    dt : float
        Step size in seconds
    t_end : float
        Duration in seconds
    seed : int
        Noise seed
    noise_on : bool
        Draw process and sensor noise
    integrator : str
        'zoh' (exact) or 'rk4'
    x0 : sequence of float, optional
        Initial augmented state (default zero)
    z0 : dict, optional
        Category -> initial UIO state (default zero)
    """
    dt: float = DEFAULT_DT
    t_end: float = DEFAULT_T_END
    seed: int = 0
    noise_on: bool = True
    integrator: str = "zoh"
    x0: Optional[Sequence[float]] = None
    z0: Optional[Mapping[str, Sequence[float]]] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_end >= self.dt:
            raise ValueError(f"t_end ({self.t_end}) must be at least dt ({self.dt})")
        self.integrator = normalize_integrator(self.integrator)

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def time_grid(self) -> np.ndarray:
        return self.dt * np.arange(self.steps + 1)

    def to_dict(self) -> Dict:
        return {
            "dt": self.dt,
            "t_end": self.t_end,
            "seed": self.seed,
            "noise_on": self.noise_on,
            "integrator": self.integrator,
            "x0": None if self.x0 is None else [float(v) for v in self.x0],
            "z0": None if self.z0 is None else {k: [float(v) for v in z] for k, z in self.z0.items()},
        }


@dataclass
class ChannelTrace:
    """Filter pair, detector and residual series of one category"""
    category: str
    z_c: np.ndarray
    z_p: np.ndarray
    z: np.ndarray
    x_hat: np.ndarray
    e_p: np.ndarray
    res: np.ndarray

    @property
    def res_norm(self) -> np.ndarray:
        return np.linalg.norm(self.res, axis=1)


@dataclass
class SimulationTrace:
    """
    Result of one simulation

    Attributes
    ----------
    t : np.ndarray
        Time grid (K + 1)
    x : np.ndarray
        Augmented state, (K + 1) x N
    y_p, y_star : np.ndarray
        Plant-side and C&C-side outputs
    u, u_star : np.ndarray
        Command and attacked command
    signals : dict
        Signal name -> injected values
    channels : dict
        Category -> ChannelTrace
    truncated : bool
        Set when the run stopped early on a non-finite state
    """
    t: np.ndarray
    x: np.ndarray
    y_p: np.ndarray
    y_star: np.ndarray
    u: np.ndarray
    u_star: np.ndarray
    signals: Dict[str, np.ndarray]
    channels: Dict[str, ChannelTrace]
    n: int
    seed: int = 0
    scenario: str = "healthy"
    truncated: bool = False
    metadata: Dict = field(default_factory=dict)

    @property
    def categories(self) -> List[str]:
        return [c for c in CATEGORIES if c in self.channels]

    @property
    def x_s(self) -> np.ndarray:
        return self.x[:, :self.n]

    @property
    def x_a(self) -> np.ndarray:
        return self.x[:, self.n:]

    def residual(self, category: str) -> np.ndarray:
        return self.channels[category].res

    def residual_norm(self, category: str) -> np.ndarray:
        return self.channels[category].res_norm

    def max_residual(self) -> Dict[str, float]:
        return {c: float(np.max(self.channels[c].res_norm)) for c in self.categories}

    def to_frame(self, include_states: bool = False) -> pd.DataFrame:
        """
        Residual table, one row per step

        Columns: t, res_<cat> (res_<cat>_<i> for vector residuals), then
        nres_<cat>; with include_states also x_*, y_p_*, y_star_* and the
        filter states.
        """
        data: Dict[str, np.ndarray] = {"t": self.t}
        for category in self.categories:
            data.update(_columns(f"res_{category}", self.channels[category].res))
        for category in self.categories:
            data[f"nres_{category}"] = self.channels[category].res_norm
        if include_states:
            data.update(_columns("x", self.x))
            data.update(_columns("y_p", self.y_p))
            data.update(_columns("y_star", self.y_star))
            for category in self.categories:
                channel = self.channels[category]
                for name in ("z_c", "z_p", "z"):
                    data.update(_columns(f"{name}_{category}", getattr(channel, name)))
        return pd.DataFrame(data)

    def to_csv(self, path: Union[str, Path], include_states: bool = False) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame(include_states).to_csv(path, index=False, float_format="%.17g")
        return path


def _columns(prefix: str, values: np.ndarray) -> Dict[str, np.ndarray]:
    if values.shape[1] == 1:
        return {prefix: values[:, 0]}
    return {f"{prefix}_{i + 1}": values[:, i] for i in range(values.shape[1])}


def _check_bank(aug: AugmentedModel, bank: DetectorBank):
    n, size = aug.dims.n, aug.size
    if bank.d_ac.shape[0] != n:
        raise DimensionError(f"Bank D_ac has {bank.d_ac.shape[0]} rows, model has n={n}", field="d_ac")
    for category in bank.categories:
        channel = bank[category]
        if channel.filter.n != n:
            raise DimensionError(f"{category} filter has size {channel.filter.n}, model has n={n}", field="f_p")
        if channel.uio.size != size:
            raise DimensionError(f"{category} detector has size {channel.uio.size}, model has N={size}", field="f")


def _input_widths(aug: AugmentedModel, n_c: int) -> Dict[str, int]:
    return {s: signal_dim(aug, s, n_c) for s in INPUT_ORDER}


def joint_system(aug: AugmentedModel, bank: DetectorBank):
    """
    Stacked (A_J, B_J) of the plant, every filter pair and every detector

    Returns
    -------
    tuple
        (A_J, B_J, state offsets, input offsets)
    """
    dims = aug.dims
    n, size = dims.n, aug.size
    n_c = bank.d_ac.shape[1]
    widths = _input_widths(aug, n_c)
    widths["omega"] = aug.n_mat.shape[1]

    inputs: Dict[str, slice] = {}
    start = 0
    for name, width in widths.items():
        inputs[name] = slice(start, start + width)
        start += width
    n_inputs = start

    states: Dict[str, slice] = {"x": slice(0, size)}
    start = size
    for category in bank.categories:
        for name, width in (("z_c", n), ("z_p", n), ("z", size)):
            states[f"{name}:{category}"] = slice(start, start + width)
            start += width
    n_states = start

    a_j = np.zeros((n_states, n_states))
    b_j = np.zeros((n_states, n_inputs))
    c = np.asarray(aug.c)
    b_s, b_a_s = np.asarray(aug.plant.b_s), np.asarray(aug.plant.b_a_s)

    sx = states["x"]
    a_j[sx, sx] = aug.a
    b_j[sx, inputs["u"]] = aug.b
    b_j[sx, inputs["a_u"]] = aug.b_a
    b_j[sx, inputs["f1"]] = aug.f1
    b_j[sx, inputs["f2"]] = aug.f2
    b_j[sx, inputs["omega"]] = aug.n_mat

    for category in bank.categories:
        flt, uio = bank[category].filter, bank[category].uio
        zc, zp, z = (states[f"{name}:{category}"] for name in ("z_c", "z_p", "z"))

        # C&C side: (u, y*)
        a_j[zc, zc] = flt.f_p
        a_j[zc, sx] = flt.k_p @ c
        b_j[zc, inputs["u"]] = flt.t_p @ b_s
        b_j[zc, inputs["a_y"]] = flt.k_p @ aug.d_a

        # plant side: (u*, y_p, z_c + D_ac a_c)
        a_j[zp, zp] = flt.f_p + flt.l_p
        a_j[zp, zc] = -flt.l_p
        a_j[zp, sx] = flt.k_p @ c
        b_j[zp, inputs["u"]] = flt.t_p @ b_s
        b_j[zp, inputs["a_u"]] = flt.t_p @ b_a_s
        b_j[zp, inputs["a_c"]] = -flt.l_p @ bank.d_ac

        # detector: (u*, y_p, z_p - z_c - D_ac a_c)
        a_j[z, z] = uio.f
        a_j[z, sx] = uio.k @ c
        a_j[z, zp] = uio.l
        a_j[z, zc] = -uio.l
        b_j[z, inputs["u"]] = uio.t @ aug.b
        b_j[z, inputs["a_u"]] = uio.t @ aug.b_a
        b_j[z, inputs["a_c"]] = -uio.l @ bank.d_ac

    return a_j, b_j, states, inputs


def _noise_factor(aug: AugmentedModel) -> np.ndarray:
    """S with S S^T = diag(Q, R)"""
    values, vectors = np.linalg.eigh(aug.noise_cov)
    return vectors * np.sqrt(np.clip(values, 0.0, None))


def _initial_state(aug: AugmentedModel, bank: DetectorBank, cfg: SimConfig, states: Dict[str, slice], n_states: int):
    x0 = np.zeros(n_states)
    if cfg.x0 is not None:
        value = np.asarray(cfg.x0, dtype=float).reshape(-1)
        if value.size != aug.size:
            raise DimensionError(f"x0 must have N={aug.size} entries, got {value.size}", field="x0")
        x0[states["x"]] = value
    for category, value in (cfg.z0 or {}).items():
        if category not in bank:
            raise ValueError(f"z0 names category '{category}' missing from the bank")
        value = np.asarray(value, dtype=float).reshape(-1)
        if value.size != aug.size:
            raise DimensionError(f"z0[{category}] must have N={aug.size} entries, got {value.size}", field="z0")
        x0[states[f"z:{category}"]] = value
    return x0


def simulate(
    aug: AugmentedModel,
    bank: DetectorBank,
    timeline: Optional[ScenarioTimeline] = None,
    cfg: Optional[SimConfig] = None,
) -> SimulationTrace:
    """
    Run one seeded simulation

    Parameters
    ----------
    aug : AugmentedModel
        Augmented system
    bank : DetectorBank
        Filters and detectors
    timeline : ScenarioTimeline, optional
        Injected signals (default: healthy, u = 0)
    cfg : SimConfig, optional
        Step, duration, seed and noise settings

    Returns
    -------
    SimulationTrace
        Truncated at the last finite step, with ``truncated`` set, when the
        state overflows

    Raises
    ------
    DimensionError
        If the bank or the timeline does not fit the model
    """
    timeline = timeline or ScenarioTimeline()
    cfg = cfg or SimConfig()
    _check_bank(aug, bank)
    n_c = bank.d_ac.shape[1]
    timeline.validate(aug, n_c)

    a_j, b_j, states, inputs = joint_system(aug, bank)
    phi, gamma = discretize(a_j, b_j, cfg.dt, cfg.integrator)
    t = cfg.time_grid()
    steps = t.size

    widths = _input_widths(aug, n_c)
    values = {s: np.zeros((steps, widths[s])) for s in INPUT_ORDER}
    online = []
    for gen in timeline.generators:
        if gen.online:
            gen.reset(cfg.dt, cfg.integrator)
            online.append(gen)
        else:
            values[gen.signal] += gen.evaluate(t)

    n_noise = aug.n_mat.shape[1]
    if cfg.noise_on:
        rng = np.random.default_rng(cfg.seed)
        noise = rng.standard_normal((steps, n_noise)) @ _noise_factor(aug).T / np.sqrt(cfg.dt)
    else:
        noise = np.zeros((steps, n_noise))

    c = np.asarray(aug.c)
    sx = states["x"]
    state = np.zeros((steps, a_j.shape[0]))
    state[0] = _initial_state(aug, bank, cfg, states, a_j.shape[0])
    w = np.zeros(b_j.shape[1])
    w[inputs["omega"]] = noise[0]
    length = steps
    truncated = False

    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            if online:
                y_p = c @ state[k, sx]
                for gen in online:
                    values[gen.signal][k] += gen.sample(t[k], y_p)
            if k == steps - 1:
                break
            for name in INPUT_ORDER:
                w[inputs[name]] = values[name][k]
            w[inputs["omega"]] = noise[k]
            state[k + 1] = phi @ state[k] + gamma @ w
            if not np.all(np.isfinite(state[k + 1])):
                length = k + 1
                truncated = True
                logger.warning(f"Non-finite state at t = {t[k + 1]:.4g} s; trace truncated to {length} steps")
                break

    state = state[:length]
    x = state[:, sx]
    y_p = x @ c.T
    signals = {s: values[s][:length] for s in INPUT_ORDER}
    y_star = y_p + signals["a_y"] @ np.asarray(aug.d_a).T
    u_star = signals["u"] + signals["a_u"] @ np.asarray(aug.s_a).T

    channels = {}
    for category in bank.categories:
        uio = bank[category].uio
        z_c = state[:, states[f"z_c:{category}"]]
        z_p = state[:, states[f"z_p:{category}"]]
        z = state[:, states[f"z:{category}"]]
        x_hat = z + y_p @ uio.h.T
        res = y_p - x_hat @ c.T
        channels[category] = ChannelTrace(category, z_c, z_p, z, x_hat, z_p - z_c, res)

    return SimulationTrace(
        t=t[:length],
        x=x,
        y_p=y_p,
        y_star=y_star,
        u=signals["u"],
        u_star=u_star,
        signals=signals,
        channels=channels,
        n=aug.dims.n,
        seed=cfg.seed,
        scenario=timeline.name,
        truncated=truncated,
        metadata={"config": cfg.to_dict(), "timeline": timeline.describe()},
    )


PROBE_ONSET = 1.0
PROBE_ACTUATOR_FAULT = 40.0
PROBE_SENSOR_FAULT = 20.0


def probe_timeline(aug: AugmentedModel, bank: DetectorBank, active: Iterable[str], t0: float = PROBE_ONSET) -> ScenarioTimeline:
    """
    Timeline with the named anomalies at benchmark magnitudes

    a_u and a_y are steps spaced from 2 to 1, a_c a unit sinusoid, f1 = 40
    and f2 = 20.
    """
    active = list(active)
    n_c = bank.d_ac.shape[1]
    generators = []
    for signal in active:
        width = signal_dim(aug, signal, n_c)
        if signal in ("a_u", "a_y"):
            generators.append(waveform(signal, "step", np.linspace(2.0, 1.0, width) if width > 1 else [2.0], t0))
        elif signal == "a_c":
            generators.append(waveform(signal, "sinusoid", np.ones(width), t0, frequency=0.5))
        elif signal == "f1":
            generators.append(waveform(signal, "step", np.full(width, PROBE_ACTUATOR_FAULT), t0))
        elif signal == "f2":
            generators.append(waveform(signal, "step", np.full(width, PROBE_SENSOR_FAULT), t0))
        else:
            raise ValueError(f"Unknown anomaly '{signal}'. Expected a_u, a_y, a_c, f1 or f2")
    return ScenarioTimeline(name=f"probe-{'-'.join(active) or 'none'}", generators=generators)


def decoupling_probe(
    aug: AugmentedModel,
    bank: DetectorBank,
    category: str,
    active: Iterable[str],
    cfg: Optional[SimConfig] = None,
) -> float:
    """
    Peak ||res_category|| of a noise-free run with only the named anomalies

    Parameters
    ----------
    category : str
        Residual to measure
    active : iterable of str
        Anomaly signals to switch on (a_u, a_y, a_c, f1, f2)
    cfg : SimConfig, optional
        Noise is switched off regardless of cfg.noise_on
    """
    if category not in bank:
        raise ValueError(f"Bank has no '{category}' channel")
    cfg = replace(cfg or SimConfig(), noise_on=False)
    trace = simulate(aug, bank, probe_timeline(aug, bank, list(active)), cfg)
    return float(np.max(trace.residual_norm(category)))
