"""
Anomaly Signal Generators

Time signals injected into the simulation, one generator per event:

- u   : control command
- a_u : actuator attack (m_a)
- a_y : sensor attack (p_a)
- a_c : link attack (n_c)
- f1  : actuator fault (m_f)
- f2  : pseudo actuator fault (p_f)

Every generator is exactly zero before its onset t0. Waveform generators are
pure functions of time; online generators keep internal state, are reset by
the simulator before a run and sampled once per step with (t_k, y_p(t_k)).

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..model import AugmentedModel

logger = logging.getLogger(__name__)

SIGNALS = ("u", "a_u", "a_y", "a_c", "f1", "f2")
ANOMALY_SIGNALS = ("a_u", "a_y", "a_c", "f1", "f2")
ATTACK_SIGNALS = ("a_u", "a_y", "a_c")


class WaveformKind(Enum):
    CONSTANT = "constant"
    STEP = "step"
    EXPONENTIAL = "exponential"
    SINUSOID = "sinusoid"
    RAMP = "ramp"


def signal_dim(aug: AugmentedModel, signal: str, n_c: Optional[int] = None) -> int:
    """Width of a signal for the given model (n_c defaults to n)"""
    dims = aug.dims
    widths = {
        "u": dims.m,
        "a_u": dims.m_a,
        "a_y": dims.p_a,
        "a_c": dims.n if n_c is None else n_c,
        "f1": dims.m_f,
        "f2": dims.p_f,
    }
    if signal not in widths:
        raise ValueError(f"Unknown signal '{signal}'. Expected one of {SIGNALS}")
    return widths[signal]


def _constant(tau: np.ndarray, amplitude: np.ndarray, params: Dict[str, Any]) -> np.ndarray:
    return np.ones((tau.size, 1)) * amplitude


def _exponential(tau: np.ndarray, amplitude: np.ndarray, params: Dict[str, Any]) -> np.ndarray:
    rate = float(params.get("rate", 0.0))
    return np.exp(rate * tau)[:, None] * amplitude


def _sinusoid(tau: np.ndarray, amplitude: np.ndarray, params: Dict[str, Any]) -> np.ndarray:
    frequency = float(params.get("frequency", 1.0))
    phase = float(params.get("phase", 0.0))
    return np.sin(2.0 * np.pi * frequency * tau + phase)[:, None] * amplitude


def _ramp(tau: np.ndarray, amplitude: np.ndarray, params: Dict[str, Any]) -> np.ndarray:
    return tau[:, None] * amplitude


WAVEFORMS: Dict[WaveformKind, Callable] = {
    WaveformKind.CONSTANT: _constant,
    WaveformKind.STEP: _constant,
    WaveformKind.EXPONENTIAL: _exponential,
    WaveformKind.SINUSOID: _sinusoid,
    WaveformKind.RAMP: _ramp,
}


@dataclass
class SignalGenerator:
    """
    Base generator

    Attributes
    ----------
    signal : str
        Which input the generator drives (see SIGNALS)
    kind : str
        Waveform or attack name
    t0 : float
        Onset time in seconds
    dim : int
        Output width
    params : dict
        Kind-specific parameters, kept for reports and config round trips
    """
    signal: str
    kind: str
    t0: float
    dim: int
    params: Dict[str, Any] = field(default_factory=dict)

    online = False

    def __post_init__(self):
        if self.signal not in SIGNALS:
            raise ValueError(f"Unknown signal '{self.signal}'. Expected one of {SIGNALS}")
        if not np.isfinite(self.t0):
            raise ValueError(f"Onset must be finite, got {self.t0}")
        if self.dim < 0:
            raise ValueError(f"Signal width must be non-negative, got {self.dim}")

    def evaluate(self, t) -> np.ndarray:
        """Values at the times t, shape (len(t), dim); zero before t0"""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros((t.size, self.dim))
        active = t >= self.t0
        if np.any(active):
            out[active] = self._active_values(t[active] - self.t0)
        return out

    def __call__(self, t: float) -> np.ndarray:
        return self.evaluate([t])[0]

    def _active_values(self, tau: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> Dict[str, Any]:
        return {"signal": self.signal, "kind": self.kind, "t0": self.t0, "params": _jsonable(self.params)}


@dataclass
class WaveformGenerator(SignalGenerator):
    """Pure waveform amplitude * shape(t - t0)"""
    amplitude: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        super().__post_init__()
        WaveformKind(self.kind)
        self.amplitude = np.asarray(self.amplitude, dtype=float).reshape(-1)
        if self.amplitude.size != self.dim:
            raise ValueError(f"Amplitude has {self.amplitude.size} entries, signal '{self.signal}' has {self.dim}")
        if not np.all(np.isfinite(self.amplitude)):
            raise ValueError("Amplitude must be finite")

    def _active_values(self, tau: np.ndarray) -> np.ndarray:
        return WAVEFORMS[WaveformKind(self.kind)](tau, self.amplitude, self.params)


class OnlineGenerator(SignalGenerator):
    """Stateful generator advanced by the simulation that owns it"""

    online = True

    def reset(self, dt: float, integrator: str = "zoh"):
        raise NotImplementedError

    def sample(self, t: float, y_p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _active_values(self, tau: np.ndarray) -> np.ndarray:
        raise TypeError(f"{self.kind} generator is online; it can only be sampled inside a simulation")


def waveform(signal: str, kind: str, amplitude, t0: float = 0.0, **params) -> WaveformGenerator:
    """
    Build a waveform generator

    Parameters
    ----------
    signal : str
        Target input
    kind : str
        constant, step, exponential (rate), sinusoid (frequency, phase) or ramp
    amplitude : array_like
        Vector of the signal's width

    Examples
    --------
    >>> waveform("f1", "step", [40.0], t0=5.0)(6.0)
    array([40.])
    """
    amplitude = np.atleast_1d(np.asarray(amplitude, dtype=float))
    return WaveformGenerator(signal=signal, kind=kind, t0=float(t0), dim=amplitude.size,
                             params=dict(params, amplitude=amplitude.tolist()), amplitude=amplitude)


def bias_fault(signal: str, magnitude, t0: float = 0.0, dim: int = 1) -> WaveformGenerator:
    """
    Step fault: 0 before t0, magnitude afterwards

    Parameters
    ----------
    signal : str
        'f1' (actuator fault) or 'f2' (pseudo actuator fault)
    magnitude : float or array_like
        Scalar (broadcast to dim) or vector
    """
    if signal not in ("f1", "f2"):
        raise ValueError(f"Bias faults drive 'f1' or 'f2', got '{signal}'")
    magnitude = np.asarray(magnitude, dtype=float)
    amplitude = np.full(dim, float(magnitude)) if magnitude.ndim == 0 else magnitude.reshape(-1)
    if not np.all(np.isfinite(amplitude)):
        raise ValueError("Fault magnitude must be finite")
    return waveform(signal, "step", amplitude, t0)


def comm_link_attack(d_ac, source: SignalGenerator) -> SignalGenerator:
    """
    Tag a waveform as the link attack a_c

    Raises
    ------
    ValueError
        If the waveform width differs from the columns of D_ac, or the source
        is online
    """
    n_c = np.atleast_2d(np.asarray(d_ac, dtype=float)).shape[1]
    if source.dim != n_c:
        raise ValueError(f"Link attack needs width {n_c} (columns of D_ac), got {source.dim}")
    if source.online:
        raise ValueError("Link attacks take a pure waveform")
    if not isinstance(source, WaveformGenerator):
        raise TypeError(f"Expected WaveformGenerator, got {type(source)}")
    return WaveformGenerator(signal="a_c", kind=source.kind, t0=source.t0, dim=source.dim,
                             params=dict(source.params), amplitude=source.amplitude)


@dataclass
class ScenarioTimeline:
    """
    Named set of generators for one simulation

    Attributes
    ----------
    name : str
        Scenario label
    generators : list of SignalGenerator
        Several generators may drive the same signal; their outputs add up
    t_end : float, optional
        Suggested duration in seconds
    """
    name: str = "healthy"
    generators: List[SignalGenerator] = field(default_factory=list)
    t_end: Optional[float] = None

    def for_signal(self, signal: str) -> List[SignalGenerator]:
        return [g for g in self.generators if g.signal == signal]

    @property
    def active_signals(self) -> List[str]:
        return [s for s in SIGNALS if self.for_signal(s)]

    def without(self, signals) -> "ScenarioTimeline":
        """Copy without the generators driving the named signals"""
        signals = set(signals)
        return ScenarioTimeline(
            name=f"{self.name}-without-{'-'.join(sorted(signals))}",
            generators=[g for g in self.generators if g.signal not in signals],
            t_end=self.t_end,
        )

    def validate(self, aug: AugmentedModel, n_c: Optional[int] = None):
        """
        Raises
        ------
        ValueError
            If a generator width does not match the model
        """
        for gen in self.generators:
            expected = signal_dim(aug, gen.signal, n_c)
            if gen.dim != expected:
                raise ValueError(
                    f"Scenario '{self.name}': {gen.kind} generator on {gen.signal} has width {gen.dim}, expected {expected}"
                )

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "t_end": self.t_end, "events": [g.describe() for g in self.generators]}


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value
