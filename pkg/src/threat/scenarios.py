"""
Scenario Timelines

Builders for the named benchmark scenarios and for the event lists of a
config document.

Named scenarios:
- zero-dynamics: zero-dynamics attack from t = 0
- covert: covert pair with a_u = [2, 1] from t = 10 s
- faults: f1 = 40 from t = 5 s, f2 = 20 from t = 10 s
- simultaneous: covert pair from t = 0 plus both faults
- degraded-c9: undetectable controllable attack on a bank whose AA filter
  misses the rank condition

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from typing import Any, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..design.bank import DetectorBank, degrade_condition9
from ..model import AugmentedModel
from .attacks import covert_attack, live_replay_attack, undetectable_controllable_attack, zero_dynamics_attack
from .signals import (
    ScenarioTimeline,
    SignalGenerator,
    WaveformKind,
    bias_fault,
    comm_link_attack,
    signal_dim,
    waveform,
)

logger = logging.getLogger(__name__)

SCENARIOS = ("zero-dynamics", "covert", "faults", "simultaneous", "degraded-c9")

DEFAULT_T_END = 30.0
ACTUATOR_FAULT = 40.0
SENSOR_FAULT = 20.0
ACTUATOR_FAULT_ONSET = 5.0
SENSOR_FAULT_ONSET = 10.0
COVERT_ONSET = 10.0

EVENT_KEYS = {"signal", "kind", "t0", "params"}
ATTACK_KINDS = ("bias", "zero-dynamics", "covert", "replay", "undetectable")


def covert_amplitude(m_a: int) -> np.ndarray:
    """[2, 1] for two attack channels, evenly spaced from 2 to 1 otherwise"""
    return np.linspace(2.0, 1.0, m_a) if m_a > 1 else np.array([2.0])


def _fault_generators(aug: AugmentedModel) -> List[SignalGenerator]:
    return [
        bias_fault("f1", ACTUATOR_FAULT, ACTUATOR_FAULT_ONSET, aug.dims.m_f),
        bias_fault("f2", SENSOR_FAULT, SENSOR_FAULT_ONSET, aug.dims.p_f),
    ]


def _covert_pair(aug: AugmentedModel, t0: float, amplitude=None) -> List[SignalGenerator]:
    amplitude = covert_amplitude(aug.dims.m_a) if amplitude is None else amplitude
    a_u = waveform("a_u", "step", amplitude, t0)
    return [a_u, covert_attack(aug, a_u)]


def named_scenario(
    name: str,
    aug: AugmentedModel,
    bank: DetectorBank,
    t_end: float = DEFAULT_T_END,
) -> Tuple[ScenarioTimeline, DetectorBank]:
    """
    Timeline of a named scenario and the bank it runs against

    Parameters
    ----------
    name : str
        One of SCENARIOS
    aug : AugmentedModel
        Augmented system
    bank : DetectorBank
        Compliant bank; "degraded-c9" returns its degraded copy

    Returns
    -------
    tuple
        (ScenarioTimeline, DetectorBank)

    Raises
    ------
    ValueError
        If the name is unknown
    """
    if name == "zero-dynamics":
        generators = [zero_dynamics_attack(aug.plant, scale=1.0, t0=0.0)]
    elif name == "covert":
        generators = _covert_pair(aug, COVERT_ONSET)
    elif name == "faults":
        generators = _fault_generators(aug)
    elif name == "simultaneous":
        generators = _covert_pair(aug, 0.0) + _fault_generators(aug)
    elif name == "degraded-c9":
        bank = degrade_condition9(bank)
        channel = bank["AA"]
        generators = [undetectable_controllable_attack(channel.filter, channel.uio.l, aug.plant.b_a_s, t0=0.0)]
    else:
        raise ValueError(f"Unknown scenario '{name}'. Valid scenarios: {', '.join(SCENARIOS)}")

    timeline = ScenarioTimeline(name=name, generators=generators, t_end=t_end)
    timeline.validate(aug, bank.d_ac.shape[1])
    return timeline, bank


def _amplitude(params: Mapping[str, Any], width: int, signal: str) -> np.ndarray:
    if "amplitude" not in params:
        raise ValueError(f"Event on '{signal}' needs params.amplitude")
    amplitude = np.asarray(params["amplitude"], dtype=float)
    if amplitude.ndim == 0:
        amplitude = np.full(width, float(amplitude))
    return amplitude.reshape(-1)


def generators_from_event(
    event: Mapping[str, Any],
    aug: AugmentedModel,
    bank: Optional[DetectorBank] = None,
) -> List[SignalGenerator]:
    """
    Generators declared by one config event {signal, kind, t0, params}

    Kinds:
    - constant, step, exponential, sinusoid, ramp: waveform on any signal
      (params amplitude, rate, frequency, phase); on a_c it is checked
      against the bank's D_ac
    - bias: step on f1/f2 (params magnitude)
    - zero-dynamics: a_u (params scale)
    - covert: a_u step plus its cancelling a_y (params amplitude)
    - replay: a_u step at t_a plus an a_y that records y_p before t_a and
      replays it over the window (params window = [t_a, t_b], amplitude)
    - undetectable: a_u against the bank's channel (params category,
      scale, rate)

    Raises
    ------
    ValueError
        For unknown keys or kinds, or a missing bank where one is needed
    """
    unknown = set(event) - EVENT_KEYS
    if unknown:
        raise ValueError(f"Unknown event keys: {sorted(unknown)}")
    if "kind" not in event:
        raise ValueError("Event needs a 'kind'")

    kind = str(event["kind"])
    t0 = float(event.get("t0", 0.0))
    params = dict(event.get("params") or {})
    signal = event.get("signal")

    if kind == "bias":
        signal = signal or "f1"
        width = signal_dim(aug, signal)
        return [bias_fault(signal, params.get("magnitude", 0.0), t0, width)]
    if kind == "zero-dynamics":
        return [zero_dynamics_attack(aug.plant, float(params.get("scale", 1.0)), t0)]
    if kind == "covert":
        amplitude = params.get("amplitude")
        return _covert_pair(aug, t0, None if amplitude is None else _amplitude(params, aug.dims.m_a, "a_u"))
    if kind == "replay":
        if "window" not in params:
            raise ValueError("Replay events need params.window = [t_a, t_b]")
        t_a, t_b = (float(v) for v in params["window"])
        amplitude = params.get("amplitude")
        amplitude = covert_amplitude(aug.dims.m_a) if amplitude is None else _amplitude(params, aug.dims.m_a, "a_u")
        replay, a_u = live_replay_attack(aug, (t_a, t_b), waveform("a_u", "step", amplitude, t_a))
        return [a_u, replay]
    if kind == "undetectable":
        if bank is None:
            raise ValueError("Undetectable attack events need a detector bank")
        channel = bank[params.get("category", "AA")]
        return [undetectable_controllable_attack(
            channel.filter, channel.uio.l, aug.plant.b_a_s,
            scale=float(params.get("scale", 1.0)), t0=t0, rate=float(params.get("rate", 0.5)),
        )]

    try:
        WaveformKind(kind)
    except ValueError:
        valid = [k.value for k in WaveformKind] + list(ATTACK_KINDS)
        raise ValueError(f"Unknown event kind '{kind}'. Expected one of {valid}") from None
    if signal is None:
        raise ValueError(f"Waveform event '{kind}' needs a 'signal'")

    n_c = None if bank is None else bank.d_ac.shape[1]
    width = signal_dim(aug, signal, n_c)
    shape = {k: v for k, v in params.items() if k != "amplitude"}
    generator = waveform(signal, kind, _amplitude(params, width, signal), t0, **shape)
    if signal == "a_c" and bank is not None:
        generator = comm_link_attack(bank.d_ac, generator)
    return [generator]


def timeline_from_events(
    name: str,
    events: Sequence[Mapping[str, Any]],
    aug: AugmentedModel,
    bank: Optional[DetectorBank] = None,
    t_end: Optional[float] = None,
) -> ScenarioTimeline:
    """Timeline assembled from config events, width-checked against the model"""
    generators: List[SignalGenerator] = []
    for index, event in enumerate(events):
        try:
            generators.extend(generators_from_event(event, aug, bank))
        except ValueError as e:
            raise ValueError(f"scenario.events[{index}]: {e}") from e

    timeline = ScenarioTimeline(name=name, generators=generators, t_end=t_end)
    timeline.validate(aug, None if bank is None else bank.d_ac.shape[1])
    logger.debug(f"Scenario '{name}' with signals {timeline.active_signals}")
    return timeline
