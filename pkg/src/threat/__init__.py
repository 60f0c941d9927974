"""
Threat Module

Attack and fault signals injected into the simulation.

Modules:
- signals: SignalGenerator base, waveforms, bias faults, link attacks, ScenarioTimeline
- attacks: zero-dynamics, covert, replay and undetectable controllable attacks
- scenarios: named benchmark scenarios and config event parsing
"""

# signals first: attacks pulls in the sim package, whose simulator needs it
from .signals import (
    ANOMALY_SIGNALS,
    ATTACK_SIGNALS,
    SIGNALS,
    OnlineGenerator,
    ScenarioTimeline,
    SignalGenerator,
    WaveformGenerator,
    WaveformKind,
    bias_fault,
    comm_link_attack,
    signal_dim,
    waveform,
)
from .attacks import (
    CovertAttack,
    ReplayAttack,
    UndetectableControllableAttack,
    ZeroDynamicsGenerator,
    covert_attack,
    live_replay_attack,
    replay_attack,
    undetectable_controllable_attack,
    zero_dynamics_attack,
)
from .scenarios import SCENARIOS, covert_amplitude, generators_from_event, named_scenario, timeline_from_events

__all__ = [
    "ANOMALY_SIGNALS",
    "ATTACK_SIGNALS",
    "SIGNALS",
    "OnlineGenerator",
    "ScenarioTimeline",
    "SignalGenerator",
    "WaveformGenerator",
    "WaveformKind",
    "bias_fault",
    "comm_link_attack",
    "signal_dim",
    "waveform",
    "CovertAttack",
    "ReplayAttack",
    "UndetectableControllableAttack",
    "ZeroDynamicsGenerator",
    "covert_attack",
    "live_replay_attack",
    "replay_attack",
    "undetectable_controllable_attack",
    "zero_dynamics_attack",
    "SCENARIOS",
    "covert_amplitude",
    "generators_from_event",
    "named_scenario",
    "timeline_from_events",
]
