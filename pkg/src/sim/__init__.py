"""
Simulation Module

Seeded time-domain simulation of the plant, both filter sides and the UIO
detectors of a bank.

Modules:
- discretize: zero-order-hold and RK4 step maps
- simulator: SimConfig, SimulationTrace, simulate, decoupling_probe
"""

# discretize first: the threat package imports it while sim is initializing
from .discretize import INTEGRATORS, discretize, normalize_integrator
from .simulator import (
    ChannelTrace,
    SimConfig,
    SimulationTrace,
    decoupling_probe,
    joint_system,
    probe_timeline,
    simulate,
)

__all__ = [
    "INTEGRATORS",
    "discretize",
    "normalize_integrator",
    "ChannelTrace",
    "SimConfig",
    "SimulationTrace",
    "decoupling_probe",
    "joint_system",
    "probe_timeline",
    "simulate",
]
