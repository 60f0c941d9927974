"""
CAFDI Toolkit

Detection and isolation of cyber attacks and faults in cyber-physical
systems with a bank of filters and unknown input observers.

Packages:
- numerics: rank, subspaces, invariant zeros, observer gains
- model: plant, auxiliary sensor dynamics, augmented system
- design: UIO detectors, side filters, condition checks, detector bank
- threat: attack and fault generators, named scenarios
- sim: discretization and closed-loop simulation
- evaluation: thresholds, detection, TPR campaigns
- provenance: audit trail, checksums, metadata
- cli: command-line front end
"""

__version__ = "0.1.0"
