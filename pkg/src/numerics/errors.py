"""
Exception Types

Error kinds shared by every package. Each class subclasses the builtin that
a plain validation check would raise for the same situation, so callers that
catch ValueError / RuntimeError keep working.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

from typing import Optional


class InvalidInputError(ValueError):
    """Non-finite entries, non-positive tolerances and similar bad inputs"""


class DimensionError(ValueError):
    """Shapes that do not conform; ``field`` names the offending argument"""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class DesignInfeasibleError(RuntimeError):
    """
    A design step could not satisfy one of its conditions

    Attributes
    ----------
    condition_id : str or None
        Identifier of the failing condition, e.g. "P1.C7", or "A3" for the
        rank(D_ac) < n assumption
    """

    def __init__(self, message: str, condition_id: Optional[str] = None):
        super().__init__(message)
        self.condition_id = condition_id


class NonConvergenceError(RuntimeError):
    """Subspace recursion did not reach a fixpoint within the iteration cap"""


class UnsupportedAttackError(ValueError):
    """The plant does not admit the requested attack (e.g. no real unstable zero)"""


class AttackInfeasibleError(ValueError):
    """The design or the sensor channels rule out the requested stealthy attack"""


class CovertnessInfeasibleError(AttackInfeasibleError):
    """Exact output cancellation is impossible (D_a rank deficient or not covering Im C)"""


class InvalidWindowError(ValueError):
    """Replay window is not covered by the recording"""
