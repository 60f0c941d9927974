"""
Attack Constructions

Adversaries with full model knowledge:

- zero-dynamics attack: actuator signal along a real non-minimum-phase zero
- covert attack: actuator attack plus a sensor attack that cancels its
  footprint at the C&C output
- replay attack: sensor attack that shows the C&C side a recorded segment
- undetectable controllable attack: actuator attack confined to the
  controllability subspace of a filter whose design misses the rank condition

The covert, replay and undetectable generators are online: the simulator
resets them and samples them once per step, so their integrators share its
step size and discretization.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from ..design.filters import SideFilter
from ..design.geometry import controllability_subspace
from ..model import AugmentedModel, PlantModel
from ..numerics import (
    DEFAULT_TOL,
    AttackInfeasibleError,
    CovertnessInfeasibleError,
    InvalidWindowError,
    UnsupportedAttackError,
    as_matrix,
    invariant_zeros,
    preimage,
    rank_tol,
    zero_direction,
)
from ..sim.discretize import discretize
from .signals import OnlineGenerator, SignalGenerator, WaveformGenerator

logger = logging.getLogger(__name__)

SPAN_TOL = 1e-8


@dataclass
class ZeroDynamicsGenerator(WaveformGenerator):
    """Exponential actuator attack along a zero direction"""
    zero: float = 0.0
    state_direction: np.ndarray = field(default_factory=lambda: np.zeros(0))
    input_direction: np.ndarray = field(default_factory=lambda: np.zeros(0))


def zero_dynamics_attack(plant: PlantModel, scale: float = 1.0, t0: float = 0.0) -> ZeroDynamicsGenerator:
    """
    Zero-dynamics attack a_u(t) = scale * S_a^+ u0 * exp(z (t - t0))

    Parameters
    ----------
    plant : PlantModel
        Physical plant (A^s, B^s, C^s, S_a)
    scale : float
        Attack amplitude
    t0 : float
        Onset; the plant state is left wherever it is at t0

    Returns
    -------
    ZeroDynamicsGenerator
        Records the zero z, state direction x0 and input direction u0

    Raises
    ------
    UnsupportedAttackError
        If the plant has no real zero with Re(z) > 0, or the attack channels
        S_a cannot produce u0
    """
    if not isinstance(plant, PlantModel):
        raise TypeError(f"Expected PlantModel, got {type(plant)}")

    zero_set = invariant_zeros(plant.a_s, plant.b_s, plant.c_s)
    real = zero_set.real_zeros()
    candidates = real[real > 0]
    if candidates.size == 0:
        raise UnsupportedAttackError(f"Plant has no real non-minimum-phase zero (zeros: {zero_set.zeros})")
    z = float(np.max(candidates))

    x0, u0 = zero_direction(plant.a_s, plant.b_s, plant.c_s, z=z)
    s_a = plant.s_a
    direction = np.linalg.pinv(s_a) @ u0
    if np.linalg.norm(s_a @ direction - u0) > SPAN_TOL * max(1.0, np.linalg.norm(u0)):
        raise UnsupportedAttackError("Attack channels S_a do not span the zero input direction")

    amplitude = float(scale) * direction
    logger.info(f"Zero-dynamics attack at z = {z:.6g}, u0 = {np.round(u0, 4).tolist()}")
    return ZeroDynamicsGenerator(
        signal="a_u",
        kind="exponential",
        t0=float(t0),
        dim=amplitude.size,
        params={"rate": z, "scale": float(scale), "amplitude": amplitude.tolist()},
        amplitude=amplitude,
        zero=z,
        state_direction=x0,
        input_direction=u0,
    )


def _check_cancellable(d_a: np.ndarray, c: np.ndarray, tol: float) -> np.ndarray:
    """D_a^+ after checking full column rank of D_a and Im C ⊆ Im D_a"""
    if d_a.shape[1] == 0 or rank_tol(d_a, tol) < d_a.shape[1]:
        raise CovertnessInfeasibleError(f"D_a ({d_a.shape[0]}x{d_a.shape[1]}) must have full column rank")
    d_a_pinv = np.linalg.pinv(d_a)
    leak = np.linalg.norm(c - d_a @ d_a_pinv @ c)
    if leak > SPAN_TOL * max(1.0, np.linalg.norm(c)):
        raise CovertnessInfeasibleError("Sensor attack channels D_a do not cover Im C")
    return d_a_pinv


@dataclass
class CovertAttack(OnlineGenerator):
    """
    Sensor attack a_y = -D_a^+ C x_cov cancelling the actuator attack at y*

    Attributes
    ----------
    source : SignalGenerator
        Actuator attack a_u (pure waveform)
    a, b_a, c : np.ndarray
        Augmented matrices used to integrate x_cov
    d_a_pinv : np.ndarray
        Left inverse of D_a
    """
    source: Optional[SignalGenerator] = None
    a: np.ndarray = field(default=None, repr=False)
    b_a: np.ndarray = field(default=None, repr=False)
    c: np.ndarray = field(default=None, repr=False)
    d_a_pinv: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        super().__post_init__()
        self._x_cov = None
        self._phi = None
        self._gamma = None

    def reset(self, dt: float, integrator: str = "zoh"):
        self._phi, self._gamma = discretize(self.a, self.b_a, dt, integrator)
        self._x_cov = np.zeros(self.a.shape[0])

    def sample(self, t: float, y_p: np.ndarray) -> np.ndarray:
        if self._x_cov is None:
            raise RuntimeError("CovertAttack.sample called before reset")
        a_y = -self.d_a_pinv @ (self.c @ self._x_cov)
        self._x_cov = self._phi @ self._x_cov + self._gamma @ self.source(t)
        return a_y if t >= self.t0 else np.zeros(self.dim)

    @property
    def state(self) -> Optional[np.ndarray]:
        return None if self._x_cov is None else self._x_cov.copy()


def covert_attack(aug: AugmentedModel, a_u: SignalGenerator, tol: float = DEFAULT_TOL) -> CovertAttack:
    """
    Sensor attack that hides a_u from the C&C output

    x_cov starts from rest and follows x_cov' = A x_cov + B_a a_u with the
    simulator's step, so y* = C x + D_a a_y matches the attack-free y* at
    every sample.

    Parameters
    ----------
    aug : AugmentedModel
        Augmented system
    a_u : SignalGenerator
        Pure actuator attack

    Returns
    -------
    CovertAttack
        Online a_y generator; use it together with a_u

    Raises
    ------
    CovertnessInfeasibleError
        If D_a is rank deficient or does not cover Im C
    """
    if a_u.signal != "a_u":
        raise ValueError(f"Covert attack pairs with an a_u generator, got '{a_u.signal}'")
    if a_u.online:
        raise ValueError("Covert attack needs a pure a_u waveform")
    if a_u.dim != aug.dims.m_a:
        raise ValueError(f"a_u has width {a_u.dim}, model expects m_a={aug.dims.m_a}")

    d_a = as_matrix(aug.d_a, "d_a")
    d_a_pinv = _check_cancellable(d_a, aug.c, tol)
    return CovertAttack(
        signal="a_y",
        kind="covert",
        t0=a_u.t0,
        dim=aug.dims.p_a,
        params={"source": a_u.describe()},
        source=a_u,
        a=np.asarray(aug.a),
        b_a=np.asarray(aug.b_a),
        c=np.asarray(aug.c),
        d_a_pinv=d_a_pinv,
    )


@dataclass
class ReplayAttack(OnlineGenerator):
    """
    Sensor attack a_y = D_a^+ (y_rec(t - delay) - y_p) inside [t_a, t_b]

    Without a recording the generator captures y_p itself on every step
    before t_a and replays that capture over the window.
    """
    recorded_t: Optional[np.ndarray] = field(default=None, repr=False)
    recorded_y: Optional[np.ndarray] = field(default=None, repr=False)
    t_b: float = 0.0
    d_a_pinv: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        super().__post_init__()
        self._captured_t = []
        self._captured_y = []
        self._capture = None

    @property
    def delay(self) -> float:
        return self.t_b - self.t0

    @property
    def live(self) -> bool:
        return self.recorded_t is None

    def reset(self, dt: float, integrator: str = "zoh"):
        self._captured_t = []
        self._captured_y = []
        self._capture = None

    def _recording(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self.live:
            return self.recorded_t, self.recorded_y
        if self._capture is None:
            if not self._captured_t:
                raise RuntimeError("Replay window opened before anything was recorded")
            self._capture = (np.asarray(self._captured_t), np.vstack(self._captured_y))
        return self._capture

    def sample(self, t: float, y_p: np.ndarray) -> np.ndarray:
        y_p = np.asarray(y_p, dtype=float)
        if t < self.t0:
            if self.live:
                self._captured_t.append(float(t))
                self._captured_y.append(y_p.copy())
            return np.zeros(self.dim)
        if t > self.t_b:
            return np.zeros(self.dim)
        recorded_t, recorded_y = self._recording()
        shifted = t - self.delay
        y_rec = np.array([np.interp(shifted, recorded_t, col) for col in recorded_y.T])
        return self.d_a_pinv @ (y_rec - y_p)


def _replay_window(window: Tuple[float, float]) -> Tuple[float, float]:
    t_a, t_b = float(window[0]), float(window[1])
    if not t_b > t_a:
        raise InvalidWindowError(f"Replay window [{t_a}, {t_b}] is empty")
    return t_a, t_b


def _replay_channels(d_a, c, tol: float) -> np.ndarray:
    d_a = as_matrix(d_a, "d_a")
    c = as_matrix(c, "c")
    if c.shape[0] != d_a.shape[0]:
        raise ValueError(f"D_a has {d_a.shape[0]} rows, C has {c.shape[0]}")
    return _check_cancellable(d_a, c, tol)


def replay_attack(
    recorded_t,
    recorded_y,
    window: Tuple[float, float],
    a_u: SignalGenerator,
    d_a,
    c,
    tol: float = DEFAULT_TOL,
) -> Tuple[ReplayAttack, SignalGenerator]:
    """
    Replay a recorded output segment to the C&C side while a_u acts

    Parameters
    ----------
    recorded_t : array_like
        Increasing sample times of the recording
    recorded_y : array_like
        len(recorded_t) x p recorded outputs
    window : tuple of float
        (t_a, t_b); the segment [t_a - delay, t_a] is replayed over
        [t_a, t_b] with delay = t_b - t_a
    a_u : SignalGenerator
        Actuator attack running alongside
    d_a : array_like
        Sensor attack matrix, full column rank
    c : array_like
        Output matrix of the attacked plant

    Returns
    -------
    tuple
        (a_y generator, a_u generator)

    Raises
    ------
    InvalidWindowError
        If t_b <= t_a or the recording does not cover [t_a - delay, t_a]
    CovertnessInfeasibleError
        If D_a is rank deficient or does not cover Im C
    """
    recorded_t = np.asarray(recorded_t, dtype=float).reshape(-1)
    recorded_y = np.asarray(recorded_y, dtype=float)
    if recorded_y.ndim == 1:
        recorded_y = recorded_y[:, None]
    if recorded_y.shape[0] != recorded_t.size:
        raise ValueError(f"Recording has {recorded_t.size} times but {recorded_y.shape[0]} output rows")
    if recorded_t.size < 2 or np.any(np.diff(recorded_t) <= 0):
        raise ValueError("Recording times must be strictly increasing with at least two samples")

    t_a, t_b = _replay_window(window)
    delay = t_b - t_a
    eps = 1e-9 * max(1.0, abs(t_b))
    if t_a - delay < recorded_t[0] - eps or t_a > recorded_t[-1] + eps:
        raise InvalidWindowError(
            f"Recording [{recorded_t[0]}, {recorded_t[-1]}] does not cover [{t_a - delay}, {t_a}]"
        )

    d_a_pinv = _replay_channels(d_a, c, tol)
    if d_a_pinv.shape[1] != recorded_y.shape[1]:
        raise ValueError(f"D_a has {d_a_pinv.shape[1]} rows, recording has {recorded_y.shape[1]} outputs")

    replay = ReplayAttack(
        signal="a_y",
        kind="replay",
        t0=t_a,
        dim=d_a_pinv.shape[0],
        params={"window": [t_a, t_b]},
        recorded_t=recorded_t,
        recorded_y=recorded_y,
        t_b=t_b,
        d_a_pinv=d_a_pinv,
    )
    return replay, a_u


def live_replay_attack(
    aug: AugmentedModel,
    window: Tuple[float, float],
    a_u: SignalGenerator,
    tol: float = DEFAULT_TOL,
) -> Tuple[ReplayAttack, SignalGenerator]:
    """
    Record y_p inside the simulation, then replay it over the window

    The simulation starts at t = 0, so the window needs t_a >= t_b - t_a.

    Raises
    ------
    InvalidWindowError
        If the window is empty or starts before a full delay is recorded
    CovertnessInfeasibleError
        If D_a is rank deficient or does not cover Im C
    """
    t_a, t_b = _replay_window(window)
    if t_a - (t_b - t_a) < 0.0:
        raise InvalidWindowError(f"Window [{t_a}, {t_b}] replays from t = {2 * t_a - t_b} < 0")
    if a_u.signal != "a_u":
        raise ValueError(f"Replay pairs with an a_u generator, got '{a_u.signal}'")

    d_a_pinv = _replay_channels(aug.d_a, aug.c, tol)
    replay = ReplayAttack(
        signal="a_y",
        kind="replay",
        t0=t_a,
        dim=d_a_pinv.shape[0],
        params={"window": [t_a, t_b], "source": a_u.describe()},
        t_b=t_b,
        d_a_pinv=d_a_pinv,
    )
    logger.debug(f"Live replay over [{t_a}, {t_b}] with delay {t_b - t_a}")
    return replay, a_u


@dataclass
class UndetectableControllableAttack(OnlineGenerator):
    """
    Actuator attack a_u = G xi + v(t) keeping the filter error inside R*

    xi copies the noise-free filter error of the targeted channel; G is a
    friend of R* for the discretized error dynamics and v(t) moves along an
    input direction mapped into R*.
    """
    closed: np.ndarray = field(default=None, repr=False)
    input_map: np.ndarray = field(default=None, repr=False)
    subspace: np.ndarray = field(default=None, repr=False)
    input_directions: np.ndarray = field(default=None, repr=False)
    scale: float = 1.0
    rate: float = 0.5

    def __post_init__(self):
        super().__post_init__()
        self._xi = None
        self._phi = None
        self._gamma = None
        self._gain = None

    def _friend(self, phi: np.ndarray, gamma: np.ndarray) -> np.ndarray:
        """G with (phi + gamma G) R ⊆ R, least-squares on each basis vector"""
        projector = self.subspace @ self.subspace.T
        outside = np.eye(projector.shape[0]) - projector
        # gamma may already map into R*; its rounding residue must not be inverted
        cutoff = SPAN_TOL * max(1.0, float(np.linalg.norm(gamma)))
        g_r = -linalg.pinv(outside @ gamma, atol=cutoff, rtol=0.0) @ outside @ phi @ self.subspace
        leak = np.linalg.norm(outside @ (phi + gamma @ g_r @ self.subspace.T) @ self.subspace)
        if leak > 1e-9:
            logger.debug(f"Discrete friend leaves R* by {leak:.3g}")
        return g_r @ self.subspace.T

    def reset(self, dt: float, integrator: str = "zoh"):
        self._phi, self._gamma = discretize(self.closed, self.input_map, dt, integrator)
        self._gain = self._friend(self._phi, self._gamma)
        self._xi = np.zeros(self.closed.shape[0])

    def sample(self, t: float, y_p: np.ndarray) -> np.ndarray:
        if self._xi is None:
            raise RuntimeError("UndetectableControllableAttack.sample called before reset")
        if t < self.t0:
            return np.zeros(self.dim)
        drive = self.scale * (1.0 + self.rate * (t - self.t0)) * self.input_directions[:, 0]
        a_u = self._gain @ self._xi + drive
        self._xi = self._phi @ self._xi + self._gamma @ a_u
        return a_u

    @property
    def state(self) -> Optional[np.ndarray]:
        return None if self._xi is None else self._xi.copy()


def undetectable_controllable_attack(
    side_filter: SideFilter,
    l,
    b_a_s,
    scale: float = 1.0,
    t0: float = 0.0,
    rate: float = 0.5,
    tol: float = DEFAULT_TOL,
) -> UndetectableControllableAttack:
    """
    Actuator attack invisible to the residual of a channel with R* != 0

    Parameters
    ----------
    side_filter : SideFilter
        Filter of the targeted channel (F_p + L_p, T_p)
    l : array_like
        Detector gain L of the same channel
    b_a_s : array_like
        Plant attack matrix B_a^s
    scale, rate : float
        The drive is scale * (1 + rate (t - t0)) along an admissible input
        direction

    Returns
    -------
    UndetectableControllableAttack

    Raises
    ------
    AttackInfeasibleError
        If R*(L, F_p + L_p, T_p B_a^s) = 0, i.e. the design is safe
    """
    if not isinstance(side_filter, SideFilter):
        raise TypeError(f"Expected SideFilter, got {type(side_filter)}")
    closed = np.asarray(side_filter.closed)
    input_map = np.asarray(side_filter.t_p) @ as_matrix(b_a_s, "b_a_s")
    l = as_matrix(l, "l")

    r_star = controllability_subspace(closed, input_map, l, tol)
    if r_star.is_zero:
        raise AttackInfeasibleError(
            f"{side_filter.category} design has a zero controllability subspace; no undetectable attack exists"
        )
    directions = preimage(input_map, r_star, tol)
    if directions.is_zero:
        raise AttackInfeasibleError("No attack input maps into R*")

    logger.info(f"Undetectable attack: dim R* = {r_star.dim}, {directions.dim} admissible input direction(s)")
    return UndetectableControllableAttack(
        signal="a_u",
        kind="undetectable",
        t0=float(t0),
        dim=input_map.shape[1],
        params={"scale": float(scale), "rate": float(rate), "r_star_dim": r_star.dim},
        closed=closed,
        input_map=input_map,
        subspace=r_star.basis,
        input_directions=directions.basis,
        scale=float(scale),
        rate=float(rate),
    )
