"""Actuator and sensor models: reaction wheels, magnetorquers, noise.

The reaction-wheel model carries the in-orbit anomalies observed on the
hardware: measured-speed jumps inside the low-rpm deadband, stochastic
command-ignore windows near zero speed, and a random dead time after
power-on.  True wheel speed is always continuous; only the measurement
jumps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import params
from .attmath import magnetic_torque
from .environment import EpisodeScenario

__all__ = [
    "RwModel",
    "ActuatorState",
    "SensorNoiseParams",
    "nominal_rw_model",
    "inorbit_rw_model",
    "initial_actuator_state",
    "start_control_step",
    "apply_rw_command",
    "measure_rw_speed",
    "clip_dipole",
    "apply_mt_command",
    "residual_dipole_torque",
    "sense",
]


@dataclass(frozen=True)
class RwModel:
    """Reaction-wheel parameters and anomaly severities."""

    wheel_inertia: float = params.RW_INERTIA
    max_speed_rpm: float = params.RW_MAX_SPEED_RPM
    min_torque: float = params.RW_MIN_TORQUE
    max_torque: float = params.RW_MAX_TORQUE
    deadband_rpm: float = params.RW_DEADBAND_RPM
    dead_time_max_s: float = params.RW_DEAD_TIME_MAX_S
    jump_magnitude_rpm: float = params.RW_JUMP_MAGNITUDE_RPM
    jump_probability_per_step: float = 0.02
    ignore_probability_per_step: float = 0.02
    ignore_duration_range_s: tuple[float, float] = (1.0, 10.0)

    def __post_init__(self):
        if not (0.0 < self.min_torque < self.max_torque):
            raise ValueError("need 0 < min_torque < max_torque")
        if self.deadband_rpm < 0.0:
            raise ValueError("deadband must be symmetric about 0 (nonnegative half-width)")


def nominal_rw_model() -> RwModel:
    """Wheel model without the in-orbit anomalies."""
    return RwModel(
        dead_time_max_s=0.0,
        jump_probability_per_step=0.0,
        ignore_probability_per_step=0.0,
    )


def inorbit_rw_model() -> RwModel:
    """Wheel model with anomalies at default severity."""
    return RwModel()


@dataclass
class ActuatorState:
    """Mutable actuator state owned by exactly one episode."""

    rw_speed_rpm: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rw_dead_until_s: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rw_ignore_until_s: np.ndarray = field(default_factory=lambda: np.zeros(3))
    mt_dipole_cmd: np.ndarray = field(default_factory=lambda: np.zeros(3))
    powered: bool = True

    @property
    def rw_momentum_nms(self) -> np.ndarray:
        return self.rw_speed_rpm * params.RPM_TO_RADPS * params.RW_INERTIA


def initial_actuator_state(model: RwModel, rng, speeds_rpm=None, t0: float = 0.0) -> ActuatorState:
    """Power-on state; each wheel draws its dead time uniformly."""
    speeds = np.zeros(3) if speeds_rpm is None else np.asarray(speeds_rpm, dtype=float).copy()
    dead = t0 + rng.uniform(0.0, model.dead_time_max_s, size=3) if model.dead_time_max_s > 0 else np.full(3, t0)
    return ActuatorState(rw_speed_rpm=speeds, rw_dead_until_s=dead, rw_ignore_until_s=np.full(3, t0))


def start_control_step(state: ActuatorState, model: RwModel, t: float, rng) -> None:
    """Per-control-step anomaly triggers.

    Wheels sitting inside the low-rpm deadband may enter a command-ignore
    window; draw order is per axis for determinism.
    """
    if model.ignore_probability_per_step <= 0.0:
        return
    lo, hi = model.ignore_duration_range_s
    for i in range(3):
        if abs(state.rw_speed_rpm[i]) <= model.deadband_rpm and t >= state.rw_ignore_until_s[i]:
            if rng.uniform() < model.ignore_probability_per_step:
                state.rw_ignore_until_s[i] = t + rng.uniform(lo, hi)


def apply_rw_command(
    state: ActuatorState, model: RwModel, torque_cmd, t: float, dt: float, rng=None
) -> tuple[ActuatorState, np.ndarray]:
    """Apply a wheel-side torque command for dt seconds.

    Positive delivered torque spins the wheel up; the body feels the
    opposite reaction.  Per axis: zero while dead or inside an ignore
    window, zero below the minimum torque, clipped to the maximum torque,
    and reduced so the wheel speed never passes its saturation limit.

    Returns:
        (state, delivered torque in Nm); the state is mutated in place and
        returned for convenience.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    cmd = np.asarray(torque_cmd, dtype=float)
    delivered = np.zeros(3)
    if not state.powered:
        return state, delivered
    j = model.wheel_inertia
    for i in range(3):
        tau = float(np.clip(cmd[i], -model.max_torque, model.max_torque))
        if t < state.rw_dead_until_s[i] or t < state.rw_ignore_until_s[i]:
            continue
        if abs(cmd[i]) < model.min_torque:
            continue
        # Reduce the torque so the speed stops exactly at the saturation limit.
        w = state.rw_speed_rpm[i] * params.RPM_TO_RADPS
        w_max = model.max_speed_rpm * params.RPM_TO_RADPS
        tau = float(np.clip(tau, (-w_max - w) * j / dt, (w_max - w) * j / dt))
        state.rw_speed_rpm[i] += tau / j * dt * params.RADPS_TO_RPM
        delivered[i] = tau
    return state, delivered


def measure_rw_speed(state: ActuatorState, model: RwModel, rng) -> np.ndarray:
    """Measured wheel speeds; may jump transiently inside the deadband."""
    measured = state.rw_speed_rpm.copy()
    for i in range(3):
        if abs(state.rw_speed_rpm[i]) <= model.deadband_rpm:
            if model.jump_probability_per_step > 0.0 and rng.uniform() < model.jump_probability_per_step:
                sign = 1.0 if rng.uniform() < 0.5 else -1.0
                measured[i] += sign * model.jump_magnitude_rpm
    return measured


def clip_dipole(dipole_cmd) -> np.ndarray:
    return np.clip(np.asarray(dipole_cmd, dtype=float), -params.MT_MAX_DIPOLE, params.MT_MAX_DIPOLE)


def apply_mt_command(dipole_cmd, b_body_t) -> np.ndarray:
    """Torque (Nm) of a commanded magnetorquer dipole in the body field."""
    return magnetic_torque(clip_dipole(dipole_cmd), b_body_t)


def residual_dipole_torque(scenario: EpisodeScenario, b_body_t) -> np.ndarray:
    """Disturbance torque of the imperfectly compensated residual dipole.

    comp_error is the per-axis residual fraction left after active
    compensation (zero means perfect cancellation).
    """
    mu_eff = scenario.residual_mu * scenario.comp_error
    return magnetic_torque(mu_eff, b_body_t)


@dataclass(frozen=True)
class SensorNoiseParams:
    """Gyro/magnetometer noise: per-episode bias sigma + per-sample white sigma.

    ``scale`` is the domain-randomization margin applied to both terms when
    sampling; the flight preset stores raw sigmas such that the effective
    (scaled) values equal the catalogued simulation numbers.
    """

    gyro_sigma_b_radps: np.ndarray
    gyro_sigma_n_radps: np.ndarray
    mag_sigma_b_ut: np.ndarray
    mag_sigma_n_ut: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        for name in ("gyro_sigma_b_radps", "gyro_sigma_n_radps", "mag_sigma_b_ut", "mag_sigma_n_ut"):
            v = np.asarray(getattr(self, name), dtype=float)
            if np.any(v < 0):
                raise ValueError(f"{name} must be nonnegative")
            object.__setattr__(self, name, v)

    @classmethod
    def zero(cls) -> "SensorNoiseParams":
        z = np.zeros(3)
        return cls(z, z, z, z, scale=1.0)

    @classmethod
    def flight(cls) -> "SensorNoiseParams":
        s = params.NOISE_DOMAIN_SCALE
        return cls(
            gyro_sigma_b_radps=params.GYRO_BIAS_STD_RADPS / s,
            gyro_sigma_n_radps=params.GYRO_WHITE_STD_RADPS / s,
            mag_sigma_b_ut=params.MAG_BIAS_STD_UT / s,
            mag_sigma_n_ut=params.MAG_WHITE_STD_UT / s,
            scale=s,
        )

    @property
    def effective_gyro_bias_std(self) -> np.ndarray:
        return self.scale * self.gyro_sigma_b_radps

    @property
    def effective_gyro_white_std(self) -> np.ndarray:
        return self.scale * self.gyro_sigma_n_radps

    @property
    def effective_mag_bias_std(self) -> np.ndarray:
        return self.scale * self.mag_sigma_b_ut

    @property
    def effective_mag_white_std(self) -> np.ndarray:
        return self.scale * self.mag_sigma_n_ut


def draw_biases(noise: SensorNoiseParams, rng) -> tuple[np.ndarray, np.ndarray]:
    """Once-per-episode bias draws for (gyro rad/s, magnetometer uT)."""
    return (
        rng.normal(size=3) * noise.effective_gyro_bias_std,
        rng.normal(size=3) * noise.effective_mag_bias_std,
    )


def sense(omega_true_radps, b_true_body_t, gyro_bias_radps, mag_bias_ut, noise: SensorNoiseParams, rng):
    """One sensor sample: truth + episode bias + fresh white noise.

    Returns:
        (gyro rad/s, magnetometer uT)
    """
    gyro = (
        np.asarray(omega_true_radps, dtype=float)
        + np.asarray(gyro_bias_radps, dtype=float)
        + rng.normal(size=3) * noise.effective_gyro_white_std
    )
    mag = (
        np.asarray(b_true_body_t, dtype=float) * 1e6
        + np.asarray(mag_bias_ut, dtype=float)
        + rng.normal(size=3) * noise.effective_mag_white_std
    )
    return gyro, mag
