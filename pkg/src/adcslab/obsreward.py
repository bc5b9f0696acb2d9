"""Observation vector construction and reward evaluation.

The agent interface is a 39-element vector, every component normalized and
clipped to [-1, 1].  Layout (index ranges inclusive):

    0..3    err_quat(t_i)       canonical attitude error quaternion
    4..7    err_quat(t_i-1)
    8..10   err_rr(t_i)         rate error / 20 deg/s cap
    11..13  err_rr(t_i-1)
    14..16  a_rw(t_i-1)         last wheel action, already unitless
    17..19  rwr(t_i)            wheel speeds / 16384 rpm
    20..22  rwr(t_i-1)
    23..25  mag_b(t_i)          field / 65 uT cap
    26..28  mag_b(t_i-1)
    29..31  err_rwr(t_i)        wheel-speed error / 16384 rpm
    32..34  err_rwr(t_i-1)
    35..37  crm(t_i)            0.5 * (unit wheel speeds x unit field)
    38      bn(t_i)             |field| / 65 uT cap, in [0, 1]

On the first control step of an episode the previous snapshot is not yet
available and the current one is duplicated into both slots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import params

__all__ = [
    "OBSERVATION_SIZE",
    "SUCCESS_ERR_ATT",
    "ObsSnapshot",
    "build_observation",
    "RewardConfig",
    "StepContext",
    "reward_rw_base",
    "reward_mt",
    "reward_combined",
    "reward_rw_flight",
]

OBSERVATION_SIZE = 39

# Attitude-error success gate: err_att = 1 - dq0 below this is "on target"
# (about a quarter of a degree of total rotation).
SUCCESS_ERR_ATT = 3.8e-5

_ERR_ATT_SCALE = 0.14


@dataclass(frozen=True)
class ObsSnapshot:
    """Measured quantities of one control step, physical units."""

    err_quat: np.ndarray          # canonical (w >= 0) error quaternion
    rate_err_radps: np.ndarray    # target - measured body rates
    rw_speed_rpm: np.ndarray      # measured wheel speeds
    mag_ut: np.ndarray            # measured field, uT
    rw_speed_err_rpm: np.ndarray  # target - measured wheel speeds


def _unit_or_zero(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > 0.0 else np.zeros(3)


def build_observation(
    current: ObsSnapshot, previous: ObsSnapshot | None = None, last_rw_action=None
) -> np.ndarray:
    """Assemble the normalized 39-vector from two consecutive snapshots."""
    if previous is None:
        previous = current
    a_rw = np.zeros(3) if last_rw_action is None else np.asarray(last_rw_action, dtype=float)

    omega_cap = np.radians(params.OMEGA_NORM_CAP_DEGPS)

    def rr(snap):
        return np.clip(snap.rate_err_radps / omega_cap, -1.0, 1.0)

    def rwr(snap):
        return np.clip(snap.rw_speed_rpm / params.WHEEL_SPEED_NORM_RPM, -1.0, 1.0)

    def mag(snap):
        return np.clip(snap.mag_ut / params.B_NORM_CAP_UT, -1.0, 1.0)

    def err_rwr(snap):
        return np.clip(snap.rw_speed_err_rpm / params.WHEEL_SPEED_NORM_RPM, -1.0, 1.0)

    crm = 0.5 * np.cross(_unit_or_zero(current.rw_speed_rpm), _unit_or_zero(current.mag_ut))
    bn = min(np.linalg.norm(current.mag_ut) / params.B_NORM_CAP_UT, 1.0)

    obs = np.concatenate(
        [
            np.clip(current.err_quat, -1.0, 1.0),
            np.clip(previous.err_quat, -1.0, 1.0),
            rr(current),
            rr(previous),
            np.clip(a_rw, -1.0, 1.0),
            rwr(current),
            rwr(previous),
            mag(current),
            mag(previous),
            err_rwr(current),
            err_rwr(previous),
            crm,
            [bn],
        ]
    )
    assert obs.shape == (OBSERVATION_SIZE,)
    return obs


@dataclass(frozen=True)
class RewardConfig:
    """Tunable constants of the wheel-controller reward."""

    threshold_degps: float = 10.0   # soft body-rate maximum
    c: float = 5.0                  # rate-excess penalty weight
    k_smooth: float = 0.05          # action-delta penalty weight
    rw_scale_divisor: float = 11.0  # wheel-reward scale in the combined form

    def __post_init__(self):
        if self.threshold_degps <= 0 or self.c <= 0 or self.k_smooth < 0:
            raise ValueError("invalid reward configuration")


@dataclass(frozen=True)
class StepContext:
    """Reward inputs spanning two consecutive control steps.

    ``err_att = 1 - dq0`` of the canonical error quaternion (range [0, 2]);
    rate errors are deg/s; wheel-speed errors are normalized by 16384 rpm.
    On the first step the previous values duplicate the current ones and
    ``delta_theta_prev`` is zero.
    """

    err_att: float
    err_att_prev: float
    rate_err_degps: np.ndarray
    rw_speed_err_norm: np.ndarray
    action: np.ndarray
    action_prev: np.ndarray
    mt_action: np.ndarray
    delta_theta_prev: float = 0.0

    @property
    def delta_theta(self) -> float:
        return self.err_att - self.err_att_prev

    @property
    def p_norm(self) -> float:
        return float(np.linalg.norm(self.rate_err_degps))


def _attitude_term(ctx: StepContext, success_extra: float, third_offset: float, else_offset: float) -> float:
    if ctx.err_att < SUCCESS_ERR_ATT:
        return 1.0 + 1.0 / (ctx.p_norm + 0.1) + success_extra
    if ctx.err_att < ctx.err_att_prev:
        return float(np.exp(-ctx.err_att / _ERR_ATT_SCALE))
    if ctx.delta_theta < ctx.delta_theta_prev:
        return 0.1 * float(np.exp(-ctx.delta_theta / _ERR_ATT_SCALE)) + third_offset
    return float(np.exp(-ctx.err_att / _ERR_ATT_SCALE)) + else_offset


def reward_rw_base(ctx: StepContext) -> float:
    """Wheel reward of the general attitude-control setup.

    Four-branch attitude term minus the rate-norm and residual-attitude
    penalties; equals 11 exactly at perfect convergence.
    """
    r = _attitude_term(ctx, success_extra=0.0, third_offset=-1.0, else_offset=-2.0)
    return r - ctx.p_norm - 0.1 * ctx.err_att


def reward_mt(ctx: StepContext) -> float:
    """Magnetorquer reward: favors small wheel-speed deviations, small dipoles."""
    err_deviation = float(np.sum(np.abs(ctx.rw_speed_err_norm)) * params.WHEEL_SPEED_NORM_RPM)
    p_action = float(np.sum(np.abs(ctx.mt_action))) / (0.6 * 50.0)
    return (1.0 - p_action) / float(np.sqrt(err_deviation + 1.0))


def reward_combined(ctx: StepContext, cfg: RewardConfig | None = None) -> float:
    """Joint reward: wheel reward scaled to the magnetorquer magnitude."""
    cfg = cfg or RewardConfig()
    return reward_rw_base(ctx) / cfg.rw_scale_divisor + reward_mt(ctx)


def reward_rw_flight(ctx: StepContext, cfg: RewardConfig | None = None) -> float:
    """Wheel reward with rate constraints and smoothness shaping.

    The success branch is augmented to reward small steady-state error;
    equals 21 exactly at perfect convergence.  Penalties: residual
    attitude, quadratic rate excess above the soft threshold, action
    delta, and quadratic rate norm.
    """
    cfg = cfg or RewardConfig()
    success_extra = 1.0 / (ctx.err_att * 1e5 + 0.1) if ctx.err_att < SUCCESS_ERR_ATT else 0.0
    r = _attitude_term(ctx, success_extra=success_extra, third_offset=0.0, else_offset=-1.0)
    excess = np.maximum(0.0, np.abs(ctx.rate_err_degps) - cfg.threshold_degps)
    p_rates_excess = float(cfg.c * np.sum(excess**2))
    p_smooth = float(cfg.k_smooth * np.sum((np.asarray(ctx.action) - np.asarray(ctx.action_prev)) ** 2))
    p_rates = 0.5 * ctx.p_norm**2
    return r - 0.1 * ctx.err_att - p_rates_excess - p_smooth - p_rates
