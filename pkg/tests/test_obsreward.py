import numpy as np
import pytest

from adcslab.obsreward import (
    OBSERVATION_SIZE,
    SUCCESS_ERR_ATT,
    ObsSnapshot,
    RewardConfig,
    StepContext,
    build_observation,
    reward_combined,
    reward_mt,
    reward_rw_base,
    reward_rw_flight,
)


def snapshot(err_quat=(1, 0, 0, 0), rate_err=(0, 0, 0), rw=(0, 0, 0), mag=(0, 0, 0), rw_err=(0, 0, 0)):
    return ObsSnapshot(
        err_quat=np.asarray(err_quat, dtype=float),
        rate_err_radps=np.asarray(rate_err, dtype=float),
        rw_speed_rpm=np.asarray(rw, dtype=float),
        mag_ut=np.asarray(mag, dtype=float),
        rw_speed_err_rpm=np.asarray(rw_err, dtype=float),
    )


def context(**kw):
    defaults = dict(
        err_att=0.0,
        err_att_prev=0.0,
        rate_err_degps=np.zeros(3),
        rw_speed_err_norm=np.zeros(3),
        action=np.zeros(3),
        action_prev=np.zeros(3),
        mt_action=np.zeros(3),
        delta_theta_prev=0.0,
    )
    defaults.update(kw)
    return StepContext(**defaults)


# --- observation ------------------------------------------------------------


def test_observation_at_rest():
    obs = build_observation(snapshot())
    assert obs.shape == (OBSERVATION_SIZE,)
    np.testing.assert_array_equal(obs[0:4], [1, 0, 0, 0])
    np.testing.assert_array_equal(obs[4:8], [1, 0, 0, 0])
    np.testing.assert_array_equal(obs[8:], np.zeros(31))


def test_observation_wheel_normalization():
    obs = build_observation(snapshot(rw=(16384.0, 0.0, 0.0)))
    np.testing.assert_array_equal(obs[17:20], [1.0, 0.0, 0.0])


def test_observation_wheel_clipped_at_max_speed():
    obs = build_observation(snapshot(rw=(16400.0, 0.0, 0.0)))
    assert obs[17] == 1.0


def test_observation_duplicates_first_step():
    cur = snapshot(err_quat=(0.9, 0.1, 0.2, 0.1), rate_err=(0.01, 0, 0))
    with_prev = build_observation(cur, cur)
    without_prev = build_observation(cur, None)
    np.testing.assert_array_equal(with_prev, without_prev)


def test_observation_bounds_random_states():
    rng = np.random.default_rng(2)
    for _ in range(2000):
        q = rng.normal(size=4)
        q = np.abs(q[0]) * np.sign(q[0] or 1.0), *q[1:]  # any components fine, clipped anyway
        cur = snapshot(
            err_quat=rng.uniform(-1, 1, size=4),
            rate_err=rng.uniform(-2, 2, size=3),
            rw=rng.uniform(-20000, 20000, size=3),
            mag=rng.uniform(-120, 120, size=3),
            rw_err=rng.uniform(-20000, 20000, size=3),
        )
        prev = snapshot(
            err_quat=rng.uniform(-1, 1, size=4),
            rate_err=rng.uniform(-2, 2, size=3),
            rw=rng.uniform(-20000, 20000, size=3),
            mag=rng.uniform(-120, 120, size=3),
            rw_err=rng.uniform(-20000, 20000, size=3),
        )
        obs = build_observation(cur, prev, last_rw_action=rng.uniform(-3, 3, size=3))
        assert obs.shape == (OBSERVATION_SIZE,)
        assert np.all(obs >= -1.0) and np.all(obs <= 1.0)


def test_observation_cross_term_scale():
    cur = snapshot(rw=(1000.0, 0.0, 0.0), mag=(0.0, 30.0, 0.0))
    obs = build_observation(cur)
    np.testing.assert_allclose(obs[35:38], [0.0, 0.0, 0.5])
    assert obs[38] == pytest.approx(30.0 / 65.0)


# --- wheel reward (base) ----------------------------------------------------


def test_reward_rw_base_perfect_convergence():
    assert reward_rw_base(context()) == pytest.approx(11.0)


def test_reward_rw_base_improving_branch():
    ctx = context(err_att=0.1, err_att_prev=0.2)
    expected = np.exp(-0.1 / 0.14) - 0.1 * 0.1
    assert reward_rw_base(ctx) == pytest.approx(expected)
    assert reward_rw_base(ctx) == pytest.approx(0.4895 - 0.01, abs=2e-4)


def test_reward_rw_base_diverging_branch():
    # err rising and the rise accelerating: fourth branch.
    ctx = context(err_att=0.3, err_att_prev=0.25, delta_theta_prev=0.01)
    expected = (np.exp(-0.3 / 0.14) - 2.0) - 0.1 * 0.3
    assert reward_rw_base(ctx) == pytest.approx(expected)


def test_reward_rw_base_overshoot_branch():
    # err rising but the rise decelerating: third branch.
    ctx = context(err_att=0.3, err_att_prev=0.25, delta_theta_prev=0.2)
    expected = (0.1 * np.exp(-0.05 / 0.14) - 1.0) - 0.1 * 0.3
    assert reward_rw_base(ctx) == pytest.approx(expected)


def test_reward_rw_base_success_dominates_other_branches():
    # With rate norm below 10 the success branch strictly exceeds anything
    # the non-success branches can produce (they are bounded above by 1).
    for p_norm in np.linspace(0.0, 9.99, 50):
        success = 1.0 + 1.0 / (p_norm + 0.1)
        assert success > 1.0 + 1e-9
    for err in np.linspace(1e-4, 2.0, 40):
        for prev in np.linspace(1e-4, 2.0, 40):
            ctx = context(err_att=err, err_att_prev=prev, delta_theta_prev=0.0)
            r = reward_rw_base(ctx) + 0.1 * err  # strip p_att to expose the branch term
            assert r <= 1.0 + 1e-9


def test_reward_rw_base_first_step_not_success_unless_at_target():
    # Duplicate-snapshot start: equal errors select the else branch.
    ctx = context(err_att=0.5, err_att_prev=0.5)
    expected = (np.exp(-0.5 / 0.14) - 2.0) - 0.05
    assert reward_rw_base(ctx) == pytest.approx(expected)
    at_target = context(err_att=0.0, err_att_prev=0.0)
    assert reward_rw_base(at_target) == pytest.approx(11.0)


# --- magnetorquer reward ----------------------------------------------------


def test_reward_mt_zero_case():
    assert reward_mt(context()) == 1.0


def test_reward_mt_action_penalty():
    ctx = context(mt_action=np.array([0.6, 0.6, 0.6]))
    assert reward_mt(ctx) == pytest.approx(0.94)


def test_reward_mt_deviation_halves():
    ctx = context(rw_speed_err_norm=np.array([3.0 / 16384.0, 0.0, 0.0]))
    assert reward_mt(ctx) == pytest.approx(0.5)


def test_reward_mt_bounded_by_one():
    rng = np.random.default_rng(3)
    for _ in range(500):
        ctx = context(
            rw_speed_err_norm=rng.uniform(-1, 1, size=3),
            mt_action=rng.uniform(-1, 1, size=3),
        )
        r = reward_mt(ctx)
        assert r <= 1.0
    assert reward_mt(context()) == 1.0


# --- combined reward --------------------------------------------------------


def test_reward_combined_maximum():
    assert reward_combined(context()) == pytest.approx(2.0)


def test_reward_combined_additivity():
    ctx = context(err_att=0.2, err_att_prev=0.1, rate_err_degps=np.array([1.0, 0, 0]))
    expected = reward_rw_base(ctx) / 11.0 + reward_mt(ctx)
    assert reward_combined(ctx) == pytest.approx(expected)


# --- flight wheel reward ----------------------------------------------------


def test_reward_rw_flight_perfect_convergence():
    assert reward_rw_flight(context()) == pytest.approx(21.0)


def test_reward_rw_flight_rate_excess_penalty():
    cfg = RewardConfig()
    ctx = context(err_att=0.0, rate_err_degps=np.array([12.0, 0.0, 0.0]))
    base = context(err_att=0.0, rate_err_degps=np.array([10.0, 0.0, 0.0]))
    # Isolate p_rates_excess: same branch, p_rates differs by a known amount.
    delta = reward_rw_flight(base, cfg) - reward_rw_flight(ctx, cfg)
    p_rates_diff = 0.5 * (12.0**2 - 10.0**2)
    success_diff = 1.0 / (10.0 + 0.1) - 1.0 / (12.0 + 0.1)
    assert delta == pytest.approx(20.0 + p_rates_diff + success_diff)


def test_reward_rw_flight_fourth_branch_offset():
    ctx = context(err_att=0.3, err_att_prev=0.25, delta_theta_prev=0.01)
    expected = (np.exp(-0.3 / 0.14) - 1.0) - 0.1 * 0.3
    assert reward_rw_flight(ctx) == pytest.approx(expected)


def test_reward_rw_flight_third_branch_no_offset():
    ctx = context(err_att=0.3, err_att_prev=0.25, delta_theta_prev=0.2)
    expected = 0.1 * np.exp(-0.05 / 0.14) - 0.1 * 0.3
    assert reward_rw_flight(ctx) == pytest.approx(expected)


def test_reward_rw_flight_smoothness_penalty():
    ctx = context(action=np.array([0.5, 0.0, 0.0]), action_prev=np.array([-0.5, 0.0, 0.0]))
    no_delta = context()
    assert reward_rw_flight(no_delta) - reward_rw_flight(ctx) == pytest.approx(0.05 * 1.0)


def test_reward_rw_flight_monotone_in_penalties():
    cfg = RewardConfig()
    base = context(err_att=0.2, err_att_prev=0.1)
    r0 = reward_rw_flight(base, cfg)
    worse_rate = context(err_att=0.2, err_att_prev=0.1, rate_err_degps=np.array([11.0, 0, 0]))
    worse_action = context(
        err_att=0.2, err_att_prev=0.1, action=np.array([1.0, 0, 0]), action_prev=np.array([-1.0, 0, 0])
    )
    worse_att = context(err_att=0.25, err_att_prev=0.1)
    assert reward_rw_flight(worse_rate, cfg) < r0
    assert reward_rw_flight(worse_action, cfg) < r0
    assert reward_rw_flight(worse_att, cfg) < r0


def test_success_gate_constant():
    assert SUCCESS_ERR_ATT == 3.8e-5
