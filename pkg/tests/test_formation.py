import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from airswarm.errors import BearingUndefinedError, ConfigurationError
from airswarm.formation import (
    FormationSlot,
    GuidanceGains,
    Mode,
    TrimGains,
    TrimTable,
    closed_loop_matrix,
    feedforward_speed,
    follower_command,
    follower_goal,
    guidance_mode,
    hover_command,
    hover_heading,
    polar_errors,
    sfkc_command,
    trim_minimization,
    validate_gains,
)
from airswarm.kinematics import Pose, integrate_pose, yaw_of


def at(n, e, psi=0.0):
    return Pose.from_yaw(n, e, -50.0, psi)


def test_polar_errors_goal_ahead():
    err = polar_errors(at(0, 0), [10.0, 0.0, 0.0], 0.0)
    assert (err.rho, err.zeta, err.epsilon) == pytest.approx((10.0, 0.0, 0.0))


def test_polar_errors_goal_to_the_east():
    err = polar_errors(at(0, 0), [0.0, 10.0, 0.0], 0.0)
    assert err.zeta == pytest.approx(np.pi / 2)
    assert err.epsilon == pytest.approx(-np.pi / 2)


def test_polar_errors_with_slot_offset():
    err = polar_errors(at(0, 0), [30.0, 0.0, 0.0], 0.0, FormationSlot(20.0, 0.0))
    assert err.rho == pytest.approx(10.0)


def test_bearing_undefined_on_top_of_goal():
    with pytest.raises(BearingUndefinedError):
        polar_errors(at(5, 5), [5.0, 5.0, 0.0], 0.0)


@given(st.floats(0.01, 1.0), st.floats(0.0, 1.0), st.floats(-1.0, -1e-3))
def test_valid_gains_give_stable_matrix(k_rho, extra, k_eps):
    gains = GuidanceGains(k_rho, k_rho + extra + 1e-3, k_eps)
    assert validate_gains(gains)
    assert np.max(np.linalg.eigvals(closed_loop_matrix(gains)).real) < 0


@given(st.floats(-1, 1), st.floats(-2, 2), st.floats(-1, 1))
def test_validation_agrees_with_eigenvalues(k_rho, k_zeta, k_eps):
    gains = GuidanceGains(k_rho, k_zeta, k_eps)
    stable = np.max(np.linalg.eigvals(closed_loop_matrix(gains)).real) < -1e-12
    if validate_gains(gains) and min(k_rho, -k_eps, k_zeta - k_rho) > 1e-6:
        assert stable
    if not validate_gains(gains):
        assert not stable


def test_sfkc_command_values_and_validation():
    gains = GuidanceGains(0.1, 0.4, -0.01, 1.0)
    from airswarm.formation import PolarErrors
    cmd = sfkc_command(PolarErrors(20.0, 0.1, 0.2), gains, v_ff=3.0)
    assert cmd.u_ref == pytest.approx(0.1 * 20 + 3.0)
    assert cmd.r_ref == pytest.approx(0.4 * 0.1 - 0.01 * 0.2)
    with pytest.raises(ConfigurationError, match="k_zeta > k_rho"):
        sfkc_command(PolarErrors(1, 0, 0), GuidanceGains(0.5, 0.4, -0.1))


def test_kinematic_convergence_to_goal():
    gains = GuidanceGains()
    pose = at(0, 0, 1.0)
    goal = np.array([60.0, 80.0, -50.0])
    for _ in range(3000):
        try:
            err = polar_errors(pose, goal, np.arctan2(80, 60))
        except BearingUndefinedError:
            break
        cmd = sfkc_command(err, gains, v_max=15.0, r_max=0.2)
        pose = integrate_pose(pose, [cmd.u_ref, 0, 0, 0, 0, cmd.r_ref], 0.1)
    assert np.hypot(*(goal - pose.position)[:2]) < 1.0


def test_follower_goal_sits_behind_the_leader():
    y = follower_goal(at(0, 0, 0.0), FormationSlot(20.0, np.pi / 4))
    np.testing.assert_allclose(y[:2], [-20 / np.sqrt(2), -20 / np.sqrt(2)])
    y = follower_goal(at(0, 0, np.pi / 2), FormationSlot(10.0, 0.0))
    np.testing.assert_allclose(y[:2], [0.0, -10.0], atol=1e-12)


def test_follower_goal_is_an_equilibrium():
    slot = FormationSlot(20.0, -np.pi / 4)
    leader = at(3, 4, 0.3)
    err = polar_errors(at(*follower_goal(leader, slot)[:2], 0.3), leader.position, 0.3, slot)
    assert err.rho == pytest.approx(0.0, abs=1e-9)
    assert err.zeta == pytest.approx(0.0, abs=1e-9)
    assert err.epsilon == pytest.approx(0.0, abs=1e-9)


def test_feedforward_speed():
    assert feedforward_speed([1.0, 0, 0], [0.0, 0, 0], 0.1) == pytest.approx(10.0)
    assert feedforward_speed([0.1, 0, 0], [0.0, 0, 0], 0.1, wind_ned=[1.0, 0, 0]) == pytest.approx(0.0)
    with pytest.raises(ConfigurationError):
        feedforward_speed([0, 0, 0], [0, 0, 0], 0.0)


def test_follower_command_freezes_rotation_on_station():
    gains = GuidanceGains()
    cmd, _ = follower_command(at(0.5, 0, 0.3), [0.0, 0.0, -50.0], 0.0, gains, 6.0)
    assert cmd.r_ref == 0.0


def test_follower_command_slows_when_ahead_of_slot():
    gains = GuidanceGains()
    cmd, _ = follower_command(at(10.0, 0.0, 0.0), [0.0, 0.0, -50.0], 0.0, gains, 6.0)
    assert cmd.u_ref < 6.0
    assert abs(cmd.r_ref) < 1e-9


def test_default_trim_table():
    table = TrimTable.default()
    assert len(table.airspeeds) == 74
    assert table.airspeeds[0] == pytest.approx(0.3)
    assert table.airspeeds[-1] == pytest.approx(15.0)


def test_trim_table_validation():
    with pytest.raises(ConfigurationError):
        TrimTable((1.0, 1.0), (TrimGains(1, 1), TrimGains(1, 1)))
    with pytest.raises(ConfigurationError):
        TrimTable((1.0,), ())


def test_trim_minimization_examples():
    table = TrimTable((2.0, 4.0, 6.0), tuple(TrimGains(k + 1.0, 1.0) for k in range(3)))
    assert trim_minimization(4.2, table)[1] == 1
    assert trim_minimization(-5.0, table)[1] == 0
    assert trim_minimization(99.0, table)[1] == 2
    assert trim_minimization(3.0, table)[1] == 0  # exact tie goes low
    assert trim_minimization(5.0, table)[0] == TrimGains(2.0, 1.0)


@given(st.floats(-5, 20))
def test_trim_minimization_matches_scan(u):
    table = TrimTable.default()
    gaps = [abs(u - a) for a in table.airspeeds]
    assert trim_minimization(u, table)[1] == gaps.index(min(gaps))


def test_hover_heading_faces_wind():
    assert hover_heading(0.3, [1.0, 0.0, 0.0]) == pytest.approx(np.pi)
    assert hover_heading(0.3, [0.0, -2.0, 0.0]) == pytest.approx(np.pi / 2)
    assert hover_heading(0.3, [0.0, 0.0, 0.0]) == 0.3


def test_guidance_mode_switches_on_radius():
    wind = [0.0, 1.0, 0.0]
    mode, heading = guidance_mode(at(0, 0), [5.0, 0, 0], 20.0, wind)
    assert mode is Mode.HOVER
    assert heading == pytest.approx(-np.pi / 2)
    assert guidance_mode(at(0, 0), [30.0, 0, 0], 20.0, wind) == (Mode.CRUISE, None)
    with pytest.raises(ConfigurationError):
        guidance_mode(at(0, 0), [30.0, 0, 0], 0.0, wind)


def test_hover_command_turns_toward_reference():
    cmd = hover_command(at(0, 0, 0.0), 0.1, GuidanceGains())
    assert cmd.u_ref == 0.0
    assert cmd.r_ref == pytest.approx(0.04)
    assert yaw_of(at(0, 0, 0.0)) == 0.0
