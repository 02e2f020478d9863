import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from airswarm.errors import ConfigurationError
from airswarm.kinematics import Pose, body_to_ned, wind_state
from airswarm.vehicle import (
    AirshipState,
    VehicleParams,
    VelocityCommand,
    check_state,
    sideslip,
    step_vehicle,
    true_airspeed,
    velocity_to_command,
)

CALM = np.zeros(3)


def airship(yaw=0.0, airspeed=0.0, wind=CALM):
    return AirshipState.at_rest(Pose.from_yaw(0.0, 0.0, -50.0, yaw), 0, airspeed, wind)


def run(state, cmd, wind, params, steps, dt=0.1):
    for _ in range(steps):
        state = step_vehicle(state, cmd, wind, params, dt)
    return state


def test_first_order_lag_single_step():
    params = VehicleParams()
    s = step_vehicle(airship(), VelocityCommand(8.0, 0.1), CALM, params, 0.1)
    assert s.airspeed[0] == pytest.approx(0.1 / 4.0 * 8.0)
    assert s.airspeed[5] == pytest.approx(0.1 / 2.0 * 0.1)


def test_speed_settles_on_command():
    s = run(airship(), VelocityCommand(6.0, 0.0), CALM, VehicleParams(), 1000)
    assert s.airspeed[0] == pytest.approx(6.0, abs=1e-6)
    np.testing.assert_allclose(s.ground_velocity_ned(), [6.0, 0.0, 0.0], atol=1e-6)


def test_commands_are_clamped():
    params = VehicleParams()
    s = run(airship(), VelocityCommand(40.0, 3.0), CALM, params, 400)
    assert s.airspeed[0] <= params.v_max
    assert abs(s.airspeed[5]) <= params.r_max


def test_altitude_is_held():
    params = VehicleParams(altitude=80.0)
    s = run(airship(), VelocityCommand(5.0, 0.2), [0.5, 0.5, 2.0], params, 50)
    assert s.pose.position[2] == -80.0


def test_zero_airspeed_drifts_with_wind():
    wind = np.array([1.0, -0.5, 0.0])
    s = run(airship(wind=wind), VelocityCommand(0.0, 0.0), wind, VehicleParams(), 100)
    np.testing.assert_allclose(s.pose.position[:2], [10.0, -5.0], atol=1e-9)


@given(st.floats(-3.1, 3.1), st.floats(0, 15), st.floats(-3, 3), st.floats(-3, 3))
def test_ground_velocity_is_airspeed_plus_wind(yaw, u, wn, we):
    wind = np.array([wn, we, 0.0])
    s = airship(yaw, u, wind)
    expected = body_to_ned(s.pose.attitude) @ [u, 0, 0] + wind
    np.testing.assert_allclose(s.ground_velocity_ned(), expected, atol=1e-9)
    x_w = wind_state(s.pose, wind)
    assert true_airspeed(s, x_w) == pytest.approx(u, abs=1e-9)
    assert sideslip(s, x_w) == pytest.approx(0.0, abs=1e-9)


@given(st.lists(st.tuples(st.floats(-20, 20), st.floats(-1, 1)), min_size=1, max_size=30))
def test_envelope_holds_for_any_command_sequence(cmds):
    params = VehicleParams()
    s = airship()
    for u, r in cmds:
        s = step_vehicle(s, VelocityCommand(u, r), [1.0, 0.0, 0.0], params, 0.5)
        check_state(s, params)


def test_invalid_params_rejected():
    with pytest.raises(ConfigurationError):
        VehicleParams(tau_u=0.0)
    with pytest.raises(ConfigurationError):
        step_vehicle(airship(), VelocityCommand(), CALM, VehicleParams(), 2.0)


def test_velocity_to_command_ahead_and_behind():
    params = VehicleParams()
    ahead = velocity_to_command(airship(0.0), [5.0, 0.0, 0.0], CALM, params)
    assert ahead.u_ref == pytest.approx(5.0)
    assert ahead.r_ref == pytest.approx(0.0)
    behind = velocity_to_command(airship(0.0), [-5.0, 0.0, 0.0], CALM, params)
    assert behind.u_ref == 0.0
    assert abs(behind.r_ref) == pytest.approx(params.r_max)


def test_velocity_to_command_compensates_wind():
    # holding still in a 1 m/s northerly drift means flying south at 1 m/s
    cmd = velocity_to_command(airship(np.pi), [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], VehicleParams())
    assert cmd.u_ref == pytest.approx(1.0)
