import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from airswarm.boids import (
    BoidsParams,
    attraction_velocity,
    boids_step_swarm,
    boids_update,
    boids_velocities,
    clamp_speed,
    mimic_velocity,
    repulsion_velocity,
)
from airswarm.errors import ConfigurationError, UndefinedRuleError

coords = st.floats(-100, 100, allow_nan=False)


def swarms(min_n=2, max_n=10):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.tuples(arrays(float, (n, 3), elements=coords),
                            arrays(float, (n, 3), elements=st.floats(-10, 10))))


def test_isolated_boid_has_no_repulsion():
    p = np.array([[0.0, 0, 0], [50.0, 0, 0]])
    np.testing.assert_array_equal(repulsion_velocity(0, p, 15.0), [0, 0, 0])


def test_single_neighbour_repulsion():
    p = np.array([[0.0, 0, 0], [0.0, 1.0, 0]])
    np.testing.assert_allclose(repulsion_velocity(0, p, 5.0), [0, -1.0, 0])


def test_ring_repulsion_cancels():
    angles = np.linspace(0, 2 * np.pi, 7)[:-1]
    ring = np.column_stack([np.cos(angles), np.sin(angles), np.zeros(6)]) * 3.0
    p = np.vstack([[0.0, 0, 0], ring])
    expected = sum(p[0] - p[j] for j in range(1, 7)) / 6
    np.testing.assert_allclose(repulsion_velocity(0, p, 5.0), expected, atol=1e-12)
    np.testing.assert_allclose(repulsion_velocity(0, p, 5.0), 0.0, atol=1e-12)


def test_mimic_and_attraction_examples():
    v = np.array([[0.0, 0, 0], [1.0, 0, 0]])
    np.testing.assert_allclose(mimic_velocity(0, v), [1, 0, 0])
    p = np.array([[0.0, 0, 0], [2.0, 0, 0]])
    np.testing.assert_allclose(attraction_velocity(0, p), [2, 0, 0])


def test_rules_need_two_members():
    one = np.zeros((1, 3))
    with pytest.raises(UndefinedRuleError):
        mimic_velocity(0, one)
    with pytest.raises(UndefinedRuleError):
        attraction_velocity(0, one)
    with pytest.raises(UndefinedRuleError):
        boids_velocities(one, one, BoidsParams())


@given(swarms())
def test_mimic_is_mean_of_others(sw):
    _, v = sw
    for i in range(len(v)):
        others = [v[j] for j in range(len(v)) if j != i]
        np.testing.assert_allclose(mimic_velocity(i, v), np.mean(others, axis=0), atol=1e-9)


@given(swarms())
def test_attraction_sums_to_zero(sw):
    p, _ = sw
    total = sum(attraction_velocity(i, p) for i in range(len(p)))
    np.testing.assert_allclose(total, 0.0, atol=1e-9)


def test_pure_inertia_keeps_velocity():
    p = np.array([[0.0, 0, 0], [5.0, 0, 0], [0.0, 5, 0]])
    v = np.array([[1.0, 2, 0], [0.0, 1, 0], [3.0, 0, 0]])
    params = BoidsParams(delta=1.0)
    np.testing.assert_allclose(boids_update(0, p, v, params), v[0])


def test_consensus_velocity_is_kept():
    p = np.array([[0.0, 0, 0], [50.0, 0, 0], [0.0, 50, 0]])
    v = np.tile([1.0, 2.0, 0.0], (3, 1))
    params = BoidsParams(delta=0.0, k_r=0.0, k_m=1.0, k_a=0.0)
    np.testing.assert_allclose(boids_velocities(p, v, params), v)


def test_attraction_only_at_centroid_stops():
    p = np.array([[0.0, 0, 0], [1.0, 0, 0], [-1.0, 0, 0]])
    params = BoidsParams(delta=0.0, k_r=0.0, k_m=0.0, k_a=1.0)
    np.testing.assert_allclose(boids_update(0, p, np.ones((3, 3)), params), 0.0)


@given(swarms(), st.floats(0.05, 1.0))
def test_centroid_invariant_under_attraction(sw, dt):
    p, v = sw
    params = BoidsParams(delta=0.0, k_r=0.0, k_m=0.0, k_a=1.0, v_max=1e9)
    new_p, _ = boids_step_swarm(p, v, params, dt=dt)
    np.testing.assert_allclose(new_p.mean(axis=0), p.mean(axis=0), atol=1e-9)


@given(swarms(3, 8), st.randoms(use_true_random=False))
def test_permutation_invariance(sw, rnd):
    p, v = sw
    perm = list(range(len(p)))
    rnd.shuffle(perm)
    params = BoidsParams()
    wp = np.array([200.0, -30.0, 0.0])
    a_p, a_v = boids_step_swarm(p, v, params, waypoint=wp)
    b_p, b_v = boids_step_swarm(p[perm], v[perm], params, waypoint=wp)
    np.testing.assert_allclose(b_p, a_p[perm], atol=1e-9)
    np.testing.assert_allclose(b_v, a_v[perm], atol=1e-9)


@given(swarms())
def test_speed_clamped(sw):
    p, v = sw
    params = BoidsParams(v_max=3.0, k_a=5.0)
    _, new_v = boids_step_swarm(p * 10, v * 10, params, waypoint=[1000.0, 0, 0])
    assert np.all(np.linalg.norm(new_v, axis=1) <= 3.0 + 1e-9)


def test_waypoint_pulls_flock_toward_it():
    p = np.array([[0.0, 0, 0], [10.0, 0, 0], [0.0, 10, 0], [10.0, 10, 0]])
    v = np.zeros((4, 3))
    params = BoidsParams()
    plain = boids_velocities(p, v, params)
    pulled = boids_velocities(p, v, params, waypoint=[0.0, 500.0, 0.0])
    assert pulled.mean(axis=0)[1] > plain.mean(axis=0)[1] + 1.0


def test_waypoint_is_not_mimicked():
    p = np.array([[0.0, 0, 0], [100.0, 0, 0]])
    v = np.array([[0.0, 0, 0], [4.0, 0, 0]])
    params = BoidsParams(delta=0.0, k_r=0.0, k_m=1.0, k_a=0.0)
    out = boids_velocities(p, v, params, waypoint=[0.0, 500.0, 0.0])
    np.testing.assert_allclose(out[0], [4.0, 0, 0])


def test_clamp_speed_and_params():
    np.testing.assert_allclose(clamp_speed([3.0, 4.0, 0.0], 1.0), [0.6, 0.8, 0.0])
    np.testing.assert_allclose(clamp_speed([0.0, 0.0, 0.0], 1.0), [0, 0, 0])
    with pytest.raises(ConfigurationError):
        BoidsParams(delta=1.5)
    with pytest.raises(ConfigurationError):
        BoidsParams(d_lim=0.0)
