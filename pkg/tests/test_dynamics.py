"""Direct RK4 integration: field values, conservation, rigidity, growth."""

import numpy as np
import pytest

from vortexeq import (
    Circulations,
    CollisionAbort,
    PlanarConfiguration,
    VortexCollision,
    hamiltonian,
    integrate_rk4,
    perturbation_growth,
    rigidity_error,
    vortex_field,
    vorticity_moment,
)

TWO_PI = 2 * np.pi


def unit_pair(eps):
    return PlanarConfiguration(
        np.array([[0.0, 0.0], [1.0, 0.0]]), Circulations(eps)
    )


def test_field_two_vortex_example():
    vel = vortex_field(unit_pair(1e-3))
    np.testing.assert_allclose(vel[0], [0.0, -1e-3], atol=1e-16)
    np.testing.assert_allclose(vel[1], [0.0, 1.0], atol=1e-16)


def test_field_center_of_vorticity_stationary():
    rng = np.random.default_rng(0)
    pos = rng.standard_normal((5, 2)) * 2.0
    config = PlanarConfiguration(pos, Circulations(2e-3))
    vel = vortex_field(config)
    np.testing.assert_allclose(config.gammas @ vel, [0.0, 0.0], atol=1e-14)


def test_field_rotates_equilibrium(min3_eq):
    config = PlanarConfiguration.from_equilibrium(min3_eq)
    vel = vortex_field(config)
    perp = np.column_stack([-config.positions[:, 1], config.positions[:, 0]])
    assert np.abs(vel - min3_eq.omega * perp).max() < 1e-12


def test_hamiltonian_unit_distances():
    pair = PlanarConfiguration(
        np.array([[0.0, 0.0], [1.0, 0.0]]), Circulations(1.0)
    )
    assert hamiltonian(pair) == pytest.approx(0.0, abs=1e-15)
    far = PlanarConfiguration(
        np.array([[0.0, 0.0], [np.e, 0.0]]), Circulations(1.0)
    )
    assert hamiltonian(far) == pytest.approx(-1.0, abs=1e-14)


def test_hamiltonian_scaling_law():
    rng = np.random.default_rng(1)
    pos = rng.standard_normal((4, 2))
    config = PlanarConfiguration(pos, Circulations(1.0))
    scaled = PlanarConfiguration(3.0 * pos, Circulations(1.0))
    n = 4
    drop = (n * (n - 1) / 2) * np.log(3.0)
    assert hamiltonian(scaled) == pytest.approx(hamiltonian(config) - drop, rel=1e-12)


def test_hamiltonian_rigid_motion_invariance():
    rng = np.random.default_rng(2)
    pos = rng.standard_normal((4, 2))
    config = PlanarConfiguration(pos, Circulations(5e-3))
    c, s = np.cos(0.8), np.sin(0.8)
    moved = pos @ np.array([[c, -s], [s, c]]).T + np.array([0.3, -0.7])
    assert hamiltonian(
        PlanarConfiguration(moved, Circulations(5e-3))
    ) == pytest.approx(hamiltonian(config), rel=1e-12)


def test_configuration_rejects_collision():
    with pytest.raises(VortexCollision):
        PlanarConfiguration(
            np.array([[0.0, 0.0], [1e-11, 0.0]]), Circulations(1e-3)
        )


def test_rk4_conservation_one_period(min3_eq):
    config = PlanarConfiguration.from_equilibrium(min3_eq)
    traj = integrate_rk4(config, TWO_PI / 4096, TWO_PI)
    assert traj.times.size == 4097
    assert np.all(np.diff(traj.times) > 0)
    assert rigidity_error(traj) < 1e-6
    h0 = hamiltonian(config)
    m0 = vorticity_moment(config)
    last = PlanarConfiguration(traj.positions[-1], config.circulations)
    assert abs(hamiltonian(last) - h0) / abs(h0) < 1e-8
    assert abs(vorticity_moment(last) - m0) / abs(m0) < 1e-8
    cov0 = config.center_of_vorticity
    cov1 = PlanarConfiguration(
        traj.positions[-1], config.circulations
    ).center_of_vorticity
    assert np.abs(cov1 - cov0).max() < 1e-10


def test_rk4_convergence_order(min3_eq):
    base = min3_eq.all_positions()
    config = PlanarConfiguration.from_equilibrium(min3_eq)

    def final_error(steps):
        traj = integrate_rk4(config, TWO_PI / steps, TWO_PI)
        angle = min3_eq.omega * traj.times[-1]
        c, s = np.cos(angle), np.sin(angle)
        exact = base @ np.array([[c, -s], [s, c]]).T
        return np.abs(traj.positions[-1] - exact).max()

    def rigidity(steps):
        return rigidity_error(integrate_rk4(config, TWO_PI / steps, TWO_PI))

    order = np.log2(final_error(256) / final_error(512))
    assert 3.7 <= order <= 4.3
    # the shape error superconverges: the leading global error is a rotation
    # lag, invisible to pairwise distances, so at least 4th order here
    assert np.log2(rigidity(256) / rigidity(512)) >= 3.7


def test_rk4_collision_abort():
    pos = np.array([[0.0, 0.0], [5e-10, 0.0], [1.0, 0.0]])
    config = PlanarConfiguration(pos, Circulations(1e-3))
    with pytest.raises(CollisionAbort) as info:
        integrate_rk4(config, 1e-3, 1.0)
    partial = info.value.trajectory
    assert partial is not None
    assert partial.times.size >= 1


def test_rigidity_error_flags_shear():
    rng = np.random.default_rng(3)
    pos = rng.standard_normal((4, 2)) * 1.5
    config = PlanarConfiguration(pos, Circulations(0.5))
    traj = integrate_rk4(config, 1e-3, 1.0)
    assert rigidity_error(traj) > 1e-3


def test_growth_unstable_pair_matches_prediction(collinear_eq):
    report = perturbation_growth(collinear_eq, amplitude=1e-6, t_final=200.0, h=0.02)
    target = np.sqrt(2 * 1.5 * 1e-3)
    assert report.fitted_rate == pytest.approx(target, rel=0.2)
    assert report.predicted_rate == pytest.approx(target, rel=0.01)
    assert report.window_points > 100


def test_growth_stable_pair_stays_flat(triangle_eq):
    report = perturbation_growth(triangle_eq, amplitude=1e-6, t_final=200.0, h=0.02)
    unstable_rate = np.sqrt(2 * 1.5 * 1e-3)
    assert abs(report.fitted_rate) < 0.1 * unstable_rate
    assert report.max_deviation < 1e-4


def test_growth_zero_amplitude(triangle_eq):
    report = perturbation_growth(triangle_eq, amplitude=0.0, t_final=TWO_PI)
    assert report.max_deviation < 1e-10


def test_growth_deterministic(collinear_eq):
    a = perturbation_growth(collinear_eq, amplitude=1e-6, t_final=20.0, h=0.05, seed=4)
    b = perturbation_growth(collinear_eq, amplitude=1e-6, t_final=20.0, h=0.05, seed=4)
    assert a.fitted_rate == b.fitted_rate
    assert a.max_deviation == b.max_deviation
