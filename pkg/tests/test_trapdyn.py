import numpy as np
import pytest

from polyion.core.errors import ConfigError, DomainError
from polyion.core.units import COULOMB_CONSTANT, amu, e, k_B
from polyion.optics import potential_from_alpha, potential_profile
from polyion.trapdyn import (DEFAULT_DT, FlipProcess, LatticeField, TrapConfig, check_time_step,
                             equilibrium_positions, heating_rate, impulse_scaling, integrate,
                             integrate_many, mean_occupation, mode_energies, normal_modes,
                             poisson_times, sample_thermal_state, telegraph_heating_estimate,
                             temperature_of, trajectory_seeds)


def two_by_two_frequencies(a, b, c):
    """Square roots of the eigenvalues of [[a, c], [c, b]]"""
    mean, half = (a + b) / 2, np.hypot((a - b) / 2, c)
    return np.sqrt([mean - half, mean + half])


@pytest.fixture(scope="module")
def flip_field(generic76, generic_table, sr_setup):
    ids = [generic_table.by_label(label).id for label in sr_setup.heating.flip_states]
    potentials = {i: potential_profile(generic_table[i], generic76, sr_setup.lattice) for i in ids}
    return LatticeField(potentials, tuple(sr_setup.lattice.direction)), FlipProcess(2e6, tuple(ids))


def test_trap_validation():
    with pytest.raises(ConfigError):
        TrapConfig(secular_freqs=(1e6, 1e6, 2e6))
    with pytest.raises(ConfigError):
        TrapConfig(atom_charge=-e)


def test_equilibrium_separation(sr_trap):
    positions = equilibrium_positions(sr_trap)
    k_z = sr_trap.spring_constants[0, 2]
    separation = (2 * COULOMB_CONSTANT * e ** 2 / k_z) ** (1 / 3)
    assert positions[1, 2] - positions[0, 2] == pytest.approx(separation, rel=1e-9)
    assert positions[0, 2] < 0 < positions[1, 2]
    assert np.allclose(positions[:, :2], 0.0, atol=1e-15)
    mirrored = equilibrium_positions(sr_trap, atom_first=False)
    assert mirrored[0, 2] > 0


def test_normal_modes_match_closed_form(sr_trap):
    modes = normal_modes(sr_trap)
    wx, _, wz = sr_trap.secular_freqs
    ratio = (88 * amu) / (76 * amu)
    axial = two_by_two_frequencies(2 * wz ** 2, 2 * wz ** 2 * ratio, -wz ** 2 * np.sqrt(ratio))
    radial = two_by_two_frequencies(wx ** 2 - wz ** 2 / 2,
                                    ratio ** 2 * wx ** 2 - ratio * wz ** 2 / 2,
                                    wz ** 2 / 2 * np.sqrt(ratio))
    expected = np.sort(np.concatenate([axial, radial, radial]))
    assert modes.frequencies == pytest.approx(expected, rel=1e-9)
    assert modes.frequencies == pytest.approx([1.950e6, 3.396e6, 6.118e6, 6.118e6, 7.152e6,
                                               7.152e6], rel=1e-3)


def test_molecule_participation(sr_trap, sr_setup):
    modes = normal_modes(sr_trap)
    participation = modes.molecule_participation(np.asarray(sr_setup.lattice.direction))
    assert participation.sum() == pytest.approx(1.0, rel=1e-12)
    assert participation[0] == pytest.approx(0.1424, abs=2e-3)
    assert participation[1] == pytest.approx(0.1909, abs=2e-3)


def test_thermal_sampling(sr_trap):
    modes = normal_modes(sr_trap)
    rest = sample_thermal_state(sr_trap, 0.0, modes=modes)
    assert np.array_equal(rest.positions, modes.equilibrium)
    assert not rest.velocities.any()
    rng = np.random.default_rng(11)
    energies = np.array([mode_energies(modes, sample_thermal_state(sr_trap, 1e-3, rng, modes))
                         for _ in range(2000)])
    assert energies.mean() / k_B == pytest.approx(1e-3, rel=0.05)
    with pytest.raises(ConfigError):
        sample_thermal_state(sr_trap, -1.0)


def test_mean_occupation():
    assert mean_occupation(2e-3, 2 * np.pi * 1e6) == pytest.approx(41.7, rel=2e-3)
    with pytest.raises(DomainError):
        mean_occupation(1e-3, 0.0)


def test_poisson_times_start_at_zero():
    times = poisson_times(2e6, 1e-4, np.random.default_rng(0))
    assert times[0] == 0.0
    assert np.all(np.diff(times) > 0)
    assert times[-1] <= 1e-4
    assert len(times) == pytest.approx(200, rel=0.3)
    assert list(poisson_times(0.0, 1.0, np.random.default_rng(0))) == [0.0]


def test_flip_process_ignores_unaddressed_labels():
    flips = FlipProcess(1e6, (3, 4))
    times, labels = flips.draw(7, 1e-4, np.random.default_rng(0))
    assert len(times) == 0 and labels == []
    times, labels = flips.draw(3, 1e-5, np.random.default_rng(0))
    assert labels[0] == 4
    assert all(a != b for a, b in zip(labels, labels[1:]))
    with pytest.raises(ConfigError):
        FlipProcess(1e6, (3, 3))


def test_time_step_bound(sr_trap, flip_field):
    field, _ = flip_field
    modes = normal_modes(sr_trap)
    assert check_time_step(2.5e-9, modes, field, sr_trap.molecule_mass) < 0.02
    with pytest.raises(DomainError):
        check_time_step(1e-8, modes, field, sr_trap.molecule_mass)


def energy_drift(trap, t_end, dt, record_every=100, seed=5):
    start = sample_thermal_state(trap, 1e-3, seed, normal_modes(trap))
    trajectory = integrate(trap, None, None, t_end, dt, start, seed, 0, record_every)
    return np.abs(trajectory.energies - trajectory.energies[0]).max() / trajectory.energies[0]


def test_flip_free_energy_conservation(sr_trap):
    assert energy_drift(sr_trap, 5e-5, DEFAULT_DT) < 1e-6


@pytest.mark.slow
def test_flip_free_energy_conservation_over_a_millisecond(sr_trap):
    assert energy_drift(sr_trap, 1e-3, DEFAULT_DT) < 1e-6


def test_energy_error_falls_with_the_fourth_power_of_dt(slow_trap):
    coarse = energy_drift(slow_trap, 2e-4, 4e-8, record_every=25)
    fine = energy_drift(slow_trap, 2e-4, 2e-8, record_every=50)
    assert fine < coarse / 8


def test_batch_matches_single_trajectory(sr_trap, flip_field):
    field, flips = flip_field
    label = flips.labels[0]
    batch = integrate_many(sr_trap, field, flips, 2e-5, 2.5e-9, 3, 20e-6, 42, label)
    child = trajectory_seeds(42, 3)[1]
    rng = np.random.default_rng(child)
    start = sample_thermal_state(sr_trap, 20e-6, rng)
    single = integrate(sr_trap, field, flips, 2e-5, 2.5e-9, start, rng, label)
    assert np.array_equal(batch[1].flip_times, single.flip_times)
    assert np.array_equal(batch[1].labels, single.labels)
    np.testing.assert_allclose(batch[1].positions, single.positions, rtol=1e-12, atol=1e-20)


def test_same_seed_same_trajectories(sr_trap, flip_field):
    field, flips = flip_field
    first = integrate_many(sr_trap, field, flips, 1e-5, 2.5e-9, 2, 20e-6, 7, flips.labels[0])
    second = integrate_many(sr_trap, field, flips, 1e-5, 2.5e-9, 2, 20e-6, 7, flips.labels[0])
    for a, b in zip(first, second):
        assert np.array_equal(a.positions, b.positions)
        assert np.array_equal(a.flip_times, b.flip_times)


def test_temperature_round_trip(sr_trap):
    trajectories = integrate_many(sr_trap, None, None, 2e-5, 2.5e-9, 200, 50e-6, 3, 0)
    temperatures = [temperature_of(traj, 1.65e-5) for traj in trajectories]
    assert np.mean(temperatures) == pytest.approx(50e-6, rel=0.1)
    with pytest.raises(DomainError):
        temperature_of(trajectories[0], 1.0)
    with pytest.raises(DomainError, match="motional periods"):
        temperature_of(trajectories[0], 5e-6)


def test_telegraph_estimate_in_band(sr_trap, flip_field):
    field, flips = flip_field
    assert 0.15 <= telegraph_heating_estimate(sr_trap, field, flips) <= 15


def test_telegraph_estimate_scales_with_the_polarizability_gap(sr_trap, sr_setup):
    direction = tuple(sr_setup.lattice.direction)

    def estimate(low, high):
        field = LatticeField({0: potential_from_alpha(high, sr_setup.lattice),
                              1: potential_from_alpha(low, sr_setup.lattice)}, direction)
        return telegraph_heating_estimate(sr_trap, field, FlipProcess(2e6, (0, 1)))

    reference = estimate(1.7e-39, 2.0e-39)
    assert reference == pytest.approx(0.171, rel=0.03)
    assert estimate(1.7e-39, 2.3e-39) == pytest.approx(4 * reference, rel=1e-9)


def test_impulse_variance_grows_with_flips(sr_trap, flip_field):
    field, flips = flip_field
    trajectories = integrate_many(sr_trap, field, flips, 5e-5, 2.5e-9, 100, 20e-6, 9,
                                  flips.labels[0])
    scaling = impulse_scaling(trajectories)
    assert scaling.slope > 0
    assert scaling.r_squared > 0.9


@pytest.fixture(scope="module")
def flipped_rate(sr_trap, flip_field):
    field, flips = flip_field
    return heating_rate(sr_trap, field, flips, n_traj=50, t_end=2e-3, seed=1)


@pytest.mark.slow
def test_heating_rate_in_band(flipped_rate, sr_trap, flip_field):
    assert 0.15 <= flipped_rate.rate <= 15
    assert flipped_rate.r_squared > 0.9
    assert flipped_rate.stderr < flipped_rate.rate
    field, flips = flip_field
    estimate = telegraph_heating_estimate(sr_trap, field, flips)
    assert estimate / 3 < flipped_rate.rate < 2 * estimate


@pytest.mark.slow
def test_heating_rate_is_seed_independent(flipped_rate, sr_trap, flip_field):
    field, flips = flip_field
    other = heating_rate(sr_trap, field, flips, n_traj=50, t_end=2e-3, seed=7)
    assert 0.15 <= other.rate <= 15
    assert abs(other.rate - flipped_rate.rate) < 3 * np.hypot(other.stderr, flipped_rate.stderr)


@pytest.mark.slow
@pytest.mark.parametrize("factor, dt", [(0.7, 2.5e-9), (1.3, 1.8e-9)])
def test_heating_rate_is_robust_to_the_trap_frequency(flipped_rate, sr_trap, flip_field,
                                                      factor, dt):
    field, flips = flip_field
    scaled = heating_rate(sr_trap.scaled(factor), field, flips, n_traj=20, t_end=2e-3, seed=3,
                          dt=dt)
    assert flipped_rate.rate / 10 < scaled.rate < 10 * flipped_rate.rate


@pytest.mark.slow
def test_held_state_does_not_heat(flipped_rate, sr_trap, flip_field, generic76, generic_table,
                                  sr_setup):
    field, flips = flip_field
    held = generic_table.by_label(sr_setup.heating.held_state)
    assert held.id not in flips.labels
    potentials = dict(field.potentials)
    potentials[held.id] = potential_profile(held, generic76, sr_setup.lattice)
    with_held = LatticeField(potentials, field.direction)
    result = heating_rate(sr_trap, with_held, flips, n_traj=50, t_end=2e-3, seed=1,
                          initial_label=held.id)
    assert abs(result.rate) < 0.01 * flipped_rate.rate


@pytest.mark.slow
def test_equal_polarizabilities_do_not_heat(sr_trap, sr_setup):
    potential = potential_from_alpha(2.0e-39, sr_setup.lattice)
    field = LatticeField({0: potential, 1: potential}, tuple(sr_setup.lattice.direction))
    flips = FlipProcess(2e6, (0, 1))
    result = heating_rate(sr_trap, field, flips, n_traj=20, t_end=5e-4, seed=2)
    assert abs(result.rate) < max(3 * result.stderr, 0.01)
