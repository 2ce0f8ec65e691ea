import numpy as np
import pytest

from polyion.core.errors import ConfigError, DomainError
from polyion.core.io import read_csv
from polyion.core.units import amu, h
from polyion.optics import (LatticeConfig, alpha_eff, anisotropy, lattice_secular_frequency,
                            linear_rotor_polarizability, max_acceleration, peak_intensity,
                            potential_from_alpha, potential_profile, potential_table,
                            rayleigh_length, write_potential_csv)


@pytest.fixture
def beam():
    return LatticeConfig()


@pytest.fixture
def deep(beam):
    return potential_from_alpha(2.0e-39, beam)


def test_beam_geometry(beam):
    assert peak_intensity(beam) == pytest.approx(6.366e9, rel=1e-3)
    assert rayleigh_length(beam) == pytest.approx(2.992e-4, rel=1e-3)
    assert beam.node_spacing == pytest.approx(525e-9)


def test_lattice_config_validation():
    with pytest.raises(ConfigError):
        LatticeConfig(wavelength=-1e-6)
    with pytest.raises(ConfigError):
        LatticeConfig(direction=(0.0, 0.0, 1.0), polarization=(0.0, 0.0, 1.0))
    with pytest.raises(ConfigError):
        LatticeConfig(direction=(0.0, 0.0, 2.0))


def test_reference_potential_constants(deep):
    mass = 76 * amu
    assert deep.U0_hz == pytest.approx(7.24e6, rel=2e-3)
    assert lattice_secular_frequency(deep, mass) == pytest.approx(2.333e6, rel=2e-3)
    assert max_acceleration(deep, mass) == pytest.approx(4.549e5, rel=2e-3)


def test_secular_frequency_needs_a_trapping_potential(beam):
    with pytest.raises(DomainError):
        lattice_secular_frequency(potential_from_alpha(0.0, beam), 76 * amu)


def test_force_is_minus_the_gradient(deep):
    z = np.linspace(-300e-9, 300e-9, 7)
    step = 1e-12
    numeric = -(deep(z + step) - deep(z - step)) / (2 * step)
    assert deep.force(z) == pytest.approx(numeric, rel=1e-5, abs=1e-25)


def test_offset_puts_the_molecule_on_the_steepest_slope(deep):
    assert abs(deep(0.0)) < 1e-12 * deep.U0
    assert abs(deep.force(0.0)) == pytest.approx(deep.U0 * deep.wavenumber)


def test_anisotropy(generic76, propanediol):
    assert anisotropy(generic76) == pytest.approx(0.5, rel=1e-3)
    par, perp = linear_rotor_polarizability(3.0, 0.5)
    assert (par + 2 * perp) / 3 == pytest.approx(3.0)
    assert (par - perp) / 3.0 == pytest.approx(0.5)


def test_isotropic_ground_state_sees_the_mean(propanediol, propanediol_table):
    ground = propanediol_table.by_label("0_0_0_0")
    assert alpha_eff(ground, propanediol) == pytest.approx(propanediol.mean_polarizability,
                                                           rel=1e-12)


def test_j1_m1_projection(generic76, generic_table):
    alpha_a, alpha_b, _ = generic76.polarizability
    for label in ("1_0_1_1", "1_0_1_-1"):
        state = generic_table.by_label(label)
        assert alpha_eff(state, generic76) == pytest.approx(0.2 * alpha_a + 0.8 * alpha_b,
                                                            rel=1e-12)


def test_overrides_pin_alpha(generic76, generic_table):
    assert alpha_eff(generic_table.by_label("0_0_0_0"), generic76) == 2.0e-39
    assert alpha_eff(generic_table.by_label("1_0_1_0"), generic76) == 1.7e-39


def test_alpha_averages_to_the_mean_over_each_manifold(propanediol, propanediol_table):
    for ids in propanediol_table.manifolds.values():
        values = [alpha_eff(propanediol_table[i], propanediol) for i in ids]
        assert np.mean(values) == pytest.approx(propanediol.mean_polarizability, rel=1e-12)


def test_alpha_is_bounded_and_even_in_m(propanediol, propanediol_table):
    low, high = min(propanediol.polarizability), max(propanediol.polarizability)
    for state in propanediol_table:
        value = alpha_eff(state, propanediol)
        assert low * (1 - 1e-12) <= value <= high * (1 + 1e-12)
        mirror = propanediol_table.find(state.J, state.Ka, state.Kc, -state.m)
        assert alpha_eff(mirror, propanediol) == pytest.approx(value, rel=1e-12)


def test_projection_axis(propanediol, propanediol_table):
    state = propanediol_table.find(2, 1, 2, 1)
    mean = propanediol.mean_polarizability
    along_z = alpha_eff(state, propanediol)
    assert alpha_eff(state, propanediol, axis=(0, 0, 1)) == along_z
    assert alpha_eff(state, propanediol, axis=(0, 0, -3)) == pytest.approx(along_z, rel=1e-12)
    along_x = alpha_eff(state, propanediol, axis=(1, 0, 0))
    assert along_x == pytest.approx((3 * mean - along_z) / 2, rel=1e-12)
    assert alpha_eff(state, propanediol, axis=(0, 1, 0)) == pytest.approx(along_x, rel=1e-12)
    assert (along_x * 2 + along_z) / 3 == pytest.approx(mean, rel=1e-12)
    with pytest.raises(DomainError):
        alpha_eff(state, propanediol, axis=(0, 0, 0))
    with pytest.raises(DomainError):
        alpha_eff(state, propanediol, axis=(1, 0))


def test_state_potentials_differ_between_flip_states(generic76, generic_table, sr_setup):
    ground = potential_profile(generic_table.by_label("0_0_0_0"), generic76, sr_setup.lattice)
    excited = potential_profile(generic_table.by_label("1_0_1_0"), generic76, sr_setup.lattice)
    assert ground.U0 / excited.U0 == pytest.approx(2.0 / 1.7)
    assert ground.U0_hz == pytest.approx(7.24e6, rel=2e-3)


def test_potential_table_and_csv(tmp_path, generic76, generic_table, sr_setup):
    states = [generic_table.by_label("0_0_0_0"), generic_table.by_label("1_0_1_0")]
    z = np.linspace(0.0, 1050e-9, 81)
    samples = potential_table(states, generic76, sr_setup.lattice, z)
    assert set(samples) == {"0_0_0_0", "1_0_1_0"}
    ground = samples["0_0_0_0"]
    assert ground.shape == (81, 2)
    assert np.max(np.abs(ground[:, 1])) == pytest.approx(7.24, rel=2e-3)
    path = write_potential_csv(tmp_path / "u.csv", ground, {"seed": 0})
    _, header, rows = read_csv(path)
    assert header == ["z_nm", "U_over_h_MHz"]
    assert float(rows[3][1]) == ground[3, 1]
    assert ground[0, 1] * 1e6 * h == pytest.approx(
        potential_profile(states[0], generic76, sr_setup.lattice)(0.0))
