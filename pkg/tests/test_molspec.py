import itertools

import numpy as np
import pytest
from sympy.physics.wigner import wigner_3j

from polyion.core.errors import ConfigError, DomainError
from polyion.core.units import amu, angstrom3, h, k_B
from polyion.molspec import (LevelTable, MolecularSpecies, Partition, RotationalState,
                             allowed_transitions, angular_momentum, build_hamiltonian_block,
                             export_grotrian, j_max_for_cutoff, ka_kc_labels, line_strength,
                             raman_allowed, reachability, read_grotrian_csv, read_grotrian_json,
                             rotational_temperature, solve_levels, squared_expectation,
                             thermal_candidates, thermal_populations, transition_type,
                             write_grotrian_csv, write_grotrian_json)
from polyion.molspec.direction_cosines import AXES


def linear_state(J, m):
    eigvec = np.zeros(2 * J + 1)
    eigvec[J] = 1.0
    return RotationalState(id=0, J=J, Ka=0, Kc=J, m=m, energy=0.0, eigvec=eigvec)


def cos2_reference(J, m):
    total = 0.0
    for J_prime in (J - 1, J, J + 1):
        if J_prime < 0 or abs(m) > J_prime:
            continue
        total += ((2 * J + 1) * (2 * J_prime + 1)
                  * float(wigner_3j(J_prime, 1, J, -m, 0, m)) ** 2
                  * float(wigner_3j(J_prime, 1, J, 0, 0, 0)) ** 2)
    return total


def test_species_rejects_misordered_constants():
    with pytest.raises(ConfigError):
        MolecularSpecies("bad", 76 * amu, (1e9, 2e9, 0.5e9), (0, 0, 0), (1e-40, 1e-40, 1e-40))
    with pytest.raises(ConfigError):
        MolecularSpecies("bad", -1.0, (3e9, 2e9, 1e9), (0, 0, 0), (1e-40, 1e-40, 1e-40))


def test_hamiltonian_block_is_real_symmetric(propanediol):
    H = build_hamiltonian_block(propanediol, 3)
    assert H.shape == (7, 7)
    assert np.allclose(H, H.T)
    with pytest.raises(DomainError):
        build_hamiltonian_block(propanediol, -1)


def test_ka_kc_labels_run_from_oblate_to_prolate():
    assert ka_kc_labels(0) == [(0, 0)]
    assert ka_kc_labels(1) == [(0, 1), (1, 1), (1, 0)]
    assert ka_kc_labels(2)[0] == (0, 2)
    assert ka_kc_labels(2)[-1] == (2, 0)


def test_j1_energies(propanediol):
    table = solve_levels(propanediol, 1, 1e12)
    A, B, C = propanediol.rot_constants
    energies = [table.find(1, Ka, Kc).energy for Ka, Kc in ka_kc_labels(1)]
    assert energies == pytest.approx([B + C, A + C, A + B], rel=1e-12)


def test_spherical_top_levels_are_degenerate():
    B = 5e9
    species = MolecularSpecies("sphere", 50 * amu, (B, B, B), (0, 0, 0),
                               (angstrom3(3), angstrom3(3), angstrom3(3)))
    table = solve_levels(species, 4, 1e13)
    for state in table:
        assert state.energy == pytest.approx(B * state.J * (state.J + 1), rel=1e-12, abs=1e-3)
    assert len(table) == sum((2 * J + 1) ** 2 for J in range(5))


def test_table_is_sorted_and_labelled(propanediol_table):
    energies = propanediol_table.energies
    assert np.all(np.diff(energies) >= 0)
    assert propanediol_table.ids == list(range(len(propanediol_table)))
    ground = propanediol_table[0]
    assert ground.label == "0_0_0_0"
    assert propanediol_table.by_label("1_0_1_0").J == 1
    with pytest.raises(DomainError):
        propanediol_table.by_label("9_9_9_9")
    for ids in propanediol_table.manifolds.values():
        J = propanediol_table[ids[0]].J
        assert len(ids) == 2 * J + 1


def test_cutoff_bounds_the_table(propanediol, sr_setup):
    cutoff = sr_setup.levels.cutoff
    table = solve_levels(propanediol, j_max_for_cutoff(propanediol, cutoff), cutoff)
    assert max(table.energies) <= cutoff
    bigger = solve_levels(propanediol, j_max_for_cutoff(propanediol, cutoff) + 3, cutoff)
    assert len(bigger) == len(table)


def test_generic76_keeps_the_k0_stack(generic_table):
    assert {state.Ka for state in generic_table} == {0}
    assert len(generic_table) == sum(2 * J + 1 for J in range(8))


@pytest.mark.parametrize("J", range(0, 11))
def test_linear_rotor_cos2_matches_3j_reference(J):
    for m in range(-J, J + 1):
        state = linear_state(J, m)
        assert squared_expectation(state, "a") == pytest.approx(cos2_reference(J, m), abs=1e-12)


def test_direction_cosine_sum_rule(propanediol_table):
    for state in propanediol_table:
        total = sum(squared_expectation(state, axis) for axis in AXES)
        assert total == pytest.approx(1.0, abs=1e-12)


def test_selection_rules(generic_table):
    ground = generic_table.by_label("0_0_0_0")
    j1 = generic_table.by_label("1_0_1_0")
    j2 = generic_table.by_label("2_0_2_0")
    assert transition_type(ground, j1) == "a"
    assert transition_type(ground, j2) is None
    assert transition_type(ground, ground) is None
    assert raman_allowed(ground, j2)
    assert not raman_allowed(ground, ground)
    assert line_strength(ground, j1, "a") == pytest.approx(1.0, rel=1e-12)


def test_generic76_catalog_follows_honl_london(generic76, generic_table):
    catalog = allowed_transitions(generic_table, generic76, 0.0, 20e9)
    first = catalog.entries[0]
    assert first.frequency == pytest.approx(6e9, rel=1e-12)
    assert first.line_strength == pytest.approx(1.0, rel=1e-9)
    assert first.type == "a"
    second = catalog.between(generic_table, (1, 0, 1), (2, 0, 2))
    assert second.frequency == pytest.approx(12e9, rel=1e-12)
    assert second.line_strength == pytest.approx(2.0, rel=1e-9)
    frequencies = [entry.frequency for entry in catalog]
    assert frequencies == sorted(frequencies)
    assert catalog.of_type("b") == []


def test_catalog_bounds_are_checked(generic76, generic_table):
    with pytest.raises(DomainError):
        allowed_transitions(generic_table, generic76, 10e9, 5e9)


def test_reachability(propanediol, propanediol_table, co_like, co_table):
    catalog = allowed_transitions(propanediol_table, propanediol, 0.0, 20e9)
    assert reachability(propanediol_table, catalog, 20e9).all_reached
    co_catalog = allowed_transitions(co_table, co_like, 0.0, 20e9)
    report = reachability(co_table, co_catalog, 20e9)
    assert not report.all_reached
    assert report.reached == ((0, 0, 0),)


def test_thermal_populations(generic_table):
    populations = thermal_populations(generic_table, 10.0)
    assert populations.sum() == pytest.approx(1.0)
    assert populations[0] == populations.max()
    candidates = thermal_candidates(generic_table, 10.0, 50)
    assert len(candidates) == 50
    assert candidates[0] == 0
    assert all(populations[a] >= populations[b] for a, b in zip(candidates, candidates[1:]))
    with pytest.raises(DomainError):
        thermal_populations(generic_table, 0.0)


def test_grotrian_exports_agree(tmp_path, generic76, generic_table):
    catalog = allowed_transitions(generic_table, generic76, 0.0, 40e9)
    diagram = export_grotrian(generic_table, catalog, 20e9)
    below = diagram.partition(Partition.Below)
    above = diagram.partition(Partition.Above)
    assert len(below) + len(above) == len(catalog)
    assert all(row["freq_GHz"] <= 20 for row in below)
    write_grotrian_json(diagram, tmp_path / "g.json", {"seed": 1})
    write_grotrian_csv(diagram, tmp_path / "levels.csv", tmp_path / "lines.csv")
    from_json = read_grotrian_json(tmp_path / "g.json")
    from_csv = read_grotrian_csv(tmp_path / "levels.csv", tmp_path / "lines.csv")
    assert from_json.to_document() == diagram.to_document()
    assert from_csv.to_document() == diagram.to_document()


def test_propanediol_table_size_at_10_kelvin(propanediol, propanediol_table):
    cutoff = propanediol_table.max_energy_cutoff
    expected_states = 0
    expected_levels = 0
    for J in range(j_max_for_cutoff(propanediol, cutoff) + 1):
        below = int(np.sum(np.linalg.eigvalsh(build_hamiltonian_block(propanediol, J)) <= cutoff))
        expected_levels += below
        expected_states += (2 * J + 1) * below
    assert len(propanediol_table) == expected_states
    assert len(propanediol_table.manifolds) == expected_levels
    assert 100 < expected_states < 1000
    assert 10 < expected_levels < 100


@pytest.mark.parametrize("J", range(0, 7))
def test_energies_are_invariant_under_axis_relabelling(propanediol, J):
    reference = np.linalg.eigvalsh(build_hamiltonian_block(propanediol, J))
    operators = angular_momentum(J)
    for constants in itertools.permutations(propanediol.rot_constants):
        H = sum(c * (op @ op) for c, op in zip(constants, operators))
        energies = np.linalg.eigvalsh(H)
        assert energies == pytest.approx(reference, rel=1e-10, abs=1e-3)


def test_catalog_frequency_is_the_energy_gap(propanediol, propanediol_table):
    catalog = allowed_transitions(propanediol_table, propanediol, 0.0, 40e9)
    assert len(catalog) > 0
    for entry in catalog:
        gap = propanediol_table[entry.upper].energy - propanediol_table[entry.lower].energy
        assert entry.frequency == pytest.approx(gap, rel=1e-9)


def test_two_level_populations_follow_boltzmann(generic76):
    E1 = 6e9
    ground = RotationalState(id=0, J=0, Ka=0, Kc=0, m=0, energy=0.0, eigvec=np.ones(1))
    excited = RotationalState(id=1, J=1, Ka=0, Kc=1, m=0, energy=E1,
                              eigvec=np.array([0.0, 1.0, 0.0]))
    table = LevelTable(generic76, [ground, excited], E1)
    populations = thermal_populations(table, h * E1 / (k_B * np.log(2)))
    assert populations == pytest.approx([2 / 3, 1 / 3], rel=1e-12)


def test_cold_limit_populates_the_ground_state(generic_table):
    populations = thermal_populations(generic_table, 0.01)
    assert populations[0] == pytest.approx(1.0, abs=1e-11)


def test_rotational_temperature():
    assert rotational_temperature(3e9) == pytest.approx(0.288, rel=1e-3)


def test_propanediol_grotrian_has_both_partitions(propanediol, propanediol_table):
    catalog = allowed_transitions(propanediol_table, propanediol, 0.0, 40e9)
    diagram = export_grotrian(propanediol_table, catalog, 20e9)
    below = diagram.partition(Partition.Below)
    above = diagram.partition(Partition.Above)
    assert len(below) > 0 and len(above) > 0
    assert all(row["freq_GHz"] >= 20 for row in above)
