import numpy as np
import pytest
from scipy.linalg import expm

from polyion.core.errors import ConfigError, DomainError
from polyion.core.units import DEBYE
from polyion.pulses import (DriveField, DriveKind, Enantiomer, InternalState, chiral_transfer,
                            cyclic_duration, evolve, field_from_dict, load_pulse_program,
                            loop_phase, optimize_chiral_contrast, pi_pulse_schedule, propagator,
                            rabi_from_voltage, schedule_to_fields, write_pulse_program)

RABI = 2 * np.pi * 1e6
EQUAL = {"AB": RABI, "AC": RABI, "CB": RABI}


def rabi_transfer(rabi, detuning, duration):
    generalized = np.hypot(rabi, detuning)
    return (rabi / generalized) ** 2 * np.sin(generalized * duration / 2) ** 2


@pytest.fixture(scope="module")
def chiral():
    return optimize_chiral_contrast(RABI)


def test_rabi_from_voltage():
    rabi = rabi_from_voltage(1.0, 2 * DEBYE, 1e-3)
    assert rabi / (2 * np.pi) == pytest.approx(10.068e6, rel=1e-3)
    with pytest.raises(DomainError):
        rabi_from_voltage(1.0, DEBYE, 0.0)


def test_resonant_pi_pulse_transfers_everything():
    duration = np.pi / RABI
    drive = DriveField((0, 1), RABI, windows=((0.0, duration),))
    final = evolve(InternalState.basis((0, 1), 0), [drive], duration).final
    assert final.population(1) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("ratio", [0.3, 1.0, 2.5])
def test_detuned_pulse_follows_the_rabi_formula(ratio):
    detuning = ratio * RABI
    duration = 0.7e-6
    drive = DriveField((0, 1), RABI, detuning, windows=((0.0, duration),))
    final = evolve(InternalState.basis((0, 1), 0), [drive], duration).final
    assert final.population(1) == pytest.approx(rabi_transfer(RABI, detuning, duration), abs=1e-10)


def test_piecewise_evolution_matches_matrix_exponentials():
    ids = (0, 1, 2)
    first = DriveField((0, 1), RABI, 0.0, 0.4, windows=((0.0, 2e-7),))
    second = DriveField((1, 2), 0.5 * RABI, 0.2 * RABI, 1.1, windows=((1e-7, 3e-7),))
    H1 = np.zeros((3, 3), dtype=complex)
    H1[0, 1] = 0.5 * RABI * np.exp(0.4j)
    H1[1, 0] = np.conj(H1[0, 1])
    H1[2, 2] = -0.2 * RABI
    H2 = H1.copy()
    H2[1, 2] = 0.25 * RABI * np.exp(1.1j)
    H2[2, 1] = np.conj(H2[1, 2])
    H3 = H2.copy()
    H3[0, 1] = H3[1, 0] = 0.0
    U = expm(-1j * H3 * 1e-7) @ expm(-1j * H2 * 1e-7) @ expm(-1j * H1 * 1e-7)
    assert propagator([first, second], ids, 3e-7) == pytest.approx(U, abs=1e-12)
    final = evolve(InternalState.basis(ids, 0), [first, second], 3e-7, dt=3e-8).final
    assert final.amplitudes == pytest.approx(U[:, 0], abs=1e-12)


def test_sampled_evolution_keeps_the_norm():
    drive = DriveField((0, 1), RABI, 0.1 * RABI, windows=((0.0, 1e-6),))
    evolution = evolve(InternalState.basis((0, 1), 0), [drive], 1.2e-6, dt=1e-7)
    assert evolution.times[0] == 0.0
    assert evolution.times[-1] == pytest.approx(1.2e-6)
    assert np.all(np.diff(evolution.times) > 0)
    assert len(evolution.amplitudes) == len(evolution.times)
    assert evolution.populations().sum(axis=1) == pytest.approx(1.0, abs=1e-10)


def test_field_validation():
    with pytest.raises(ConfigError):
        DriveField((1, 1), RABI)
    with pytest.raises(ConfigError):
        DriveField((0, 1), -RABI)
    with pytest.raises(ConfigError):
        DriveField((0, 1), RABI, windows=((0.0, 2e-6), (1e-6, 3e-6)))
    with pytest.raises(DomainError):
        InternalState((0, 1), [1.0, 1.0])


def test_conflicting_fields_are_rejected():
    state = InternalState.basis((0, 1, 2), 0)
    overlapping = [DriveField((0, 1), RABI, windows=((0.0, 2e-6),)),
                   DriveField((1, 0), RABI, windows=((1e-6, 3e-6),))]
    with pytest.raises(ConfigError, match="overlapping"):
        evolve(state, overlapping, 3e-6)
    detuned = [DriveField((0, 2), RABI, 1e5, windows=((0.0, 1e-6),)),
               DriveField((1, 2), RABI, 2e5, windows=((2e-6, 3e-6),))]
    with pytest.raises(ConfigError, match="detunings"):
        evolve(state, detuned, 3e-6)
    with pytest.raises(ConfigError):
        evolve(state, [DriveField((0, 5), RABI, windows=((0.0, 1e-6),))], 1e-6)


def test_schedule_drops_overlapping_pulses():
    width = np.pi / RABI
    drive = schedule_to_fields([0.0, 0.1 * width, 2 * width], (0, 1), RABI)
    assert len(drive.windows) == 2
    assert np.ravel(drive.windows) == pytest.approx([0.0, width, 2 * width, 3 * width])


def test_dithered_pi_pulses_toggle_the_pair():
    times = pi_pulse_schedule((0, 1), RABI, 1e5, 1e-4, seed=4)
    assert times[0] == 0.0
    assert times == pi_pulse_schedule((0, 1), RABI, 1e5, 1e-4, seed=4)
    drive = schedule_to_fields(times, (0, 1), RABI)
    final = evolve(InternalState.basis((0, 1), 0), [drive], drive.windows[-1][1]).final
    assert final.population(1) == pytest.approx(len(drive.windows) % 2, abs=1e-8)


def test_ladder_populations_do_not_depend_on_phases():
    state = InternalState.basis((0, 1, 2), 0)

    def populations(phi_1, phi_2):
        fields = [DriveField((0, 1), RABI, 0.0, phi_1, ((0.0, 1e-6),)),
                  DriveField((1, 2), 0.7 * RABI, 0.0, phi_2, ((0.0, 1e-6),))]
        return np.abs(evolve(state, fields, 1e-6).final.amplitudes) ** 2

    assert populations(0.8, -2.1) == pytest.approx(populations(0.0, 0.0), abs=1e-12)


def test_loop_phase():
    assert loop_phase({"AB": 1.0, "AC": 0.25, "CB": 0.5}) == pytest.approx(0.25)


def test_cyclic_solution_transfers_one_enantiomer():
    duration = cyclic_duration(RABI)
    phases = {"AB": np.pi / 2, "AC": 0.0, "CB": 0.0}
    transfers = [chiral_transfer(phases, EQUAL, enantiomer, duration) for enantiomer in Enantiomer]
    assert max(transfers) == pytest.approx(1.0, abs=1e-9)
    assert min(transfers) == pytest.approx(0.0, abs=1e-9)


def test_optimized_contrast(chiral):
    assert chiral.contrast >= 0.99
    assert chiral.P_B_R > chiral.P_B_S
    assert chiral.summary()["contrast"] == chiral.contrast


@pytest.mark.parametrize("path", ["AB", "AC", "CB"])
def test_pi_shift_on_one_field_swaps_the_enantiomers(chiral, path):
    shifted = dict(chiral.phases)
    shifted[path] += np.pi
    for enantiomer, other in ((Enantiomer.R, Enantiomer.S), (Enantiomer.S, Enantiomer.R)):
        moved = chiral_transfer(shifted, EQUAL, enantiomer, chiral.duration)
        reference = chiral_transfer(chiral.phases, EQUAL, other, chiral.duration)
        assert moved == pytest.approx(reference, abs=1e-6)


def test_chiral_transfer_needs_three_states():
    with pytest.raises(ConfigError):
        chiral_transfer({"AB": 0, "AC": 0, "CB": 0}, EQUAL, Enantiomer.R, 1e-6, (0, 0, 1))
    with pytest.raises(ConfigError):
        chiral_transfer({"AB": 0, "AC": 0}, EQUAL, Enantiomer.R, 1e-6)


def test_pulse_program_round_trip(tmp_path):
    fields = [DriveField((0, 2), RABI, 2 * np.pi * 5e3, 0.3, ((0.0, 1e-6), (2e-6, 3e-6))),
              DriveField((2, 4), 0.5 * RABI, 0.0, 0.0, ((1e-6, 2e-6),), DriveKind.Raman)]
    path = write_pulse_program(tmp_path / "program.json", fields)
    loaded = load_pulse_program(path)
    for original, restored in zip(fields, loaded):
        assert restored.pair == original.pair
        assert restored.kind is original.kind
        assert restored.rabi_frequency == pytest.approx(original.rabi_frequency, rel=1e-12)
        assert restored.detuning == pytest.approx(original.detuning, rel=1e-12)
        assert np.ravel(restored.windows) == pytest.approx(np.ravel(original.windows), rel=1e-12)
    with pytest.raises(ConfigError, match="unknown"):
        field_from_dict({"pair": [0, 1], "rabi_MHz": 1, "windows_us": [], "colour": "red"})
