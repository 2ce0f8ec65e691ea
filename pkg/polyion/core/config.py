"""
Config Module

This module reads the species and trap/lattice JSON files into typed,
frozen configuration objects. Files use laboratory units (GHz, MHz, Debye,
cubic angstrom, nm, um, mK); everything is converted to SI here.

Each section has a `*_problems` function returning every violation it finds,
so validation reports all of them at once; the loaders raise ConfigError
with the collected messages.
"""

import copy
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..molspec.species import MolecularSpecies
from ..optics.lattice import LatticeConfig
from ..protocol.measurement import MODES
from ..protocol.spectroscopy import SEQUENCES
from ..protocol.thermometer import Thermometer
from ..trapdyn.trap import TrapConfig
from .errors import ConfigError
from .io import read_json
from .units import amu, angstrom3, angular, debye, e, ghz, h, k_B, mhz

logger = logging.getLogger(__name__)

SPECIES_KEYS = ("name", "mass_amu", "A_GHz", "B_GHz", "C_GHz", "mu_a_D", "mu_b_D", "mu_c_D",
                "alpha_a_A3", "alpha_b_A3", "alpha_c_A3", "alpha_eff_overrides")
SECTIONS = ("trap", "lattice", "microwave", "thermometer", "heating", "levels", "protocol",
            "scan", "chiral")

Document = Dict[str, Any]


def _number(doc: Mapping[str, Any], key: str, where: str, problems: List[str],
            positive: bool = False, non_negative: bool = False) -> Optional[float]:
    if key not in doc:
        problems.append(f"{where}.{key}: missing")
        return None
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
        problems.append(f"{where}.{key}: expected a finite number, got {value!r}")
        return None
    if positive and value <= 0:
        problems.append(f"{where}.{key}: must be positive, got {value}")
    elif non_negative and value < 0:
        problems.append(f"{where}.{key}: must be >= 0, got {value}")
    return float(value)


def _vector(doc: Mapping[str, Any], key: str, where: str,
            problems: List[str]) -> Optional[np.ndarray]:
    value = doc.get(key)
    if (not isinstance(value, (list, tuple)) or len(value) != 3
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        problems.append(f"{where}.{key}: expected three numbers, got {value!r}")
        return None
    vector = np.asarray(value, dtype=float)
    norm = np.linalg.norm(vector)
    if norm == 0:
        problems.append(f"{where}.{key}: zero vector")
        return None
    return vector / norm


def load_document(source: Union[str, Path, Mapping[str, Any]]) -> Document:
    """A JSON object read from a path, or a copy of an in-memory mapping"""
    if isinstance(source, Mapping):
        return dict(source)
    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"{path}: file not found")
    try:
        document = read_json(path)
    except ValueError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return document


# species

def species_problems(doc: Mapping[str, Any]) -> List[str]:
    """Every violation in a species document"""
    problems: List[str] = [f"species.{key}: unknown key" for key in doc if key not in SPECIES_KEYS]
    if not isinstance(doc.get("name"), str) or not doc.get("name"):
        problems.append("species.name: missing or not a string")
    _number(doc, "mass_amu", "species", problems, positive=True)
    constants = [_number(doc, key, "species", problems, positive=True)
                 for key in ("A_GHz", "B_GHz", "C_GHz")]
    if None not in constants and not (constants[0] >= constants[1] >= constants[2]):
        problems.append(f"species: rotational constants must satisfy A >= B >= C, got {constants}")
    for key in ("mu_a_D", "mu_b_D", "mu_c_D"):
        mu = _number(doc, key, "species", problems)
        if mu is not None and abs(mu) > 100:
            problems.append(f"species.{key}: |mu| exceeds 100 Debye")
    alphas = [_number(doc, key, "species", problems, non_negative=True)
              for key in ("alpha_a_A3", "alpha_b_A3", "alpha_c_A3")]
    if None not in alphas and sum(alphas) <= 0:
        problems.append("species: mean polarizability must be positive")
    overrides = doc.get("alpha_eff_overrides", {})
    if not isinstance(overrides, Mapping):
        problems.append("species.alpha_eff_overrides: expected an object")
    else:
        for label, value in overrides.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                problems.append(f"species.alpha_eff_overrides.{label}: expected a number")
    return problems


def species_from_document(doc: Mapping[str, Any]) -> MolecularSpecies:
    """
    Build a MolecularSpecies from a species document

    Raises:
        ConfigError: Listing every violation found
    """
    problems = species_problems(doc)
    if problems:
        raise ConfigError("; ".join(problems))
    return MolecularSpecies(
        name=doc["name"],
        mass=doc["mass_amu"] * amu,
        rot_constants=(ghz(doc["A_GHz"]), ghz(doc["B_GHz"]), ghz(doc["C_GHz"])),
        dipole=(debye(doc["mu_a_D"]), debye(doc["mu_b_D"]), debye(doc["mu_c_D"])),
        polarizability=(angstrom3(doc["alpha_a_A3"]), angstrom3(doc["alpha_b_A3"]),
                        angstrom3(doc["alpha_c_A3"])),
        alpha_eff_overrides={str(k): float(v)
                             for k, v in doc.get("alpha_eff_overrides", {}).items()},
    )


def load_species(source: Union[str, Path, Mapping[str, Any]]) -> MolecularSpecies:
    """Read a species JSON file"""
    species = species_from_document(load_document(source))
    logger.debug("loaded species %s", species.name)
    return species


# trap and lattice

@dataclass(frozen=True)
class MicrowaveConfig:
    """
    Attributes:
        voltage (float): Drive amplitude across the electrodes in V
        electrode_spacing (float): Electrode separation in m
        flip_rate (float): Mean rate of dithered pi-pulses in 1/s
    """

    voltage: float = 1.0
    electrode_spacing: float = 1e-3
    flip_rate: float = 2e6


@dataclass(frozen=True)
class HeatingConfig:
    """
    Attributes:
        temperature (float): Initial crystal temperature in K
        t_end (float): Trajectory duration in s
        n_traj (int): Number of trajectories
        dt (float): Integrator step in s
        flip_states (Tuple[str, str]): Labels of the two states the drive toggles
        held_state (str): Label of a state outside the driven pair
        settle (float): Leading fraction of each trajectory excluded from the fit
    """

    temperature: float = 20e-6
    t_end: float = 2e-3
    n_traj: int = 50
    dt: float = 2.5e-9
    flip_states: Tuple[str, str] = ("1_0_1_0", "2_0_2_0")
    held_state: str = "0_0_0_0"
    settle: float = 0.2


@dataclass(frozen=True)
class LevelsConfig:
    """
    Attributes:
        cutoff (float): Highest level energy kept, in Hz
        f_max (float): Upper frequency bound of the transition catalog, in Hz
        split (float): Frequency separating the Grotrian partitions, in Hz
    """

    cutoff: float = 10 * k_B / h
    f_max: float = 40e9
    split: float = 20e9

    @property
    def cutoff_K(self) -> float:
        return self.cutoff * h / k_B


@dataclass(frozen=True)
class ProtocolConfig:
    """
    Attributes:
        rotational_temperature (float): Temperature of the internal-state prior, in K
        n_candidates (int): Most populated states kept in the prior
        runs (int): Independent protocol runs per experiment
        manifold_size (int): States in the preparation manifold
        repetitions (int): Majority-vote repetitions per measurement
        max_rounds (int): Preparation round budget
        mode (str): "fast" or "full"
    """

    rotational_temperature: float = 10.0
    n_candidates: int = 50
    runs: int = 100
    manifold_size: int = 4
    repetitions: int = 1
    max_rounds: int = 50
    mode: str = "fast"


@dataclass(frozen=True)
class ScanConfig:
    """
    Attributes:
        sequence (str): "rabi" or "ramsey"
        duration (float): Pulse length in s
        free_time (float): Ramsey dark time in s
        span (float): Full detuning span in Hz
        points (int): Scan points
        shots (int): Measurements per point
    """

    sequence: str = "rabi"
    duration: float = 1e-3
    free_time: float = 0.0
    span: float = 5e3
    points: int = 101
    shots: int = 0


@dataclass(frozen=True)
class TrapLatticeConfig:
    """
    Apparatus description read from a trap file

    The molecule's mass belongs to the species, so the TrapConfig is built
    per species by trap_for().

    Attributes:
        secular_freqs (Tuple[float, float, float]): Atom secular frequencies in rad/s
        atom_mass (float): Atomic ion mass in kg
        atom_charge (float): Atomic ion charge in C
        molecule_charge (float): Molecular ion charge in C
        lattice (LatticeConfig): Lattice beams
        microwave (MicrowaveConfig): Drive hardware and flip rate
        thermometer (Thermometer): Classifier used by the protocols
        heating (HeatingConfig): Heating-rate experiment parameters
        levels (LevelsConfig): Level table and catalog bounds
        protocol (ProtocolConfig): Search and preparation parameters
        scan (ScanConfig): Spectroscopy scan parameters
        chiral_rabi (float): Rabi frequency of each three-wave-mixing field in rad/s
    """

    secular_freqs: Tuple[float, float, float]
    atom_mass: float
    atom_charge: float
    molecule_charge: float
    lattice: LatticeConfig
    microwave: MicrowaveConfig = field(default_factory=MicrowaveConfig)
    thermometer: Thermometer = field(default_factory=Thermometer)
    heating: HeatingConfig = field(default_factory=HeatingConfig)
    levels: LevelsConfig = field(default_factory=LevelsConfig)
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    chiral_rabi: float = 2 * np.pi * 1e6

    def trap_for(self, species: MolecularSpecies) -> TrapConfig:
        return TrapConfig(self.secular_freqs, self.atom_mass, species.mass, self.atom_charge,
                          self.molecule_charge)


def _section(doc: Mapping[str, Any], name: str, problems: List[str]) -> Mapping[str, Any]:
    section = doc.get(name, {})
    if not isinstance(section, Mapping):
        problems.append(f"{name}: expected an object")
        return {}
    return section


def _optional(section: Mapping[str, Any], key: str, where: str, problems: List[str],
              default: float, **checks) -> float:
    if key not in section:
        return default
    value = _number(section, key, where, problems, **checks)
    return default if value is None else value


def _integer(section: Mapping[str, Any], key: str, where: str, problems: List[str],
             default: int, minimum: int = 1) -> int:
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        problems.append(f"{where}.{key}: expected an integer >= {minimum}, got {value!r}")
        return default
    return value


def _choice(section: Mapping[str, Any], key: str, where: str, problems: List[str],
            default: str, allowed: Sequence[str]) -> str:
    value = section.get(key, default)
    if value not in allowed:
        problems.append(f"{where}.{key}: expected one of {list(allowed)}, got {value!r}")
        return default
    return value


def _parse_setup(doc: Mapping[str, Any]) -> Tuple[Dict[str, Any], List[str]]:
    problems: List[str] = []
    for key in doc:
        if key not in SECTIONS:
            problems.append(f"{key}: unknown section")
    parsed: Dict[str, Any] = {}

    trap = _section(doc, "trap", problems)
    secular = trap.get("secular_MHz")
    if (not isinstance(secular, (list, tuple)) or len(secular) != 3
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0
                       for v in secular)):
        problems.append(f"trap.secular_MHz: expected three positive numbers, got {secular!r}")
        secular = (1.0, 1.0, 0.3)
    elif not (secular[2] < secular[0] and secular[2] < secular[1]):
        problems.append("trap.secular_MHz: axial frequency must be below both radial ones")
    parsed["secular_freqs"] = tuple(angular(mhz(v)) for v in secular)
    parsed["atom_mass"] = _optional(trap, "atom_mass_amu", "trap", problems, 88.0,
                                    positive=True) * amu
    parsed["atom_charge"] = _optional(trap, "atom_charge_e", "trap", problems, 1.0,
                                      positive=True) * e
    parsed["molecule_charge"] = _optional(trap, "molecule_charge_e", "trap", problems, 1.0,
                                          positive=True) * e

    lattice = _section(doc, "lattice", problems)
    wavelength = _number(lattice, "wavelength_nm", "lattice", problems, positive=True)
    power = _number(lattice, "power_W", "lattice", problems, non_negative=True)
    waist = _number(lattice, "waist_um", "lattice", problems, positive=True)
    offset = _number(lattice, "offset_over_lambda", "lattice", problems)
    direction = _vector(lattice, "direction", "lattice", problems)
    polarization = _vector(lattice, "polarization", "lattice", problems)
    if direction is not None and polarization is not None and abs(direction @ polarization) > 1e-9:
        problems.append("lattice.polarization: must be orthogonal to lattice.direction")
    parsed["lattice"] = dict(power=power, wavelength=wavelength, waist=waist, offset=offset,
                             direction=direction, polarization=polarization)

    microwave = _section(doc, "microwave", problems)
    parsed["microwave"] = MicrowaveConfig(
        voltage=_optional(microwave, "voltage_V", "microwave", problems, 1.0, non_negative=True),
        electrode_spacing=_optional(microwave, "electrode_spacing_mm", "microwave", problems,
                                    1.0, positive=True) * 1e-3,
        flip_rate=_optional(microwave, "flip_rate_MHz", "microwave", problems, 2.0,
                            non_negative=True) * 1e6,
    )
    parsed["chiral_rabi"] = angular(mhz(_optional(_section(doc, "chiral", problems), "rabi_MHz",
                                                  "chiral", problems, 1.0, positive=True)))

    thermometer = _section(doc, "thermometer", problems)
    parsed["thermometer"] = dict(
        threshold_T=_optional(thermometer, "threshold_mK", "thermometer", problems, 0.5,
                              positive=True) * 1e-3,
        false_positive=_optional(thermometer, "false_positive", "thermometer", problems, 0.02),
        false_negative=_optional(thermometer, "false_negative", "thermometer", problems, 0.02),
        readout_time=_optional(thermometer, "readout_ms", "thermometer", problems, 5.0,
                               non_negative=True) * 1e-3,
    )
    for key in ("false_positive", "false_negative"):
        if not 0 <= parsed["thermometer"][key] <= 1:
            problems.append(f"thermometer.{key}: must lie in [0, 1]")

    heating = _section(doc, "heating", problems)
    defaults = HeatingConfig()
    flip_states = heating.get("flip_states", list(defaults.flip_states))
    if (not isinstance(flip_states, (list, tuple)) or len(flip_states) != 2
            or not all(isinstance(s, str) for s in flip_states) or flip_states[0] == flip_states[1]):
        problems.append(f"heating.flip_states: expected two distinct state labels, got {flip_states!r}")
        flip_states = defaults.flip_states
    held_state = heating.get("held_state", defaults.held_state)
    if not isinstance(held_state, str):
        problems.append("heating.held_state: expected a state label")
        held_state = defaults.held_state
    parsed["heating"] = HeatingConfig(
        temperature=_optional(heating, "temperature_uK", "heating", problems, 20.0,
                              non_negative=True) * 1e-6,
        t_end=_optional(heating, "t_end_ms", "heating", problems, 2.0, positive=True) * 1e-3,
        n_traj=_integer(heating, "n_traj", "heating", problems, defaults.n_traj),
        dt=_optional(heating, "dt_ns", "heating", problems, 2.5, positive=True) * 1e-9,
        flip_states=tuple(flip_states),
        held_state=held_state,
        settle=_optional(heating, "settle", "heating", problems, defaults.settle,
                         non_negative=True),
    )
    if not parsed["heating"].settle < 1:
        problems.append("heating.settle: must be below 1")

    levels = _section(doc, "levels", problems)
    parsed["levels"] = LevelsConfig(
        cutoff=_optional(levels, "cutoff_K", "levels", problems, 10.0, positive=True) * k_B / h,
        f_max=ghz(_optional(levels, "f_max_GHz", "levels", problems, 40.0, positive=True)),
        split=ghz(_optional(levels, "split_GHz", "levels", problems, 20.0, non_negative=True)),
    )
    if parsed["levels"].f_max <= parsed["levels"].split:
        problems.append("levels.f_max_GHz: must exceed split_GHz so both partitions can hold lines")

    protocol = _section(doc, "protocol", problems)
    repetitions = _integer(protocol, "repetitions", "protocol", problems, 1)
    if repetitions % 2 == 0:
        problems.append(f"protocol.repetitions: must be odd, got {repetitions}")
    parsed["protocol"] = ProtocolConfig(
        rotational_temperature=_optional(protocol, "temperature_K", "protocol", problems, 10.0,
                                         positive=True),
        n_candidates=_integer(protocol, "n_candidates", "protocol", problems, 50, minimum=2),
        runs=_integer(protocol, "runs", "protocol", problems, 100),
        manifold_size=_integer(protocol, "manifold_size", "protocol", problems, 4),
        repetitions=repetitions,
        max_rounds=_integer(protocol, "max_rounds", "protocol", problems, 50),
        mode=_choice(protocol, "mode", "protocol", problems, "fast", MODES),
    )

    scan = _section(doc, "scan", problems)
    sequence = _choice(scan, "sequence", "scan", problems, "rabi", SEQUENCES)
    free_time = _optional(scan, "free_time_ms", "scan", problems, 0.0, non_negative=True) * 1e-3
    if sequence == "ramsey" and free_time <= 0:
        problems.append("scan.free_time_ms: a Ramsey scan needs a positive free time")
    parsed["scan"] = ScanConfig(
        sequence=sequence,
        duration=_optional(scan, "duration_ms", "scan", problems, 1.0, positive=True) * 1e-3,
        free_time=free_time,
        span=_optional(scan, "span_kHz", "scan", problems, 5.0, positive=True) * 1e3,
        points=_integer(scan, "points", "scan", problems, 101, minimum=2),
        shots=_integer(scan, "shots", "scan", problems, 0, minimum=0),
    )
    return parsed, problems


def setup_problems(doc: Mapping[str, Any]) -> List[str]:
    """Every violation in a trap/lattice document"""
    return _parse_setup(doc)[1]


def setup_from_document(doc: Mapping[str, Any]) -> TrapLatticeConfig:
    """
    Build a TrapLatticeConfig from a trap/lattice document

    Direction and polarization are normalized; the lattice offset is given
    as a fraction of the wavelength.

    Raises:
        ConfigError: Listing every violation found
    """
    parsed, problems = _parse_setup(doc)
    if problems:
        raise ConfigError("; ".join(problems))
    beam = parsed.pop("lattice")
    wavelength = beam["wavelength"] * 1e-9
    parsed["lattice"] = LatticeConfig(
        power_per_beam=beam["power"],
        wavelength=wavelength,
        waist_radius=beam["waist"] * 1e-6,
        offset_z0=beam["offset"] * wavelength,
        direction=tuple(float(v) for v in beam["direction"]),
        polarization=tuple(float(v) for v in beam["polarization"]),
    )
    parsed["thermometer"] = Thermometer(**parsed["thermometer"])
    return TrapLatticeConfig(**parsed)


def load_setup(source: Union[str, Path, Mapping[str, Any]]) -> TrapLatticeConfig:
    """Read a trap/lattice JSON file"""
    return setup_from_document(load_document(source))


def parse_override(text: str) -> Tuple[List[str], Any]:
    """
    Split 'section.key=value' into a key path and a JSON-decoded value

    Values that are not valid JSON are kept as strings.

    Raises:
        ConfigError: If the text has no '=' or an empty key
    """
    key, sep, raw = text.partition("=")
    path = [part for part in key.strip().split(".") if part]
    if not sep or not path:
        raise ConfigError(f"override {text!r} must look like section.key=value")
    try:
        value = json.loads(raw)
    except ValueError:
        value = raw
    return path, value


def apply_overrides(document: Mapping[str, Any], overrides: Sequence[Tuple[List[str], Any]]) -> Document:
    """Copy of a document with each (path, value) override set"""
    result = copy.deepcopy(dict(document))
    for path, value in overrides:
        target = result
        for part in path[:-1]:
            child = target.get(part)
            if not isinstance(child, dict):
                child = {}
                target[part] = child
            target = child
        target[path[-1]] = value
    return result
