"""
Potential Module

This module defines StatePotential, the state-dependent standing-wave
potential U(z) = U0 cos(4 pi (z - z0) / lambda) felt by the molecule, and
the trap-frequency and force figures derived from it.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Union

import numpy as np

from ..core.errors import DomainError
from ..core.io import write_csv
from ..core.units import c, epsilon_0, h
from ..molspec.levels import RotationalState
from ..molspec.species import MolecularSpecies
from .lattice import LatticeConfig, peak_intensity
from .polarizability import alpha_eff

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StatePotential:
    """
    Lattice potential of one internal state

    Attributes:
        state_id (int): Id of the state in its LevelTable, -1 if not tied to a table
        alpha_eff (float): Effective polarizability in C*m^2/V
        U0 (float): Potential amplitude in J
        wavelength (float): Lattice wavelength in m
        offset_z0 (float): Lattice phase offset in m
    """

    state_id: int
    alpha_eff: float
    U0: float
    wavelength: float
    offset_z0: float

    @property
    def U0_hz(self) -> float:
        return self.U0 / h

    @property
    def wavenumber(self) -> float:
        """4 pi / lambda, the spatial angular frequency of U(z)"""
        return 4 * np.pi / self.wavelength

    def __call__(self, z):
        """U(z) in J for a coordinate (or array) along the lattice axis"""
        return self.U0 * np.cos(self.wavenumber * (np.asarray(z) - self.offset_z0))

    def force(self, z):
        """-dU/dz in N"""
        return self.U0 * self.wavenumber * np.sin(self.wavenumber * (np.asarray(z) - self.offset_z0))


def potential_from_alpha(alpha: float, cfg: LatticeConfig, state_id: int = -1) -> StatePotential:
    """StatePotential for a given effective polarizability"""
    U0 = alpha * peak_intensity(cfg) / (c * epsilon_0)
    return StatePotential(state_id, alpha, U0, cfg.wavelength, cfg.offset_z0)


def potential_profile(state: RotationalState, species: MolecularSpecies,
                      cfg: LatticeConfig) -> StatePotential:
    """
    Lattice potential of a rotational state

    Args:
        state: The internal state
        species: Supplies the polarizability tensor and overrides
        cfg: Lattice geometry and power

    Returns:
        StatePotential with U0 = alpha_eff * I0 / (c * epsilon_0)
    """
    potential = potential_from_alpha(alpha_eff(state, species), cfg, state.id)
    logger.debug("state %s: U0/h = %.4g Hz", state.label, potential.U0_hz)
    return potential


def lattice_secular_frequency(potential: StatePotential, mass: float) -> float:
    """
    omega_lattice = (16 pi^2 U0 / (lambda^2 m))^(1/2) in rad/s

    Raises:
        DomainError: If U0 or mass is not positive
    """
    if potential.U0 <= 0:
        raise DomainError(f"lattice secular frequency needs U0 > 0, got {potential.U0}")
    if mass <= 0:
        raise DomainError("mass must be positive")
    return float(np.sqrt(16 * np.pi ** 2 * potential.U0 / (potential.wavelength ** 2 * mass)))


def max_acceleration(potential: StatePotential, mass: float) -> float:
    """Largest optical acceleration U0 (4 pi / lambda) / m in m/s^2"""
    if mass <= 0:
        raise DomainError("mass must be positive")
    return abs(potential.U0) * potential.wavenumber / mass


def potential_table(states: Iterable[RotationalState], species: MolecularSpecies,
                    cfg: LatticeConfig, z: np.ndarray) -> Dict[str, np.ndarray]:
    """
    Sampled potentials keyed by state label

    Returns:
        {label: array of shape (len(z), 2)} with columns z in nm and U/h in MHz
    """
    z = np.asarray(z, dtype=float)
    table = {}
    for state in states:
        potential = potential_profile(state, species, cfg)
        table[state.label] = np.column_stack([z * 1e9, potential(z) / h / 1e6])
    return table


def write_potential_csv(path: Union[str, Path], samples: np.ndarray,
                        meta: Optional[Mapping[str, Any]] = None) -> Path:
    return write_csv(path, ("z_nm", "U_over_h_MHz"), samples.tolist(), meta)
