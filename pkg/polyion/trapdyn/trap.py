"""
Trap Module

This module defines TrapConfig, the linear Paul trap holding one atomic ion
and one molecular ion, and the pseudopotential spring constants derived
from it.
"""

import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from ..core.errors import ConfigError
from ..core.units import COULOMB_CONSTANT, amu, e

logger = logging.getLogger(__name__)

ATOM, MOLECULE = 0, 1


@dataclass(frozen=True)
class TrapConfig:
    """
    Two-ion linear Paul trap in the pseudopotential approximation

    Secular frequencies are given for the atomic ion. The molecule's radial
    frequencies scale as m_atom/m_molecule (RF pseudopotential) and its axial
    frequency as sqrt(m_atom/m_molecule) (shared DC curvature).

    Attributes:
        secular_freqs (Tuple[float, float, float]): (omega_x, omega_y, omega_z) of the atom in rad/s
        atom_mass (float): Atomic ion mass in kg
        molecule_mass (float): Molecular ion mass in kg
        atom_charge (float): Atomic ion charge in C
        molecule_charge (float): Molecular ion charge in C
        coulomb_strength (float): Scale of the ion-ion repulsion, 1 physical, 0 removes it
    """

    secular_freqs: Tuple[float, float, float] = (2 * np.pi * 1.0e6, 2 * np.pi * 1.0e6,
                                                 2 * np.pi * 0.3e6)
    atom_mass: float = 88 * amu
    molecule_mass: float = 76 * amu
    atom_charge: float = e
    molecule_charge: float = e
    coulomb_strength: float = field(default=1.0)

    def __post_init__(self):
        if len(self.secular_freqs) != 3 or min(self.secular_freqs) <= 0:
            raise ConfigError(f"secular frequencies must be three positive values, "
                              f"got {self.secular_freqs}")
        wx, wy, wz = self.secular_freqs
        if not (wz < wx and wz < wy):
            raise ConfigError("axial frequency must be below both radial frequencies "
                              "for an axial two-ion crystal")
        if self.atom_mass <= 0 or self.molecule_mass <= 0:
            raise ConfigError("ion masses must be positive")
        if self.atom_charge <= 0 or self.molecule_charge <= 0:
            raise ConfigError("both ions must carry positive charge")
        if self.coulomb_strength < 0:
            raise ConfigError("coulomb_strength must be >= 0")

    @property
    def masses(self) -> np.ndarray:
        return np.array([self.atom_mass, self.molecule_mass])

    @property
    def mass_ratio(self) -> float:
        """m_atom / m_molecule"""
        return self.atom_mass / self.molecule_mass

    @property
    def molecule_freqs(self) -> np.ndarray:
        wx, wy, wz = self.secular_freqs
        ratio = self.mass_ratio
        return np.array([wx * ratio, wy * ratio, wz * np.sqrt(ratio)])

    @property
    def spring_constants(self) -> np.ndarray:
        """(2, 3) array of k = m omega^2 per ion and axis, in N/m"""
        atom = self.atom_mass * np.asarray(self.secular_freqs) ** 2
        molecule = self.molecule_mass * self.molecule_freqs ** 2
        return np.vstack([atom, molecule])

    @property
    def coulomb_coefficient(self) -> float:
        """k_e q1 q2 times coulomb_strength, in J*m"""
        return self.coulomb_strength * COULOMB_CONSTANT * self.atom_charge * self.molecule_charge

    def without_coulomb(self) -> "TrapConfig":
        return TrapConfig(self.secular_freqs, self.atom_mass, self.molecule_mass,
                          self.atom_charge, self.molecule_charge, 0.0)

    def scaled(self, factor: float) -> "TrapConfig":
        """Same trap with every secular frequency multiplied by factor"""
        return TrapConfig(tuple(w * factor for w in self.secular_freqs), self.atom_mass,
                          self.molecule_mass, self.atom_charge, self.molecule_charge,
                          self.coulomb_strength)

    def potential_energy(self, positions: np.ndarray) -> np.ndarray:
        """
        Harmonic plus Coulomb energy for positions of shape (..., 2, 3)

        Returns:
            Energies in J with the leading batch shape
        """
        # elementwise accumulation; rounding must not depend on batch shape
        terms = self.spring_constants * positions ** 2
        harmonic = 0.5 * sum(terms[..., i, j] for i in range(2) for j in range(3))
        if self.coulomb_coefficient == 0:
            return harmonic
        d = positions[..., ATOM, :] - positions[..., MOLECULE, :]
        distance = np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2 + d[..., 2] ** 2)
        return harmonic + self.coulomb_coefficient / distance

    def forces(self, positions: np.ndarray) -> np.ndarray:
        """Harmonic plus Coulomb forces for positions of shape (..., 2, 3)"""
        forces = -self.spring_constants * positions
        if self.coulomb_coefficient == 0:
            return forces
        d = positions[..., ATOM, :] - positions[..., MOLECULE, :]
        distance = np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2 + d[..., 2] ** 2)
        push = (self.coulomb_coefficient / distance ** 3)[..., None] * d
        forces[..., ATOM, :] += push
        forces[..., MOLECULE, :] -= push
        return forces
