"""
Lattice Module

This module defines LatticeConfig, the standing-wave optical lattice
overlapping the ion crystal, and its beam-geometry helpers.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..core.errors import ConfigError

UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class LatticeConfig:
    """
    Retro-reflected, linearly polarized lattice beam

    Attributes:
        power_per_beam (float): Optical power per beam in W
        wavelength (float): Wavelength in m
        waist_radius (float): 1/e^2 intensity radius at the focus in m
        offset_z0 (float): Lattice phase offset from the ion-trap center along the axis in m
        direction (Tuple[float, float, float]): Unit propagation vector (lattice axis)
        polarization (Tuple[float, float, float]): Unit polarization vector, normal to direction
    """

    power_per_beam: float = 1.0
    wavelength: float = 1050e-9
    waist_radius: float = 10e-6
    offset_z0: float = 1050e-9 / 8
    direction: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    polarization: Tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self):
        if self.wavelength <= 0:
            raise ConfigError(f"lattice wavelength must be positive, got {self.wavelength}")
        if self.waist_radius <= 0:
            raise ConfigError(f"lattice waist must be positive, got {self.waist_radius}")
        if self.power_per_beam < 0:
            raise ConfigError(f"lattice power must be >= 0, got {self.power_per_beam}")
        direction = np.asarray(self.direction, dtype=float)
        polarization = np.asarray(self.polarization, dtype=float)
        if direction.shape != (3,) or polarization.shape != (3,):
            raise ConfigError("direction and polarization must be 3-vectors")
        if abs(np.linalg.norm(direction) - 1) > UNIT_TOLERANCE:
            raise ConfigError(f"direction {self.direction} is not a unit vector")
        if abs(np.linalg.norm(polarization) - 1) > UNIT_TOLERANCE:
            raise ConfigError(f"polarization {self.polarization} is not a unit vector")
        if abs(direction @ polarization) > UNIT_TOLERANCE:
            raise ConfigError("polarization must be perpendicular to the lattice direction")

    @property
    def axis(self) -> np.ndarray:
        return np.asarray(self.direction, dtype=float)

    @property
    def node_spacing(self) -> float:
        """Period of the intensity pattern, lambda/2"""
        return self.wavelength / 2

    def with_power(self, power: float) -> "LatticeConfig":
        return LatticeConfig(power, self.wavelength, self.waist_radius, self.offset_z0,
                             self.direction, self.polarization)


def peak_intensity(cfg: LatticeConfig) -> float:
    """Peak intensity I0 = 2P / (pi w0^2) in W/m^2"""
    return 2 * cfg.power_per_beam / (np.pi * cfg.waist_radius ** 2)


def rayleigh_length(cfg: LatticeConfig) -> float:
    """z_R = pi w0^2 / lambda in m"""
    return np.pi * cfg.waist_radius ** 2 / cfg.wavelength
