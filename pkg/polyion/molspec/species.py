"""
Species Module

This module defines MolecularSpecies, the rigid-rotor description of a
molecular ion: rotational constants, dipole components, molecular-frame
polarizability and mass.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

from ..core.errors import ConfigError
from ..core.units import DEBYE

logger = logging.getLogger(__name__)

MAX_DIPOLE = 100 * DEBYE


@dataclass(frozen=True)
class MolecularSpecies:
    """
    Rigid asymmetric-top molecule

    Attributes:
        name (str): Human readable identifier
        mass (float): Mass in kg
        rot_constants (Tuple[float, float, float]): (A, B, C) in Hz, A >= B >= C > 0
        dipole (Tuple[float, float, float]): (mu_a, mu_b, mu_c) in C*m
        polarizability (Tuple[float, float, float]): (alpha_a, alpha_b, alpha_c) in C*m^2/V
        alpha_eff_overrides (Dict[str, float]): Pinned effective polarizabilities keyed by
            state label ("J_Ka_Kc_m", e.g. "1_0_1_0"), bypassing the tensor projection
    """

    name: str
    mass: float
    rot_constants: Tuple[float, float, float]
    dipole: Tuple[float, float, float]
    polarizability: Tuple[float, float, float]
    alpha_eff_overrides: Dict[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        A, B, C = self.rot_constants
        if not (A >= B >= C > 0):
            raise ConfigError(f"{self.name}: rotational constants must satisfy A >= B >= C > 0, "
                              f"got {self.rot_constants}")
        if self.mass <= 0:
            raise ConfigError(f"{self.name}: mass must be positive")
        for axis, mu in zip("abc", self.dipole):
            if abs(mu) > MAX_DIPOLE:
                raise ConfigError(f"{self.name}: |mu_{axis}| exceeds 100 Debye")
        if self.mean_polarizability <= 0:
            raise ConfigError(f"{self.name}: mean polarizability must be positive")

    @property
    def A(self) -> float:
        return self.rot_constants[0]

    @property
    def B(self) -> float:
        return self.rot_constants[1]

    @property
    def C(self) -> float:
        return self.rot_constants[2]

    @property
    def mean_polarizability(self) -> float:
        """Isotropic average (alpha_a + alpha_b + alpha_c) / 3"""
        return sum(self.polarizability) / 3

    @property
    def is_polar(self) -> bool:
        return any(mu != 0 for mu in self.dipole)

    def key(self) -> tuple:
        """Hashable identity used for caching derived quantities"""
        return (self.name, self.mass, tuple(self.rot_constants), tuple(self.dipole),
                tuple(self.polarizability))

    def __str__(self) -> str:
        A, B, C = (x / 1e9 for x in self.rot_constants)
        return f"MolecularSpecies({self.name}, A={A:.4f} B={B:.4f} C={C:.4f} GHz)"
