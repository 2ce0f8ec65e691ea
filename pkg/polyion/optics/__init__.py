"""
Optics Module

This module contains the optical lattice model: beam geometry, state-resolved
effective polarizabilities and the state-dependent potentials and forces.
"""

from .lattice import LatticeConfig, peak_intensity, rayleigh_length
from .polarizability import alpha_eff, anisotropy, linear_rotor_polarizability
from .potential import (StatePotential, lattice_secular_frequency, max_acceleration,
                        potential_from_alpha, potential_profile, potential_table,
                        write_potential_csv)

__all__ = [
    'LatticeConfig',
    'peak_intensity',
    'rayleigh_length',
    'alpha_eff',
    'anisotropy',
    'linear_rotor_polarizability',
    'StatePotential',
    'lattice_secular_frequency',
    'max_acceleration',
    'potential_from_alpha',
    'potential_profile',
    'potential_table',
    'write_potential_csv',
]
