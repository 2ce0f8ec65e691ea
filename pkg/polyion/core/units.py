"""
Units Module

Unit conversions applied at the configuration boundary. Everything inside
polyion is SI: Hz for rotational energies, kg, C*m, C*m^2/V, m, s, K.
"""

import numpy as np
from scipy import constants

h = constants.h
hbar = constants.hbar
k_B = constants.k
c = constants.c
epsilon_0 = constants.epsilon_0
e = constants.e
amu = constants.atomic_mass

DEBYE = 1e-21 / constants.c
ANGSTROM3_TO_SI = 4 * np.pi * constants.epsilon_0 * 1e-30
COULOMB_CONSTANT = 1 / (4 * np.pi * constants.epsilon_0)


def ghz(value: float) -> float:
    return value * 1e9


def mhz(value: float) -> float:
    return value * 1e6


def debye(value: float) -> float:
    """Convert a dipole moment in Debye to C*m"""
    return value * DEBYE


def angstrom3(value: float) -> float:
    """Convert a polarizability volume in cubic angstrom to C*m^2/V"""
    return value * ANGSTROM3_TO_SI


def to_angstrom3(alpha: float) -> float:
    return alpha / ANGSTROM3_TO_SI


def kelvin_to_hz(temperature: float) -> float:
    """Energy k_B*T expressed as a frequency E/h"""
    return temperature * k_B / h


def hz_to_kelvin(frequency: float) -> float:
    return frequency * h / k_B


def angular(frequency_hz: float) -> float:
    """Cyclic frequency (Hz) to angular frequency (rad/s)"""
    return 2 * np.pi * frequency_hz
