"""
Polarizability Module

State-resolved effective polarizability along the lattice polarization:
alpha_eff = sum_g alpha_g <Phi_Zg^2>, with lab Z taken along the polarization.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from ..core.errors import DomainError
from ..molspec.direction_cosines import AXES, squared_expectation
from ..molspec.levels import RotationalState
from ..molspec.species import MolecularSpecies

logger = logging.getLogger(__name__)


def alpha_eff(state: RotationalState, species: MolecularSpecies,
              axis: Optional[Sequence[float]] = None) -> float:
    """
    Effective polarizability of one rotational state in C*m^2/V

    The state's m is quantized along lab Z, which the lattice takes along its
    polarization; the default projects the tensor on that axis. A label listed
    in species.alpha_eff_overrides pins the Z projection instead of the tensor
    value. Lattice-induced mixing of rotational states is neglected.

    Args:
        state: Rotational state with m quantized along lab Z
        species: The molecule
        axis: Lab-frame direction of the projection, lab Z when omitted. An m
            eigenstate is symmetric about Z, so a tilted axis mixes the Z
            projection with its perpendicular average (3 alpha_mean - alpha_Z) / 2.

    Raises:
        DomainError: If the state eigenvector does not match its J block, or
            the axis is the zero vector
    """
    if state.eigvec.shape != (2 * state.J + 1,):
        raise DomainError(f"state {state.label} eigenvector has shape {state.eigvec.shape}, "
                          f"expected ({2 * state.J + 1},)")
    override = species.alpha_eff_overrides.get(state.label)
    if override is not None:
        along_z = float(override)
    else:
        along_z = float(sum(alpha * squared_expectation(state, name)
                            for alpha, name in zip(species.polarizability, AXES)))
    if axis is None:
        return along_z
    direction = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(direction)
    if direction.shape != (3,) or norm == 0:
        raise DomainError(f"projection axis must be a non-zero 3-vector, got {axis}")
    cos2 = (direction[2] / norm) ** 2
    transverse = (3 * species.mean_polarizability - along_z) / 2
    return float(cos2 * along_z + (1 - cos2) * transverse)


def anisotropy(species: MolecularSpecies) -> float:
    """
    Polarizability anisotropy s = (alpha_a - (alpha_b + alpha_c)/2) / alpha_mean

    For a linear rotor (alpha_b = alpha_c) this is (alpha_par - alpha_perp) / alpha_mean.
    """
    alpha_a, alpha_b, alpha_c = species.polarizability
    return (alpha_a - (alpha_b + alpha_c) / 2) / species.mean_polarizability


def linear_rotor_polarizability(mean: float, s: float):
    """(alpha_par, alpha_perp) with the given mean and anisotropy s"""
    return mean * (1 + 2 * s / 3), mean * (1 - s / 3)
