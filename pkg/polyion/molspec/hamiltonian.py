"""
Hamiltonian Module

Rigid-rotor Hamiltonian blocks in the symmetric-top basis |J,k>, k = -J..J.
The molecule-fixed a axis is the quantization axis (prolate I^r convention),
b maps to x and c maps to y.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np

from ..core.errors import DomainError
from .species import MolecularSpecies


def _check_J(J: int) -> None:
    if J < 0 or int(J) != J:
        raise DomainError(f"J must be a non-negative integer, got {J}")


@lru_cache(maxsize=None)
def raising_operator(J: int) -> np.ndarray:
    """
    Molecule-fixed J+ in the |J,k> basis

    Args:
        J: Rotational quantum number

    Returns:
        (2J+1, 2J+1) real matrix with <J,k+1|J+|J,k> = sqrt(J(J+1) - k(k+1))
    """
    _check_J(J)
    k = np.arange(-J, J)
    op = np.zeros((2 * J + 1, 2 * J + 1))
    op[np.arange(1, 2 * J + 1), np.arange(2 * J)] = np.sqrt(J * (J + 1) - k * (k + 1))
    op.flags.writeable = False
    return op


@lru_cache(maxsize=None)
def angular_momentum(J: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(J_x, J_y, J_z) blocks; J_y is purely imaginary"""
    jp = raising_operator(J)
    jm = jp.T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(np.arange(-J, J + 1, dtype=float))
    for op in (jx, jy, jz):
        op.flags.writeable = False
    return jx, jy, jz


def build_hamiltonian_block(species: MolecularSpecies, J: int) -> np.ndarray:
    """
    Build H = A*Ja^2 + B*Jb^2 + C*Jc^2 for one J

    Args:
        species: The molecule
        J: Rotational quantum number (>= 0)

    Returns:
        Real symmetric (2J+1, 2J+1) matrix in Hz; only Delta k in {0, +-2} is nonzero

    Raises:
        DomainError: If J is negative
    """
    _check_J(J)
    A, B, C = species.rot_constants
    k = np.arange(-J, J + 1, dtype=float)
    H = np.diag(0.5 * (B + C) * (J * (J + 1) - k ** 2) + A * k ** 2)
    if J >= 1:
        jp = raising_operator(J)
        jp2 = jp @ jp
        H = H + 0.25 * (B - C) * (jp2 + jp2.T)
    return H
