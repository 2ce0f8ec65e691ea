"""
Direction Cosines Module

Matrix elements of the lab-Z direction cosines Phi_Zg (g = a, b, c) between
symmetric-top blocks |J',k',m> and |J,k,m>. Phi_Za is the closed-form cos(theta)
operator; Phi_Zb and Phi_Zc follow from its commutators with the molecule-fixed
angular momentum blocks used by the Hamiltonian, so all three share one phase
convention.
"""

from functools import lru_cache

import numpy as np

from ..core.errors import DomainError
from .hamiltonian import angular_momentum
from .levels import RotationalState

AXES = ("a", "b", "c")


@lru_cache(maxsize=None)
def cos_theta_block(J_prime: int, J: int, m: int) -> np.ndarray:
    """<J',k,m|cos(theta)|J,k,m> as a (2J'+1, 2J+1) real matrix"""
    block = np.zeros((2 * J_prime + 1, 2 * J + 1))
    if abs(m) > min(J, J_prime):
        block.flags.writeable = False
        return block
    if J_prime == J and J > 0:
        k = np.arange(-J, J + 1)
        block[np.arange(2 * J + 1), np.arange(2 * J + 1)] = k * m / (J * (J + 1))
    elif J_prime == J + 1:
        k = np.arange(-J, J + 1)
        top = J + 1
        values = (np.sqrt((top ** 2 - k ** 2) * (top ** 2 - m ** 2))
                  / (top * np.sqrt((2 * J + 1) * (2 * J + 3))))
        block[k + J_prime, k + J] = values
    elif J_prime == J - 1:
        block = cos_theta_block(J, J_prime, m).T.copy()
    block.flags.writeable = False
    return block


@lru_cache(maxsize=None)
def direction_cosine_block(J_prime: int, J: int, m: int, axis: str) -> np.ndarray:
    """
    Phi_Zg between the J' and J blocks at fixed m

    Args:
        J_prime: Bra rotational quantum number
        J: Ket rotational quantum number
        m: Shared lab projection (Phi_Zg conserves m)
        axis: Molecule-fixed axis 'a', 'b' or 'c'

    Returns:
        Complex (2J'+1, 2J+1) matrix; zero unless |J' - J| <= 1
    """
    if axis not in AXES:
        raise DomainError(f"axis must be one of {AXES}, got {axis!r}")
    if J < 0 or J_prime < 0:
        raise DomainError("rotational quantum numbers must be >= 0")
    phi_a = cos_theta_block(J_prime, J, m).astype(complex)
    if axis == "a" or abs(J_prime - J) > 1:
        result = phi_a
    else:
        jx_p, jy_p, _ = angular_momentum(J_prime)
        jx, jy, _ = angular_momentum(J)
        if axis == "b":
            result = -1j * (jy_p @ phi_a - phi_a @ jy)
        else:
            result = 1j * (jx_p @ phi_a - phi_a @ jx)
    result.flags.writeable = False
    return result


def matrix_element(bra: RotationalState, ket: RotationalState, axis: str) -> complex:
    """<bra|Phi_Zg|ket>; zero when m differs or |Delta J| > 1"""
    if bra.m != ket.m or abs(bra.J - ket.J) > 1:
        return 0j
    block = direction_cosine_block(bra.J, ket.J, ket.m, axis)
    return complex(bra.eigvec @ block @ ket.eigvec)


def squared_expectation(state: RotationalState, axis: str) -> float:
    """<state|Phi_Zg^2|state>, summing the intermediate J' = J-1, J, J+1"""
    total = 0.0
    for J_prime in (state.J - 1, state.J, state.J + 1):
        if J_prime < 0 or abs(state.m) > J_prime:
            continue
        amplitude = direction_cosine_block(J_prime, state.J, state.m, axis) @ state.eigvec
        total += float(np.vdot(amplitude, amplitude).real)
    return total
