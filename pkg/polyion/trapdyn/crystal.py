"""
Crystal Module

Equilibrium geometry, normal modes and thermal initial conditions of the
atom + molecule Coulomb crystal.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import linalg, optimize

from ..core.errors import ConfigError, NumericError
from ..core.units import k_B
from .trap import ATOM, MOLECULE, TrapConfig

logger = logging.getLogger(__name__)

Seed = Union[None, int, np.random.SeedSequence, np.random.Generator]

FORCE_TOLERANCE = 1e-12
NEWTON_STEPS = 5


def _length_scale(trap: TrapConfig) -> float:
    """Crystal length (k_e q^2 / k_z)^(1/3)"""
    k_z = trap.spring_constants[ATOM, 2]
    return (trap.coulomb_coefficient / k_z) ** (1 / 3)


def hessian(trap: TrapConfig, positions: np.ndarray) -> np.ndarray:
    """
    Second derivatives of the trap + Coulomb energy, (6, 6), ion-major ordering

    Raises:
        ConfigError: If the two ions coincide while the Coulomb term is on
    """
    H = np.diag(trap.spring_constants.reshape(6))
    if trap.coulomb_coefficient == 0:
        return H
    d = positions[ATOM] - positions[MOLECULE]
    distance = np.linalg.norm(d)
    if distance == 0:
        raise ConfigError("ions coincide; Coulomb Hessian undefined")
    block = trap.coulomb_coefficient * (3 * np.outer(d, d) - distance ** 2 * np.eye(3)) / distance ** 5
    H[:3, :3] += block
    H[3:, 3:] += block
    H[:3, 3:] -= block
    H[3:, :3] -= block
    return H


def equilibrium_positions(trap: TrapConfig, atom_first: bool = True) -> np.ndarray:
    """
    Minimum-energy positions of the two ions

    Args:
        trap: Trap configuration
        atom_first: Place the atom at negative z; False mirrors the crystal

    Returns:
        (2, 3) array, row 0 the atom and row 1 the molecule, in m

    Raises:
        NumericError: If the residual force stays above tolerance
    """
    if trap.coulomb_coefficient == 0:
        return np.zeros((2, 3))

    scale = _length_scale(trap)
    k_z = trap.spring_constants[ATOM, 2]
    sign = -1.0 if atom_first else 1.0

    def energy(flat):
        positions = flat.reshape(2, 3) * scale
        value = trap.potential_energy(positions) / (k_z * scale ** 2)
        gradient = -trap.forces(positions).reshape(6) / (k_z * scale)
        return value, gradient

    guess = np.array([[0, 0, sign * 0.7], [0, 0, -sign * 0.7]]).reshape(6)
    result = optimize.minimize(energy, guess, jac=True, method="BFGS", options={"gtol": 1e-12})
    positions = result.x.reshape(2, 3) * scale

    for _ in range(NEWTON_STEPS):
        forces = trap.forces(positions).reshape(6)
        step = linalg.solve(hessian(trap, positions), forces, assume_a="sym")
        positions = positions + step.reshape(2, 3)

    residual = float(np.abs(trap.forces(positions)).max())
    if residual > FORCE_TOLERANCE or residual > 1e-9 * k_z * scale:
        raise NumericError("equilibrium search did not converge", residual=residual)
    logger.debug("equilibrium separation %.4g m, residual force %.3g N",
                 np.linalg.norm(positions[ATOM] - positions[MOLECULE]), residual)
    return positions


@dataclass(frozen=True)
class NormalModes:
    """
    Small-oscillation modes about the equilibrium

    Attributes:
        frequencies (np.ndarray): Angular frequencies in rad/s, ascending
        vectors (np.ndarray): (6, 6) mass-weighted eigenvectors as columns, ion-major rows
        equilibrium (np.ndarray): (2, 3) equilibrium positions in m
        masses (np.ndarray): (6,) mass of the ion owning each coordinate
    """

    frequencies: np.ndarray
    vectors: np.ndarray
    equilibrium: np.ndarray
    masses: np.ndarray

    @property
    def slowest_period(self) -> float:
        return 2 * np.pi / self.frequencies[0]

    def molecule_participation(self, direction: np.ndarray) -> np.ndarray:
        """(e_j,molecule . n)^2 for each mode j, summing to 1 over the modes"""
        return (np.asarray(direction) @ self.vectors[3:, :]) ** 2

    def to_modal(self, positions: np.ndarray, velocities: np.ndarray):
        """Mode coordinates (q, qdot) of a phase-space point"""
        sqrt_m = np.sqrt(self.masses)
        q = self.vectors.T @ (sqrt_m * (positions - self.equilibrium).reshape(6))
        qdot = self.vectors.T @ (sqrt_m * velocities.reshape(6))
        return q, qdot


def normal_modes(trap: TrapConfig, equilibrium: Optional[np.ndarray] = None) -> NormalModes:
    """
    Diagonalize the mass-weighted Hessian at the equilibrium

    Raises:
        ConfigError: If any squared frequency is non-positive (unstable trap)
    """
    if equilibrium is None:
        equilibrium = equilibrium_positions(trap)
    masses = np.repeat(trap.masses, 3)
    inv_sqrt = 1 / np.sqrt(masses)
    weighted = hessian(trap, equilibrium) * np.outer(inv_sqrt, inv_sqrt)
    omega_sq, vectors = linalg.eigh(weighted)
    if omega_sq[0] <= 0:
        raise ConfigError(f"trap is unstable: smallest squared mode frequency {omega_sq[0]:.3g}")
    return NormalModes(np.sqrt(omega_sq), vectors, equilibrium, masses)


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Positions and velocities of both ions, each (2, 3) in SI units"""

    positions: np.ndarray
    velocities: np.ndarray


def sample_thermal_state(trap: TrapConfig, T: float, seed: Seed = None,
                         modes: Optional[NormalModes] = None) -> PhaseSpacePoint:
    """
    Draw an initial condition with classical equipartition in every mode

    Each mode gets q ~ N(0, k_B T / omega^2) and qdot ~ N(0, k_B T), so its mean
    energy is k_B T.

    Args:
        trap: Trap configuration
        T: Temperature in K (>= 0); T = 0 returns the equilibrium at rest
        seed: Seed or generator; a Generator is advanced in place
        modes: Precomputed normal modes of the trap
    """
    if T < 0:
        raise ConfigError(f"temperature must be >= 0, got {T}")
    modes = modes if modes is not None else normal_modes(trap)
    if T == 0:
        return PhaseSpacePoint(modes.equilibrium.copy(), np.zeros((2, 3)))
    rng = np.random.default_rng(seed)
    sigma = np.sqrt(k_B * T)
    q = rng.standard_normal(6) * sigma / modes.frequencies
    qdot = rng.standard_normal(6) * sigma
    inv_sqrt = 1 / np.sqrt(modes.masses)
    positions = modes.equilibrium + (inv_sqrt * (modes.vectors @ q)).reshape(2, 3)
    velocities = (inv_sqrt * (modes.vectors @ qdot)).reshape(2, 3)
    return PhaseSpacePoint(positions, velocities)


def mode_energies(modes: NormalModes, point: PhaseSpacePoint) -> np.ndarray:
    """Harmonic energy of each mode in J"""
    q, qdot = modes.to_modal(point.positions, point.velocities)
    return 0.5 * (qdot ** 2 + (modes.frequencies * q) ** 2)
