"""
Levels Module

This module defines RotationalState and LevelTable and the solver that
diagonalizes the rigid-rotor blocks and assigns J_{KaKc} labels.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..core.errors import DomainError, NumericError
from .hamiltonian import build_hamiltonian_block
from .species import MolecularSpecies

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-9
NORM_TOLERANCE = 1e-12


def ka_kc_labels(J: int) -> List[Tuple[int, int]]:
    """
    (Ka, Kc) labels of the 2J+1 levels of one J, in ascending energy order

    The lowest level is J_{0J} and the highest J_{J0}; tau = Ka - Kc runs from -J to J.
    """
    return [((i + 1) // 2, J - i // 2) for i in range(2 * J + 1)]


@dataclass(frozen=True, eq=False)
class RotationalState:
    """
    One asymmetric-top eigenstate |J_{KaKc}, m>

    Attributes:
        id (int): Index of this state in its LevelTable
        J (int): Rotational quantum number
        Ka (int): Prolate-limit projection label
        Kc (int): Oblate-limit projection label
        m (int): Lab-frame projection, |m| <= J
        energy (float): Energy above 0_00 in Hz
        eigvec (np.ndarray): Real coefficients over |J,k>, k = -J..J
    """

    id: int
    J: int
    Ka: int
    Kc: int
    m: int
    energy: float
    eigvec: np.ndarray

    @property
    def tau(self) -> int:
        return self.Ka - self.Kc

    @property
    def level(self) -> Tuple[int, int, int]:
        """The (J, Ka, Kc) manifold this state belongs to"""
        return (self.J, self.Ka, self.Kc)

    @property
    def label(self) -> str:
        return f"{self.J}_{self.Ka}_{self.Kc}_{self.m}"

    def __str__(self) -> str:
        return f"|{self.J}_{self.Ka}{self.Kc}, m={self.m}> ({self.energy / 1e9:.6f} GHz)"


class LevelTable:
    """
    Energy-sorted collection of rotational states of one species

    Attributes:
        species (MolecularSpecies): The molecule the table was solved for
        levels (Tuple[RotationalState, ...]): States sorted by energy, index == id
        max_energy_cutoff (float): Highest energy admitted, in Hz
    """

    def __init__(self, species: MolecularSpecies, levels: Sequence[RotationalState],
                 max_energy_cutoff: float):
        self.species = species
        self.levels = tuple(levels)
        self.max_energy_cutoff = max_energy_cutoff
        self._by_label = {state.label: state for state in self.levels}
        self._manifolds: Dict[Tuple[int, int, int], List[int]] = {}
        for state in self.levels:
            self._manifolds.setdefault(state.level, []).append(state.id)

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self) -> Iterator[RotationalState]:
        return iter(self.levels)

    def __getitem__(self, state_id: int) -> RotationalState:
        return self.levels[state_id]

    @property
    def ids(self) -> List[int]:
        return [state.id for state in self.levels]

    @property
    def energies(self) -> np.ndarray:
        return np.array([state.energy for state in self.levels])

    @property
    def manifolds(self) -> Dict[Tuple[int, int, int], List[int]]:
        """State ids grouped by (J, Ka, Kc), in energy order of the manifolds"""
        return dict(self._manifolds)

    def by_label(self, label: str) -> RotationalState:
        try:
            return self._by_label[label]
        except KeyError:
            raise DomainError(f"no state labelled {label!r} in table") from None

    def find(self, J: int, Ka: int, Kc: int, m: int = 0) -> RotationalState:
        return self.by_label(f"{J}_{Ka}_{Kc}_{m}")

    def representative(self, level: Tuple[int, int, int]) -> RotationalState:
        """The m = 0 substate standing for a whole (J, Ka, Kc) manifold"""
        J, Ka, Kc = level
        return self.find(J, Ka, Kc, 0)

    def __str__(self) -> str:
        return (f"LevelTable({self.species.name}, {len(self._manifolds)} levels, "
                f"{len(self.levels)} states)")


def _canonical_sign(vector: np.ndarray) -> np.ndarray:
    pivot = np.argmax(np.abs(vector))
    return vector if vector[pivot] >= 0 else -vector


def solve_block(species: MolecularSpecies, J: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Diagonalize one J block

    Returns:
        (energies, eigvecs) with energies ascending and eigvecs as columns

    Raises:
        NumericError: If an eigenpair residual exceeds 1e-9 * ||H||
    """
    H = build_hamiltonian_block(species, J)
    energies, vectors = linalg.eigh(H)
    scale = max(np.linalg.norm(H), 1.0)
    residual = np.linalg.norm(H @ vectors - vectors * energies, axis=0).max()
    if residual > RESIDUAL_TOLERANCE * scale:
        raise NumericError(f"eigendecomposition of J={J} block inaccurate", residual=residual)
    vectors = np.column_stack([_canonical_sign(vectors[:, i]) for i in range(2 * J + 1)])
    if J >= 1 and np.any(np.diff(energies) <= 1e-12 * scale):
        logger.debug("J=%d block has degenerate eigenvalues; Ka/Kc labels follow array order", J)
    return energies, vectors


def solve_levels(species: MolecularSpecies, J_max: int, cutoff: float) -> LevelTable:
    """
    Solve the rigid rotor up to J_max and keep every state at or below cutoff

    Args:
        species: The molecule
        J_max: Largest J diagonalized
        cutoff: Highest energy kept, in Hz

    Returns:
        LevelTable with m-substates expanded explicitly

    Raises:
        DomainError: If J_max or cutoff is negative
    """
    if J_max < 0:
        raise DomainError(f"J_max must be >= 0, got {J_max}")
    if cutoff < 0:
        raise DomainError(f"cutoff must be >= 0, got {cutoff}")

    raw = []
    for J in range(J_max + 1):
        energies, vectors = solve_block(species, J)
        if energies[0] > cutoff:
            continue
        for i, (Ka, Kc) in enumerate(ka_kc_labels(J)):
            energy = 0.0 if J == 0 else float(energies[i])
            if energy > cutoff:
                continue
            eigvec = vectors[:, i].copy()
            eigvec.flags.writeable = False
            for m in range(-J, J + 1):
                raw.append((energy, J, Ka, Kc, m, eigvec))

    raw.sort(key=lambda row: row[:5])
    states = [RotationalState(id=i, J=J, Ka=Ka, Kc=Kc, m=m, energy=energy, eigvec=vec)
              for i, (energy, J, Ka, Kc, m, vec) in enumerate(raw)]
    table = LevelTable(species, states, cutoff)
    logger.info("solved %s up to J=%d: %s", species.name, J_max, table)
    return table


def j_max_for_cutoff(species: MolecularSpecies, cutoff: float) -> int:
    """
    Largest J with any level at or below cutoff

    Every level of a J block lies at or above C * J(J+1).
    """
    if cutoff < 0:
        raise DomainError(f"cutoff must be >= 0, got {cutoff}")
    J = 0
    while species.C * (J + 1) * (J + 2) <= cutoff:
        J += 1
    return J
