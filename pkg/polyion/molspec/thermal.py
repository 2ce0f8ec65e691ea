"""
Thermal Module

Boltzmann populations over a LevelTable.
"""

from typing import Dict, List, Tuple

import numpy as np

from ..core.errors import DomainError
from ..core.units import h, k_B
from .levels import LevelTable


def thermal_populations(table: LevelTable, T: float) -> np.ndarray:
    """
    Boltzmann probabilities of every state in the table

    Args:
        table: Solved levels
        T: Rotational temperature in K (> 0)

    Returns:
        Probability vector indexed by state id, summing to 1

    Raises:
        DomainError: If the table is empty or T <= 0
    """
    if len(table) == 0:
        raise DomainError("cannot populate an empty level table")
    if T <= 0:
        raise DomainError(f"temperature must be positive, got {T}")
    energies = table.energies
    weights = np.exp(-h * (energies - energies.min()) / (k_B * T))
    return weights / weights.sum()


def level_populations(table: LevelTable, T: float) -> Dict[Tuple[int, int, int], float]:
    """m-summed populations of every (J, Ka, Kc) manifold"""
    populations = thermal_populations(table, T)
    return {level: float(populations[ids].sum()) for level, ids in table.manifolds.items()}


def thermal_candidates(table: LevelTable, T: float, n_max: int = 50) -> List[int]:
    """
    The n_max most populated state ids, most populated first

    Ties (m-degenerate substates) are broken by state id, so the selection is
    deterministic.
    """
    populations = thermal_populations(table, T)
    order = sorted(range(len(table)), key=lambda i: (-populations[i], i))
    return order[:n_max]


def rotational_temperature(B: float) -> float:
    """The 'single rotational state' temperature 2hB/k_B for a constant B in Hz"""
    return 2 * h * B / k_B
