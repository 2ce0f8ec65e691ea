"""
Transitions Module

Electric-dipole selection rules, line strengths and the transition catalog,
plus the Raman selection rule and level-graph reachability.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from ..core.errors import DomainError
from .direction_cosines import direction_cosine_block
from .levels import LevelTable, RotationalState
from .species import MolecularSpecies

logger = logging.getLogger(__name__)

STRENGTH_THRESHOLD = 1e-10
TYPE_AXIS = {"a": "a", "b": "b", "c": "c"}
TYPE_INDEX = {"a": 0, "b": 1, "c": 2}

Level = Tuple[int, int, int]


@dataclass(frozen=True)
class TransitionEntry:
    """
    One allowed line between two (J, Ka, Kc) levels

    Attributes:
        lower (int): Id of the m = 0 substate of the lower level
        upper (int): Id of the m = 0 substate of the upper level
        frequency (float): E_upper - E_lower in Hz
        line_strength (float): Dimensionless strength summed over m and lab components
        type (str): 'a', 'b' or 'c'
    """

    lower: int
    upper: int
    frequency: float
    line_strength: float
    type: str


@dataclass(frozen=True)
class TransitionCatalog:
    """Ordered list of allowed transitions"""

    entries: Tuple[TransitionEntry, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def of_type(self, kind: str) -> List[TransitionEntry]:
        return [entry for entry in self.entries if entry.type == kind]

    def between(self, table: LevelTable, first: Level, second: Level) -> Optional[TransitionEntry]:
        """The entry joining two levels in either direction, or None"""
        ids = {table.representative(first).id, table.representative(second).id}
        for entry in self.entries:
            if {entry.lower, entry.upper} == ids:
                return entry
        return None


def transition_type(lower: RotationalState, upper: RotationalState) -> Optional[str]:
    """
    Dipole type allowed between two levels by Delta J and Ka/Kc parity

    Returns:
        'a', 'b', 'c', or None when the pair is E1-forbidden
    """
    if abs(upper.J - lower.J) > 1 or (upper.J == 0 and lower.J == 0):
        return None
    dka = (upper.Ka - lower.Ka) % 2
    dkc = (upper.Kc - lower.Kc) % 2
    if dka == 0 and dkc == 1:
        return "a"
    if dka == 1 and dkc == 1:
        return "b"
    if dka == 1 and dkc == 0:
        return "c"
    return None


def raman_allowed(lower: RotationalState, upper: RotationalState) -> bool:
    """Rotational Raman selection: Delta J in {0, +-1, +-2}, excluding J=0 <-> J=0"""
    if lower.J == 0 and upper.J == 0:
        return False
    if abs(upper.J - lower.J) > 2:
        return False
    return lower.level != upper.level


def line_strength(lower: RotationalState, upper: RotationalState, axis: str) -> float:
    """
    S = 3 * sum_m |<upper, m|Phi_Zg|lower, m>|^2

    Both states contribute only their eigenvectors; m labels are ignored.
    """
    total = 0.0
    m_max = min(lower.J, upper.J)
    for m in range(-m_max, m_max + 1):
        block = direction_cosine_block(upper.J, lower.J, m, axis)
        total += abs(upper.eigvec @ block @ lower.eigvec) ** 2
    return 3 * total


def allowed_transitions(table: LevelTable, species: MolecularSpecies, f_min: float,
                        f_max: float) -> TransitionCatalog:
    """
    Catalog every E1-allowed line with f_min <= frequency <= f_max

    Args:
        table: Solved levels
        species: Supplies the dipole components gating a/b/c types
        f_min: Lower frequency bound in Hz (>= 0)
        f_max: Upper frequency bound in Hz (> f_min)

    Returns:
        TransitionCatalog sorted by frequency

    Raises:
        DomainError: If the bounds are inconsistent
    """
    if f_min < 0 or f_max <= f_min:
        raise DomainError(f"need 0 <= f_min < f_max, got [{f_min}, {f_max}]")
    representatives = [table.representative(level) for level in table.manifolds]
    entries = []
    for i, first in enumerate(representatives):
        for second in representatives[i + 1:]:
            lower, upper = sorted((first, second), key=lambda s: (s.energy, s.id))
            kind = transition_type(lower, upper)
            if kind is None or species.dipole[TYPE_INDEX[kind]] == 0:
                continue
            frequency = upper.energy - lower.energy
            if frequency <= 0 or not f_min <= frequency <= f_max:
                continue
            strength = line_strength(lower, upper, TYPE_AXIS[kind])
            if strength <= STRENGTH_THRESHOLD:
                continue
            entries.append(TransitionEntry(lower.id, upper.id, frequency, strength, kind))
    entries.sort(key=lambda entry: (entry.frequency, entry.lower, entry.upper))
    logger.info("%d allowed transitions between %.3g and %.3g Hz", len(entries), f_min, f_max)
    return TransitionCatalog(tuple(entries))


@dataclass(frozen=True)
class ReachabilityReport:
    """
    Outcome of a graph search from the ground level

    Attributes:
        reached (Tuple[Level, ...]): Levels connected to the ground level
        unreached (Tuple[Level, ...]): Levels of the table that cannot be reached
    """

    reached: Tuple[Level, ...]
    unreached: Tuple[Level, ...]

    @property
    def all_reached(self) -> bool:
        return not self.unreached


def reachability(table: LevelTable, catalog: TransitionCatalog,
                 f_max: float) -> ReachabilityReport:
    """
    Levels reachable from the lowest level using catalog lines at or below f_max
    """
    levels = list(table.manifolds)
    index: Dict[int, int] = {table.representative(level).id: i for i, level in enumerate(levels)}
    rows, cols = [], []
    for entry in catalog:
        if entry.frequency <= f_max and entry.lower in index and entry.upper in index:
            rows += [index[entry.lower], index[entry.upper]]
            cols += [index[entry.upper], index[entry.lower]]
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(levels), len(levels)))
    order = breadth_first_order(graph, 0, directed=False, return_predecessors=False)
    seen = set(int(i) for i in order)
    reached = tuple(levels[i] for i in sorted(seen))
    unreached = tuple(level for i, level in enumerate(levels) if i not in seen)
    return ReachabilityReport(reached, unreached)
