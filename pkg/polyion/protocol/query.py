"""
Query Module

This module defines SubspaceQuery, a set of states mixed together by a
drive plan during one heating measurement, and the selection-rule checks
for its drive plan.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..core.errors import ProtocolConfigError
from ..molspec.levels import LevelTable
from ..molspec.species import MolecularSpecies
from ..molspec.transitions import TYPE_INDEX, raman_allowed, transition_type
from ..pulses.drive import DriveKind

Pair = Tuple[int, int]


def mixing_graph_connected(members: Iterable[int], pairs: Iterable[Pair]) -> bool:
    """True when the pairs connect every member"""
    ids = sorted(members)
    if len(ids) <= 1:
        return True
    index = {state_id: k for k, state_id in enumerate(ids)}
    rows = [index[i] for i, _ in pairs]
    cols = [index[j] for _, j in pairs]
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(ids), len(ids)))
    n_components, _ = connected_components(graph, directed=False)
    return n_components == 1


@dataclass(frozen=True)
class SubspaceQuery:
    """
    Subspace addressed by one measurement

    Attributes:
        members (FrozenSet[int]): State ids mixed by the drive
        drive_plan (Tuple[Pair, ...]): Flip pairs; their graph must connect all members
        kind (DriveKind): Microwave or Raman drive
    """

    members: FrozenSet[int]
    drive_plan: Tuple[Pair, ...] = field(default_factory=tuple)
    kind: DriveKind = DriveKind.Microwave

    def __post_init__(self):
        if not self.members:
            raise ProtocolConfigError("a subspace query needs at least one state")
        for i, j in self.drive_plan:
            if i == j or i not in self.members or j not in self.members:
                raise ProtocolConfigError(f"drive pair ({i}, {j}) must join two members")
        if not mixing_graph_connected(self.members, self.drive_plan):
            raise ProtocolConfigError(f"drive plan {self.drive_plan} does not mix all of "
                                      f"{sorted(self.members)}")

    @classmethod
    def chain(cls, members: Iterable[int], kind: DriveKind = DriveKind.Microwave) -> "SubspaceQuery":
        """Query whose plan drives consecutive members in id order"""
        ids = sorted(set(members))
        return cls(frozenset(ids), tuple(zip(ids, ids[1:])), kind)

    @property
    def ids(self) -> List[int]:
        return sorted(self.members)

    def __contains__(self, state_id: int) -> bool:
        return state_id in self.members

    def __len__(self) -> int:
        return len(self.members)


def drive_plan_problems(query: SubspaceQuery, table: LevelTable,
                        species: MolecularSpecies) -> List[str]:
    """
    Selection-rule violations of a query's drive plan

    Microwave pairs must be electric-dipole allowed with a nonzero dipole
    component and |Delta m| <= 1; Raman pairs must be Raman allowed with
    |Delta m| <= 2.
    """
    problems = []
    for i, j in query.drive_plan:
        a, b = table[i], table[j]
        if query.kind is DriveKind.Microwave:
            kind = transition_type(a, b) if a.energy <= b.energy else transition_type(b, a)
            if kind is None or species.dipole[TYPE_INDEX[kind]] == 0:
                problems.append(f"{a.label} <-> {b.label} is not electric-dipole allowed")
            elif abs(a.m - b.m) > 1:
                problems.append(f"{a.label} <-> {b.label} changes m by more than 1")
        else:
            if not raman_allowed(a, b):
                problems.append(f"{a.label} <-> {b.label} is not Raman allowed")
            elif abs(a.m - b.m) > 2:
                problems.append(f"{a.label} <-> {b.label} changes m by more than 2")
    return problems


def validate_drive_plan(query: SubspaceQuery, table: LevelTable, species: MolecularSpecies) -> None:
    """
    Raises:
        ProtocolConfigError: Listing every pair the drive cannot couple
    """
    problems = drive_plan_problems(query, table, species)
    if problems:
        raise ProtocolConfigError("; ".join(problems))
