"""
Search Module

Adaptive binary search for the molecule's internal state.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from ..core.errors import ProtocolConfigError, SearchFailure
from ..molspec.levels import LevelTable
from .measurement import DynamicsReadout, measure_subspace
from .query import SubspaceQuery
from .register import MoleculeRegister
from .thermometer import MeasurementRecord, Thermometer

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchResult:
    """
    Attributes:
        state (int): The isolated state id
        records (Tuple[MeasurementRecord, ...]): Every measurement taken
    """

    state: int
    records: Tuple[MeasurementRecord, ...]

    @property
    def steps(self) -> int:
        return len(self.records)


def step_budget(n_candidates: int) -> int:
    """3 * ceil(log2 n) measurements"""
    return 3 * max(1, math.ceil(math.log2(max(n_candidates, 2))))


def _helper(universe: Sequence[int], excluded: Iterable[int]) -> int:
    taken = set(excluded)
    for state_id in universe:
        if state_id not in taken:
            return state_id
    raise ProtocolConfigError("no state outside the candidates is available to pad a query")


def binary_search_state(register: MoleculeRegister, table: LevelTable, thermometer: Thermometer,
                        max_steps: Optional[int] = None, candidates: Optional[Sequence[int]] = None,
                        mode: str = "fast", repetitions: int = 1,
                        readout: Optional[DynamicsReadout] = None) -> SearchResult:
    """
    Halve the candidate set with subspace measurements until one state is left

    Each query drives half of the candidates. Heating leaves the molecule
    somewhere in the queried half, which becomes the candidate set; no heating
    removes that half. Every step at least halves the set, so a noiseless
    search ends after ceil(log2 n) measurements.

    In fast mode a lone candidate is queried by itself. A lone state cannot
    heat the crystal in full mode, so there it is paired with one
    non-candidate state and the drive is restored, leaving the molecule where
    it started.

    Args:
        register: The molecule
        table: Levels; non-candidate padding states are taken from it
        thermometer: Heating classifier
        max_steps: Measurement budget; defaults to 3 * ceil(log2 n)
        candidates: Initial candidate ids; defaults to the prior support
        mode: Measurement mode passed to measure_subspace
        repetitions: Majority-vote repetitions per query
        readout: Trajectory backend for full mode

    Returns:
        SearchResult naming the isolated state

    Raises:
        SearchFailure: When the budget runs out with more than one candidate
    """
    current: List[int] = sorted(candidates if candidates is not None else register.support)
    if not current:
        raise ProtocolConfigError("binary search needs at least one candidate")
    budget = max_steps if max_steps is not None else step_budget(len(current))
    universe = table.ids
    records: List[MeasurementRecord] = []

    while len(current) > 1:
        if len(records) >= budget:
            raise SearchFailure(f"{len(current)} candidates left after {budget} measurements",
                                current, records)
        half = current[: len(current) // 2]
        padded = mode == "full" and len(half) == 1
        query = SubspaceQuery.chain(half + [_helper(universe, current)] if padded else half)
        record = measure_subspace(register, query, thermometer, mode, repetitions, readout,
                                  step=len(records) + 1, restore=padded)
        records.append(record)
        if record.outcome:
            current = half
        else:
            current = [state_id for state_id in current if state_id not in query]
        logger.debug("step %d: %d candidates left", len(records), len(current))

    return SearchResult(current[0], tuple(records))
