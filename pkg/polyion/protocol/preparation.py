"""
Preparation Module

Heralded preparation of a single rotational state out of a manifold.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ProtocolConfigError
from ..molspec.levels import LevelTable
from ..molspec.transitions import TYPE_INDEX, transition_type
from ..pulses.drive import DriveField, InternalState
from ..pulses.evolution import evolve
from .measurement import DynamicsReadout, measure_subspace
from .query import SubspaceQuery
from .register import MoleculeRegister
from .thermometer import MeasurementRecord, Thermometer

logger = logging.getLogger(__name__)

SWAP_RABI = 2 * np.pi * 1e3


@dataclass(frozen=True)
class PreparationResult:
    """
    Attributes:
        success (bool): A not-heated outcome followed a heated one
        rounds (int): Rounds used, each one swap attempt or one failed confirmation
        state (int): Hidden state at the end
        records (Tuple[MeasurementRecord, ...]): Every measurement taken
    """

    success: bool
    rounds: int
    state: int
    records: Tuple[MeasurementRecord, ...]


def bridge_state(table: LevelTable, manifold: Sequence[int], target: int) -> int:
    """
    A manifold member with an electric-dipole transition to the target

    Raises:
        ProtocolConfigError: If the target lies in the manifold or no member
            couples to it
    """
    if target in manifold:
        raise ProtocolConfigError(f"target {target} must lie outside the manifold")
    species = table.species
    goal = table[target]
    for state_id in sorted(manifold):
        member = table[state_id]
        kind = transition_type(member, goal)
        if kind is not None and species.dipole[TYPE_INDEX[kind]] != 0 and abs(member.m - goal.m) <= 1:
            return state_id
    raise ProtocolConfigError(f"no manifold state has an allowed transition to {goal.label}")


def swap(register: MoleculeRegister, pair: Tuple[int, int], rabi: float = SWAP_RABI) -> None:
    """Resonant pi pulse on the pair; a molecule elsewhere is unaffected"""
    duration = np.pi / rabi
    register.advance(duration)
    if register.truth not in pair:
        return
    drive = DriveField(pair, rabi, windows=((0.0, duration),))
    final = evolve(InternalState.basis(pair, register.truth), [drive], duration).final
    register.project(max(pair, key=final.population))


def prepare_state(register: MoleculeRegister, table: LevelTable, thermometer: Thermometer,
                  target: int, manifold: Sequence[int], max_rounds: int = 50,
                  mode: str = "fast", repetitions: int = 1,
                  readout: Optional[DynamicsReadout] = None) -> PreparationResult:
    """
    Prepare the target state by swapping it with one manifold member

    The molecule is first confirmed inside the manifold. Each round then swaps
    the bridge member with the target and measures the manifold again; a
    molecule that was in the bridge state leaves the manifold and no longer
    heats the crystal.

    Args:
        register: The molecule
        table: Levels, used to find the bridge transition
        thermometer: Heating classifier
        target: State to prepare, outside the manifold
        manifold: States the molecule is known or hoped to occupy
        max_rounds: Round budget
        mode: Measurement mode passed to measure_subspace
        repetitions: Majority-vote repetitions per measurement
        readout: Trajectory backend for full mode

    Returns:
        PreparationResult; success=False when the budget runs out

    Raises:
        ProtocolConfigError: If no manifold member couples to the target
    """
    bridge = bridge_state(table, manifold, target)
    query = SubspaceQuery.chain(manifold)
    records: List[MeasurementRecord] = []

    def measure():
        record = measure_subspace(register, query, thermometer, mode, repetitions, readout,
                                  step=len(records) + 1)
        records.append(record)
        return record.outcome

    confirmed = False
    for round_index in range(1, max_rounds + 1):
        if not confirmed:
            if not measure():
                continue
            confirmed = True
        swap(register, (bridge, target))
        if not measure():
            logger.info("prepared state %d after %d rounds", target, round_index)
            return PreparationResult(True, round_index, register.truth, tuple(records))
    logger.warning("preparation of state %d failed after %d rounds", target, max_rounds)
    return PreparationResult(False, max_rounds, register.truth, tuple(records))
