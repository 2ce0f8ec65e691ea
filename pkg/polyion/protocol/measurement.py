"""
Measurement Module

This module implements the subspace measurement: drive a subspace, let the
molecule heat the crystal if it is inside, then classify the temperature.
The fast mode uses the membership oracle with classifier noise; the full
mode reads temperatures off simulated trajectories.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ProtocolConfigError
from ..core.io import config_hash
from ..molspec.levels import LevelTable
from ..optics.lattice import LatticeConfig
from ..optics.potential import potential_profile
from ..trapdyn.flips import FlipProcess
from ..trapdyn.heating import temperature_of
from ..trapdyn.integrator import DEFAULT_DT, EnsembleTrajectory, LatticeField, integrate_many
from ..trapdyn.trap import TrapConfig
from .query import SubspaceQuery
from .register import MoleculeRegister
from .thermometer import MeasurementRecord, Outcome, Thermometer

logger = logging.getLogger(__name__)

MODES = ("fast", "full")


class DynamicsReadout:
    """
    Heating readout backed by trajectory simulation

    Trajectories are computed once per (initial state, driven subspace) and
    kept as a pool; each measurement draws one trajectory from the pool and
    reads its temperature over the final window.

    Attributes:
        table (LevelTable): Levels supplying the states' polarizabilities
        trap (TrapConfig): Ion trap
        lattice (LatticeConfig): Lattice beams
        flip_rate (float): Mixing rate of the subspace drive, in 1/s
        t_end (float): Duration of one heating stage, in s
        dt (float): Integrator step, in s
        temperature (float): Initial crystal temperature, in K
        window (float): Temperature averaging window, in s
        pool_size (int): Trajectories simulated per pool
        seed (int): Root seed of every pool
    """

    def __init__(self, table: LevelTable, trap: TrapConfig, lattice: LatticeConfig,
                 flip_rate: float = 2e6, t_end: float = 1e-3, dt: float = DEFAULT_DT,
                 temperature: float = 2e-6, window: Optional[float] = None,
                 pool_size: int = 16, seed: int = 0):
        if pool_size < 1:
            raise ProtocolConfigError("pool size must be at least 1")
        self.table = table
        self.trap = trap
        self.lattice = lattice
        self.flip_rate = flip_rate
        self.t_end = t_end
        self.dt = dt
        self.temperature = temperature
        self.window = window if window is not None else 0.2 * t_end
        self.pool_size = pool_size
        self.seed = seed
        self._pools: Dict[Tuple[int, Tuple[int, ...]], List[EnsembleTrajectory]] = {}

    def _field(self, ids: Sequence[int]) -> LatticeField:
        species = self.table.species
        potentials = {i: potential_profile(self.table[i], species, self.lattice) for i in ids}
        return LatticeField(potentials, tuple(self.lattice.direction))

    def pool(self, truth: int, query: SubspaceQuery) -> List[EnsembleTrajectory]:
        driven = tuple(query.ids) if truth in query and len(query) > 1 else ()
        key = (truth, driven)
        if key not in self._pools:
            flips = FlipProcess(self.flip_rate, driven) if driven else None
            field = self._field(sorted(set(driven) | {truth}))
            seed = int(config_hash({"seed": self.seed, "truth": truth, "driven": driven}), 16)
            logger.info("simulating %d trajectories from state %d, driven %s",
                        self.pool_size, truth, list(driven))
            self._pools[key] = integrate_many(self.trap, field, flips, self.t_end, self.dt,
                                              self.pool_size, self.temperature, seed, truth)
        return self._pools[key]

    def measure(self, truth: int, query: SubspaceQuery, thermometer: Thermometer,
                rng: np.random.Generator, restore: bool = False) -> Tuple[bool, int]:
        """
        Args:
            restore: Close a two-state drive with one more pi-pulse when the
                schedule applied an odd number, returning the molecule to its
                starting state

        Returns:
            (heated, post_state) of one drawn trajectory
        """
        pool = self.pool(truth, query)
        trajectory = pool[int(rng.integers(len(pool)))]
        heated = temperature_of(trajectory, self.window) > thermometer.threshold_T
        post = int(trajectory.labels[-1])
        if restore and len(trajectory.flip_times) % 2:
            post = next(state_id for state_id in query.ids if state_id != post)
        return heated, post


def _single_shot(register: MoleculeRegister, query: SubspaceQuery, thermometer: Thermometer,
                 mode: str, readout: Optional[DynamicsReadout], restore: bool) -> bool:
    rng = register.rng
    if mode == "full":
        heated, post = readout.measure(register.truth, query, thermometer, rng, restore)
        register.project(post)
        return heated
    inside = register.truth in query
    if inside and not restore:
        members = query.ids
        register.project(members[int(rng.integers(len(members)))])
    error = thermometer.false_negative if inside else thermometer.false_positive
    return inside != bool(rng.random() < error)


def measure_subspace(register: MoleculeRegister, query: SubspaceQuery, thermometer: Thermometer,
                     mode: str = "fast", repetitions: int = 1,
                     readout: Optional[DynamicsReadout] = None, step: int = 1,
                     restore: bool = False) -> MeasurementRecord:
    """
    Heating measurement of one subspace

    A molecule inside the subspace ends uniformly distributed over its
    members; one outside is left untouched. Repetitions are majority voted.
    A restored two-state query ends every drive on the molecule's starting
    state, since the pi-pulse schedule is known and its parity can be closed.

    Args:
        register: The molecule
        query: Subspace driven during the measurement
        thermometer: Threshold classifier
        mode: "fast" (membership with classifier noise) or "full" (trajectory readout)
        repetitions: Odd number of repeated measurements
        readout: Trajectory backend, required in full mode
        step: Index recorded in the measurement record
        restore: Return the molecule to its starting state after a two-state drive

    Returns:
        MeasurementRecord with the reported outcome and the hidden post state

    Raises:
        ProtocolConfigError: On an unknown mode or an even repetition count
        ProtocolConfigError: When full mode has no readout, or restore is asked
            of a query that is not a pair
    """
    if mode not in MODES:
        raise ProtocolConfigError(f"unknown measurement mode {mode!r}")
    if repetitions < 1 or repetitions % 2 == 0:
        raise ProtocolConfigError(f"repetitions must be a positive odd number, got {repetitions}")
    if mode == "full" and readout is None:
        raise ProtocolConfigError("full mode needs a DynamicsReadout")
    if restore and len(query) != 2:
        raise ProtocolConfigError(f"only a two-state query can be restored, got {query.ids}")

    votes = []
    for _ in range(repetitions):
        votes.append(_single_shot(register, query, thermometer, mode, readout, restore))
        register.advance(thermometer.readout_time)
    outcome = Outcome.of(sum(votes) * 2 > repetitions)
    logger.debug("query %s -> %s (votes %s)", query.ids, outcome.value, votes)
    return MeasurementRecord(step, tuple(query.ids), outcome, register.truth, register.clock,
                             tuple(votes))


def ensemble_measure(registers: Sequence[MoleculeRegister], query: SubspaceQuery,
                     thermometer: Thermometer) -> Outcome:
    """
    One measurement on several molecules sharing the crystal

    The crystal heats when any molecule is inside the subspace. Each molecule
    inside is re-randomized over the members; classifier noise is drawn from
    the first register.
    """
    if not registers:
        raise ProtocolConfigError("ensemble measurement needs at least one register")
    members = query.ids
    any_inside = False
    for register in registers:
        if register.truth in query:
            any_inside = True
            register.project(members[int(register.rng.integers(len(members)))])
        register.advance(thermometer.readout_time)
    error = thermometer.false_negative if any_inside else thermometer.false_positive
    return Outcome.of(any_inside != bool(registers[0].rng.random() < error))
