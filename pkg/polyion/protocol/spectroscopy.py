"""
Spectroscopy Module

Frequency scans on a prepared molecule: a Rabi or Ramsey sequence on a
source/destination pair followed by a heating measurement of the
destination.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.errors import ProtocolConfigError
from ..core.io import write_csv
from ..pulses.drive import DriveField, InternalState
from ..pulses.evolution import evolve
from .measurement import measure_subspace
from .query import SubspaceQuery
from .register import MoleculeRegister
from .thermometer import Thermometer

logger = logging.getLogger(__name__)

SEQUENCES = ("rabi", "ramsey")


@dataclass(frozen=True)
class ScanPulse:
    """
    Pulse sequence applied at every scan point

    Attributes:
        sequence (str): "rabi" for one pulse, "ramsey" for two separated pulses
        duration (float): Length of the Rabi pulse, or of each Ramsey pulse, in s
        rabi_frequency (float): Omega_R in rad/s; None gives a pi pulse
            (rabi) or two pi/2 pulses (ramsey)
        free_time (float): Ramsey dark time between the pulses, in s
    """

    sequence: str = "rabi"
    duration: float = 1e-3
    rabi_frequency: Optional[float] = None
    free_time: float = 0.0

    def __post_init__(self):
        if self.sequence not in SEQUENCES:
            raise ProtocolConfigError(f"unknown scan sequence {self.sequence!r}")
        if self.duration <= 0:
            raise ProtocolConfigError("pulse duration must be positive")
        if self.sequence == "ramsey" and self.free_time <= 0:
            raise ProtocolConfigError("a Ramsey sequence needs a positive free time")

    @property
    def rabi(self) -> float:
        if self.rabi_frequency is not None:
            return self.rabi_frequency
        area = np.pi if self.sequence == "rabi" else np.pi / 2
        return area / self.duration

    @property
    def windows(self) -> Tuple[Tuple[float, float], ...]:
        if self.sequence == "rabi":
            return ((0.0, self.duration),)
        second = self.duration + self.free_time
        return ((0.0, self.duration), (second, second + self.duration))

    @property
    def total_time(self) -> float:
        return self.windows[-1][1]


@dataclass(frozen=True)
class ScanResult:
    """
    Attributes:
        detunings (np.ndarray): Drive detunings in Hz
        transfer (np.ndarray): Destination population after the sequence
        measured (np.ndarray): Fraction of heated shots per point; empty without shots
    """

    detunings: np.ndarray
    transfer: np.ndarray
    measured: np.ndarray

    def rows(self):
        if len(self.measured):
            return [[d / 1e3, p, f] for d, p, f in zip(self.detunings, self.transfer, self.measured)]
        return [[d / 1e3, p] for d, p in zip(self.detunings, self.transfer)]

    @property
    def header(self) -> Tuple[str, ...]:
        columns = ("detuning_kHz", "transfer_prob")
        return columns + ("measured_prob",) if len(self.measured) else columns

    def write_csv(self, path: Union[str, Path], meta: Optional[Mapping[str, Any]] = None) -> Path:
        return write_csv(path, self.header, self.rows(), meta)


def transfer_probability(pair: Tuple[int, int], pulse: ScanPulse, detuning: float) -> float:
    """Destination population after the sequence, detuning in Hz"""
    drive = DriveField(pair, pulse.rabi, 2 * np.pi * detuning, windows=pulse.windows)
    final = evolve(InternalState.basis(pair, pair[0]), [drive], pulse.total_time).final
    return final.population(pair[1])


def spectroscopy_scan(register: MoleculeRegister, pair: Tuple[int, int], thermometer: Thermometer,
                      pulse: ScanPulse, detunings: Sequence[float], shots: int = 0,
                      helper: Optional[int] = None) -> ScanResult:
    """
    Scan the drive detuning across a transition

    Args:
        register: Molecule prepared in the source state pair[0]
        pair: (source, destination) state ids
        thermometer: Heating classifier for the shot readout
        pulse: Sequence applied at each detuning
        detunings: Drive detunings in Hz
        shots: Measurements per point; 0 reports only the ideal transfer
        helper: State mixed with the destination during readout; must differ
            from the source

    Returns:
        ScanResult with the transfer probability per detuning

    Raises:
        ProtocolConfigError: If the register is not in the source state
    """
    source, destination = pair
    if register.truth != source:
        raise ProtocolConfigError(f"scan expects the molecule in state {source}, "
                                  f"found it elsewhere")
    if helper == source:
        raise ProtocolConfigError("readout helper must differ from the source state")
    members = [destination] if helper is None else [destination, helper]
    query = SubspaceQuery.chain(members)
    detunings = np.asarray(detunings, dtype=float)
    transfer = np.array([transfer_probability(pair, pulse, d) for d in detunings])

    measured = []
    if shots > 0:
        for p in transfer:
            heated = 0
            for _ in range(shots):
                register.project(source)
                register.advance(pulse.total_time)
                if register.rng.random() < p:
                    register.project(destination)
                heated += bool(measure_subspace(register, query, thermometer).outcome)
            measured.append(heated / shots)
        register.project(source)
    logger.info("scanned %d detunings (%s)", len(detunings), pulse.sequence)
    return ScanResult(detunings, transfer, np.array(measured))
