"""
Drive Module

This module defines DriveField, one coherent coupling between two
rotational states, InternalState, the amplitude vector the drives act on,
and the helpers turning hardware settings and pulse schedules into fields.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ConfigError, DomainError
from ..core.units import h
from ..trapdyn.flips import poisson_times

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10

Window = Tuple[float, float]


class DriveKind(Enum):
    """How a pair of states is coupled"""
    Microwave = "microwave"
    Raman = "raman"


@dataclass(frozen=True)
class DriveField:
    """
    Rotating-frame coupling between states i and j

    Attributes:
        pair (Tuple[int, int]): State ids (i, j); the detuning applies to j
        rabi_frequency (float): Omega_R in rad/s
        detuning (float): Delta in rad/s
        phase (float): Drive phase phi in rad
        windows (Tuple[Window, ...]): (t_on, t_off) segments in s
        kind (DriveKind): Microwave (E1) or Raman coupling
    """

    pair: Tuple[int, int]
    rabi_frequency: float
    detuning: float = 0.0
    phase: float = 0.0
    windows: Tuple[Window, ...] = field(default_factory=tuple)
    kind: DriveKind = DriveKind.Microwave

    def __post_init__(self):
        i, j = self.pair
        if i == j:
            raise ConfigError(f"drive pair must join two distinct states, got {self.pair}")
        if self.rabi_frequency < 0:
            raise ConfigError(f"Rabi frequency must be >= 0, got {self.rabi_frequency}")
        ordered = sorted(self.windows)
        for on, off in ordered:
            if not on < off:
                raise ConfigError(f"window ({on}, {off}) must have t_on < t_off")
        for (_, first_off), (second_on, _) in zip(ordered, ordered[1:]):
            if second_on < first_off:
                raise ConfigError(f"windows of field {self.pair} overlap")

    def is_on(self, t: float) -> bool:
        return any(on <= t < off for on, off in self.windows)

    def edges(self) -> List[float]:
        return [t for window in self.windows for t in window]

    def shifted(self, phase: float) -> "DriveField":
        """Same field with its phase advanced by the given amount"""
        return DriveField(self.pair, self.rabi_frequency, self.detuning, self.phase + phase,
                          self.windows, self.kind)


class InternalState:
    """
    Pure internal state over a chosen subset of rotational states

    Attributes:
        ids (Tuple[int, ...]): State ids spanning the subspace
        amplitudes (np.ndarray): Complex amplitudes, one per id, unit norm
    """

    def __init__(self, ids: Sequence[int], amplitudes: Sequence[complex]):
        self.ids = tuple(int(i) for i in ids)
        self.amplitudes = np.asarray(amplitudes, dtype=complex)
        if len(set(self.ids)) != len(self.ids):
            raise ConfigError(f"internal state ids must be distinct, got {self.ids}")
        if self.amplitudes.shape != (len(self.ids),):
            raise DomainError("one amplitude per state id is required")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1) > NORM_TOLERANCE:
            raise DomainError(f"internal state norm {norm!r} differs from 1")
        self._index = {state_id: k for k, state_id in enumerate(self.ids)}

    @classmethod
    def basis(cls, ids: Sequence[int], occupied: int) -> "InternalState":
        amplitudes = np.zeros(len(ids), dtype=complex)
        amplitudes[list(ids).index(occupied)] = 1
        return cls(ids, amplitudes)

    def index(self, state_id: int) -> int:
        try:
            return self._index[state_id]
        except KeyError:
            raise ConfigError(f"state {state_id} is not part of this internal state") from None

    def population(self, state_id: int) -> float:
        return float(abs(self.amplitudes[self.index(state_id)]) ** 2)

    def populations(self) -> Dict[int, float]:
        return {state_id: float(abs(a) ** 2) for state_id, a in zip(self.ids, self.amplitudes)}

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __str__(self) -> str:
        parts = ", ".join(f"{i}: {p:.4f}" for i, p in self.populations().items())
        return f"InternalState({parts})"


def rabi_from_voltage(voltage: float, dipole: float, electrode_spacing: float) -> float:
    """
    Omega_R = 2 pi V D / (d h) in rad/s for a drive voltage across the electrodes

    Args:
        voltage: Microwave amplitude in V
        dipole: Transition dipole in C*m
        electrode_spacing: Electrode separation in m
    """
    if electrode_spacing <= 0:
        raise DomainError("electrode spacing must be positive")
    return 2 * np.pi * voltage * dipole / (electrode_spacing * h)


def pi_pulse_schedule(pair: Tuple[int, int], rabi: float, rate: float, t_end: float,
                      seed=None) -> List[float]:
    """
    Start times of dithered pi-pulses on a pair

    The first pulse fires at t = 0; later gaps are Exponential(rate). The
    pair and Rabi frequency only travel with the schedule into
    schedule_to_fields.
    """
    rng = np.random.default_rng(seed)
    times = poisson_times(rate, t_end, rng)
    logger.debug("%d pi-pulses on %s over %.3g s", len(times), pair, t_end)
    return [float(t) for t in times]


def schedule_to_fields(times: Iterable[float], pair: Tuple[int, int], rabi: float,
                       detuning: float = 0.0, phase: float = 0.0,
                       kind: DriveKind = DriveKind.Microwave) -> DriveField:
    """
    One DriveField with a pi-pulse window of length pi/Omega at each start time

    A pulse starting before the previous window closes is dropped.
    """
    if rabi <= 0:
        raise DomainError("pi-pulses need a positive Rabi frequency")
    width = np.pi / rabi
    windows: List[Window] = []
    for t in sorted(times):
        if windows and t < windows[-1][1]:
            continue
        windows.append((t, t + width))
    return DriveField(tuple(pair), rabi, detuning, phase, tuple(windows), kind)
