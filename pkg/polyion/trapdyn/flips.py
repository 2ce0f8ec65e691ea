"""
Flips Module

This module defines FlipProcess, the Poisson-timed sequence of internal
state changes driven by dithered pi-pulses.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..core.errors import ConfigError


def poisson_times(rate: float, t_end: float, rng: np.random.Generator) -> np.ndarray:
    """
    Event times in [0, t_end]: one event at t = 0, then Exponential(rate) gaps

    A zero rate yields the single event at t = 0.
    """
    if rate < 0:
        raise ConfigError(f"rate must be >= 0, got {rate}")
    times = [0.0]
    if rate == 0:
        return np.array(times)
    t = 0.0
    while True:
        t += rng.exponential(1 / rate)
        if t > t_end:
            break
        times.append(t)
    return np.array(times)


@dataclass(frozen=True)
class FlipProcess:
    """
    Random switching of the molecule's internal label

    Attributes:
        rate (float): Mean flip rate Gamma_flip in 1/s
        labels (Tuple[int, ...]): State ids addressed by the drive; a molecule
            starting outside this set is never flipped
    """

    rate: float
    labels: Tuple[int, ...]

    def __post_init__(self):
        if self.rate < 0:
            raise ConfigError(f"flip rate must be >= 0, got {self.rate}")
        if len(self.labels) < 2 or len(set(self.labels)) != len(self.labels):
            raise ConfigError(f"flip labels must be at least two distinct ids, got {self.labels}")

    @classmethod
    def pair(cls, rate: float, lo: int, hi: int) -> "FlipProcess":
        return cls(rate, (lo, hi))

    def addresses(self, label: int) -> bool:
        return label in self.labels

    def draw(self, initial_label: int, t_end: float,
             rng: np.random.Generator) -> Tuple[np.ndarray, List[int]]:
        """
        Flip times and the label entered at each flip

        Returns:
            (times, labels); both empty when the initial label is not addressed
        """
        if not self.addresses(initial_label):
            return np.array([]), []
        times = poisson_times(self.rate, t_end, rng)
        sequence = []
        current = initial_label
        others = len(self.labels) - 1
        for _ in times:
            if others == 1:
                current = self.labels[1] if current == self.labels[0] else self.labels[0]
            else:
                choices = [label for label in self.labels if label != current]
                current = choices[int(rng.integers(others))]
            sequence.append(current)
        return times, sequence


def flip_counts(times: Sequence[float], grid: np.ndarray) -> np.ndarray:
    """Number of flips at or before each grid time"""
    return np.searchsorted(np.asarray(times), grid, side="right")
