"""
Thermometer Module

This module defines the heating classifier used by every protocol and the
record each measurement leaves behind.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple

from ..core.errors import ProtocolConfigError


class Outcome(Enum):
    """
    Binary readout of a heating measurement

    Attributes:
        Heated: Temperature rose above threshold
        NotHeated: Temperature stayed below threshold
    """

    Heated = "heated"
    NotHeated = "not_heated"

    @classmethod
    def of(cls, heated: bool) -> "Outcome":
        return cls.Heated if heated else cls.NotHeated

    def __bool__(self) -> bool:
        return self is Outcome.Heated


@dataclass(frozen=True)
class Thermometer:
    """
    Threshold classifier on the co-trapped crystal's temperature

    Attributes:
        threshold_T (float): Temperature separating heated from not heated, in K
        false_positive (float): Probability of reporting heated when nothing heated
        false_negative (float): Probability of reporting not heated after heating
        readout_time (float): Model duration of one measurement cycle, in s
    """

    threshold_T: float = 0.5e-3
    false_positive: float = 0.02
    false_negative: float = 0.02
    readout_time: float = 5e-3

    def __post_init__(self):
        if self.threshold_T <= 0:
            raise ProtocolConfigError(f"threshold temperature must be positive, got {self.threshold_T}")
        for name in ("false_positive", "false_negative"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ProtocolConfigError(f"{name} must lie in [0, 1], got {value}")
        if self.readout_time < 0:
            raise ProtocolConfigError("readout time must be >= 0")

    @classmethod
    def ideal(cls, threshold_T: float = 0.5e-3) -> "Thermometer":
        return cls(threshold_T, 0.0, 0.0)


@dataclass(frozen=True)
class MeasurementRecord:
    """
    What one (possibly repeated) subspace measurement produced

    Attributes:
        step (int): Position in the protocol's measurement sequence, from 1
        query_ids (Tuple[int, ...]): Members of the queried subspace
        outcome (Outcome): Reported outcome after majority vote
        post_state (int): Hidden state after the measurement
        t_model (float): Register clock after the measurement, in s
        votes (Tuple[bool, ...]): Individual heated reports
    """

    step: int
    query_ids: Tuple[int, ...]
    outcome: Outcome
    post_state: int
    t_model: float
    votes: Tuple[bool, ...] = ()

    def to_log(self, run_id: str) -> Dict[str, Any]:
        return {
            "run_id": run_id,
            "step": self.step,
            "query_ids": list(self.query_ids),
            "outcome": self.outcome.value,
            "post_state": self.post_state,
            "t_model_ms": self.t_model * 1e3,
        }
