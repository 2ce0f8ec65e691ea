"""
Chiral Module

Enantiomer-selective transfer by three simultaneous drives closing the
loop A - B - C. The two enantiomers differ in the sign of the product of
their dipole components, which flips the sign of one coupling (C <-> B here)
and hence the loop phase by pi.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Mapping, Tuple

import numpy as np
from scipy import optimize

from ..core.errors import ConfigError
from .drive import DriveField, InternalState
from .evolution import evolve

logger = logging.getLogger(__name__)

PATHS = ("AB", "AC", "CB")


class Enantiomer(Enum):
    R = "R"
    S = "S"


def loop_phase(phases: Mapping[str, float]) -> float:
    """Gauge-invariant phase phi_AB - phi_AC - phi_CB of the drive loop"""
    return phases["AB"] - phases["AC"] - phases["CB"]


def chiral_fields(phases: Mapping[str, float], rabi: Mapping[str, float], enantiomer: Enantiomer,
                  duration: float, states: Tuple[int, int, int]):
    a, c, b = states
    flip = np.pi if enantiomer is Enantiomer.S else 0.0
    pairs = {"AB": (a, b), "AC": (a, c), "CB": (c, b)}
    window = ((0.0, duration),)
    return [DriveField(pairs[path], rabi[path], 0.0,
                       phases[path] + (flip if path == "CB" else 0.0), window)
            for path in PATHS if rabi[path] > 0]


def chiral_transfer(phases: Mapping[str, float], rabi: Mapping[str, float],
                    enantiomer: Enantiomer, duration: float,
                    states: Tuple[int, int, int] = (0, 1, 2)) -> float:
    """
    Population reaching B after simultaneous A-B, A-C and C-B drives

    Args:
        phases: Drive phases keyed 'AB', 'AC', 'CB' in rad
        rabi: Rabi frequencies keyed the same way, in rad/s
        enantiomer: R, or S which reverses the sign of the C-B coupling
        duration: Drive duration in s
        states: Ids of (A, C, B)

    Returns:
        |<B|psi(duration)>|^2 starting from |A>

    Raises:
        ConfigError: If the state ids are not distinct or a path is missing
    """
    if len(set(states)) != 3:
        raise ConfigError(f"chiral transfer needs three distinct states, got {states}")
    missing = [path for path in PATHS if path not in phases or path not in rabi]
    if missing:
        raise ConfigError(f"missing drive parameters for {missing}")
    a, c, b = states
    fields = chiral_fields(phases, rabi, enantiomer, duration, states)
    final = evolve(InternalState.basis(states, a), fields, duration).final
    return final.population(b)


def cyclic_duration(rabi: float) -> float:
    """Time 4 pi / (3 sqrt(3) Omega) for complete A -> B transfer with equal couplings"""
    return 4 * np.pi / (3 * np.sqrt(3) * rabi)


@dataclass(frozen=True)
class ChiralResult:
    """
    Attributes:
        phases (Dict[str, float]): Drive phases in rad
        duration (float): Drive duration in s
        P_B_R (float): Transfer for the R enantiomer
        P_B_S (float): Transfer for the S enantiomer
    """

    phases: Dict[str, float]
    duration: float
    P_B_R: float
    P_B_S: float

    @property
    def contrast(self) -> float:
        return abs(self.P_B_R - self.P_B_S)

    def summary(self) -> Dict[str, Any]:
        return {"P_B_R": self.P_B_R, "P_B_S": self.P_B_S, "contrast": self.contrast}


def optimize_chiral_contrast(rabi: float, states: Tuple[int, int, int] = (0, 1, 2),
                             tol: float = 1e-12) -> ChiralResult:
    """
    Phases and duration maximizing P_B(R) - P_B(S) for equal couplings

    Starts from the cyclic solution (loop phase +-pi/2, cyclic_duration) with
    whichever sign transfers R, then refines phi_AB and the duration.
    """
    couplings = {path: rabi for path in PATHS}

    def evaluate(phi_ab: float, duration: float) -> Tuple[float, float]:
        phases = {"AB": phi_ab, "AC": 0.0, "CB": 0.0}
        return (chiral_transfer(phases, couplings, Enantiomer.R, duration, states),
                chiral_transfer(phases, couplings, Enantiomer.S, duration, states))

    t0 = cyclic_duration(rabi)
    guesses = [(sign * np.pi / 2, t0) for sign in (1, -1)]
    start = max(guesses, key=lambda g: np.subtract(*evaluate(*g)))

    def cost(x):
        r, s = evaluate(x[0], x[1] * t0)
        return -(r - s)

    result = optimize.minimize(cost, [start[0], 1.0], method="Nelder-Mead",
                               options={"xatol": 1e-10, "fatol": tol})
    best = result.x if result.fun <= cost([start[0], 1.0]) else np.array([start[0], 1.0])
    phi_ab, duration = float(best[0]), float(best[1] * t0)
    p_r, p_s = evaluate(phi_ab, duration)
    logger.info("chiral contrast %.8f at loop phase %.4f rad, t = %.4g s", p_r - p_s, phi_ab,
                duration)
    return ChiralResult({"AB": phi_ab, "AC": 0.0, "CB": 0.0}, duration, p_r, p_s)
