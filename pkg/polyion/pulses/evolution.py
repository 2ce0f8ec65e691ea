"""
Evolution Module

Piecewise-constant propagation of an InternalState under DriveFields in
the rotating frame,

    H = sum (Omega/2) (e^{i phi} |i><j| + h.c.) - sum Delta |j><j|,

with hbar = 1 and the Hamiltonian in rad/s. Each interval between window
edges is propagated with an exact matrix exponential, so the sampling
step does not limit accuracy.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from ..core.errors import ConfigError, DomainError, NumericError
from .drive import NORM_TOLERANCE, DriveField, InternalState

logger = logging.getLogger(__name__)


def check_fields(fields: Sequence[DriveField], ids: Sequence[int]) -> None:
    """
    Raises:
        ConfigError: If a field names a state outside ids, two fields on one pair
            overlap in time, or one state carries conflicting detunings
    """
    known = set(ids)
    by_pair: Dict[Tuple[int, int], List[DriveField]] = {}
    detunings: Dict[int, float] = {}
    for drive in fields:
        if not set(drive.pair) <= known:
            raise ConfigError(f"field {drive.pair} addresses states outside {tuple(ids)}")
        key = tuple(sorted(drive.pair))
        for other in by_pair.get(key, []):
            for on, off in drive.windows:
                for other_on, other_off in other.windows:
                    if on < other_off and other_on < off:
                        raise ConfigError(f"conflicting overlapping fields on pair {key}")
        by_pair.setdefault(key, []).append(drive)
        j = drive.pair[1]
        if drive.detuning != 0:
            if j in detunings and detunings[j] != drive.detuning:
                raise ConfigError(f"state {j} is given two different detunings")
            detunings[j] = drive.detuning


def hamiltonian(fields: Sequence[DriveField], ids: Sequence[int], t: float) -> np.ndarray:
    """
    Rotating-frame Hamiltonian at time t

    Couplings follow the field windows; detuning terms define the frame and
    act at all times.
    """
    index = {state_id: k for k, state_id in enumerate(ids)}
    H = np.zeros((len(ids), len(ids)), dtype=complex)
    for drive in fields:
        i, j = index[drive.pair[0]], index[drive.pair[1]]
        if drive.detuning != 0:
            H[j, j] = -drive.detuning
        if drive.is_on(t):
            coupling = 0.5 * drive.rabi_frequency * np.exp(1j * drive.phase)
            H[i, j] += coupling
            H[j, i] += np.conj(coupling)
    return H


@dataclass(frozen=True)
class Evolution:
    """
    Sampled internal-state trajectory

    Attributes:
        ids (Tuple[int, ...]): State ids of the amplitude columns
        times (np.ndarray): Sample times in s
        amplitudes (np.ndarray): (n_samples, n_states) complex amplitudes
    """

    ids: Tuple[int, ...]
    times: np.ndarray
    amplitudes: np.ndarray

    @property
    def final(self) -> InternalState:
        return InternalState(self.ids, self.amplitudes[-1])

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def evolve(state: InternalState, fields: Sequence[DriveField], t_end: float,
           dt: Optional[float] = None, t_start: float = 0.0) -> Evolution:
    """
    Propagate a state from t_start to t_end

    Args:
        state: Initial internal state
        fields: Drive fields, all within the state's ids
        t_end: Final time in s
        dt: Sampling interval in s; None samples only the start and end
        t_start: Initial time in s

    Returns:
        Evolution sampled at t_start, every dt, and t_end

    Raises:
        ConfigError: If the fields conflict (see check_fields)
        NumericError: If the norm drifts from 1 by more than 1e-10
    """
    if t_end < t_start:
        raise DomainError("t_end must not precede t_start")
    if dt is not None and dt <= 0:
        raise DomainError("dt must be positive")
    check_fields(fields, state.ids)

    samples = [t_start, t_end] if dt is None else list(np.arange(t_start, t_end, dt)) + [t_end]
    samples = sorted(set(samples))
    edges = {t for drive in fields for t in drive.edges() if t_start < t < t_end}
    cuts = sorted(edges | set(samples))
    sample_set = set(samples)

    psi = state.amplitudes.copy()
    recorded = [psi.copy()]
    for left, right in zip(cuts, cuts[1:]):
        H = hamiltonian(fields, state.ids, 0.5 * (left + right))
        psi = expm(-1j * H * (right - left)) @ psi
        if right in sample_set:
            recorded.append(psi.copy())
    amplitudes = np.array(recorded)
    drift = float(np.abs(np.linalg.norm(amplitudes, axis=1) - 1).max())
    if drift > NORM_TOLERANCE:
        raise NumericError("internal-state norm drifted during evolution", residual=drift)
    return Evolution(state.ids, np.array(samples), amplitudes)


def propagator(fields: Sequence[DriveField], ids: Sequence[int], t_end: float,
               t_start: float = 0.0) -> np.ndarray:
    """Full unitary from t_start to t_end, built from the same pieces as evolve"""
    check_fields(fields, ids)
    edges = {t for drive in fields for t in drive.edges() if t_start < t < t_end}
    cuts = sorted(edges | {t_start, t_end})
    U = np.eye(len(ids), dtype=complex)
    for left, right in zip(cuts, cuts[1:]):
        H = hamiltonian(fields, ids, 0.5 * (left + right))
        U = expm(-1j * H * (right - left)) @ U
    return U
