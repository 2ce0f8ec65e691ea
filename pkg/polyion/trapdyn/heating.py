"""
Heating Module

Thermometry and heating-rate estimation from simulated trajectories, plus
the linear-response estimate of telegraph-force heating used to cross-check
the simulation.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from ..core.errors import DomainError
from ..core.io import config_hash
from ..core.units import hbar, k_B
from .crystal import NormalModes, normal_modes
from .flips import FlipProcess
from .integrator import DEFAULT_DT, EnsembleTrajectory, LatticeField, integrate_many
from .trap import TrapConfig

logger = logging.getLogger(__name__)

MIN_WINDOW_PERIODS = 5


def temperature_of(trajectory: EnsembleTrajectory, window: float) -> float:
    """
    Temperature from the secular energy averaged over the final window

    T = <E_secular> / (6 k_B); the lattice energy is excluded, as when the
    temperature is read with the lattice lowered.

    Raises:
        DomainError: If the window exceeds the trajectory or spans fewer than
            five periods of the slowest mode
    """
    duration = trajectory.times[-1] - trajectory.times[0]
    if window <= 0 or window > duration * (1 + 1e-12):
        raise DomainError(f"window {window:.3g} s outside (0, {duration:.3g}] s")
    shortest = MIN_WINDOW_PERIODS * trajectory.slowest_period
    if window < shortest:
        raise DomainError(f"window {window:.3g} s spans fewer than {MIN_WINDOW_PERIODS} "
                          f"motional periods ({shortest:.3g} s)")
    mask = trajectory.times >= trajectory.times[-1] - window * (1 + 1e-12)
    return float(np.mean(trajectory.secular_energies[mask]) / (6 * k_B))


def mean_occupation(T: float, omega: float) -> float:
    """Classical occupation number k_B T / (hbar omega) of a mode"""
    if omega <= 0:
        raise DomainError("mode frequency must be positive")
    return k_B * T / (hbar * omega)


def binned_temperatures(trajectories: Sequence[EnsembleTrajectory], start: float,
                        window: float):
    """
    Window-averaged temperatures of every trajectory

    Returns:
        (centers, temperatures) with temperatures of shape (n_traj, n_bins)
    """
    times = trajectories[0].times
    edges = np.arange(start, times[-1] + window * 1e-9, window)
    if len(edges) < 3:
        raise DomainError("too few temperature windows; lengthen t_end or shorten window")
    index = np.digitize(times, edges) - 1
    valid = (index >= 0) & (index < len(edges) - 1)
    bins = len(edges) - 1
    temps = np.vstack([traj.temperatures for traj in trajectories])
    binned = np.empty((len(trajectories), bins))
    for b in range(bins):
        binned[:, b] = temps[:, valid & (index == b)].mean(axis=1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, binned


@dataclass(frozen=True)
class HeatingResult:
    """
    Heating rate of a trajectory ensemble

    Attributes:
        rate (float): Slope of ensemble-mean temperature vs time in K/s
        stderr (float): Standard error of the rate from the per-trajectory slopes
        n_traj (int): Number of trajectories
        r_squared (float): Coefficient of determination of the ensemble-mean fit
        params_hash (str): Digest of the simulation parameters
        seed (Optional[int]): Master seed
        times (np.ndarray): Window centers in s
        mean_temperature (np.ndarray): Ensemble-mean window temperatures in K
    """

    rate: float
    stderr: float
    n_traj: int
    r_squared: float
    params_hash: str
    seed: Optional[int]
    times: np.ndarray
    mean_temperature: np.ndarray

    def summary(self) -> Dict[str, Any]:
        return {"rate_K_per_s": self.rate, "stderr": self.stderr, "n_traj": self.n_traj,
                "params_hash": self.params_hash, "seed": self.seed}


def heating_parameters(trap: TrapConfig, lattice: Optional[LatticeField],
                       flips: Optional[FlipProcess], **extra) -> Dict[str, Any]:
    params = {"trap": asdict(trap), "flips": asdict(flips) if flips else None, **extra}
    if lattice is not None:
        params["lattice"] = {"direction": list(lattice.direction),
                             "depths": {str(k): p.U0 for k, p in sorted(lattice.potentials.items())},
                             "wavenumber": lattice.wavenumber, "offset": lattice.offset}
    return params


def rate_from_trajectories(trajectories: Sequence[EnsembleTrajectory], settle: float = 0.2,
                           window: Optional[float] = None, params_hash: str = "",
                           seed: Optional[int] = None) -> HeatingResult:
    """Fit the heating rate of an already integrated ensemble"""
    if len(trajectories) < 2:
        raise DomainError("heating rate needs at least two trajectories")
    times = trajectories[0].times
    window = window if window is not None else MIN_WINDOW_PERIODS * trajectories[0].slowest_period
    centers, binned = binned_temperatures(trajectories, times[-1] * settle, window)
    mean = binned.mean(axis=0)
    fit = stats.linregress(centers, mean)
    slopes = np.array([stats.linregress(centers, row).slope for row in binned])
    stderr = float(np.std(slopes, ddof=1) / np.sqrt(len(slopes)))
    return HeatingResult(rate=float(fit.slope), stderr=stderr, n_traj=len(trajectories),
                         r_squared=float(fit.rvalue ** 2), params_hash=params_hash, seed=seed,
                         times=centers, mean_temperature=mean)


def heating_rate(trap: TrapConfig, lattice: LatticeField, flips: FlipProcess, n_traj: int,
                 t_end: float, seed: Optional[int], dt: float = DEFAULT_DT,
                 temperature: float = 20e-6, initial_label: Optional[int] = None,
                 settle: float = 0.2, window: Optional[float] = None,
                 record_every: int = 10) -> HeatingResult:
    """
    Monte Carlo heating rate of the crystal

    Args:
        trap: Trap configuration
        lattice: State-dependent lattice
        flips: Flip process driving the molecule's label
        n_traj: Number of trajectories (>= 2)
        t_end: Duration of each trajectory in s
        seed: Master seed; trajectory seeds are spawned from it
        dt: Time step in s
        temperature: Initial temperature in K
        initial_label: Starting label, by default the first flip label
        settle: Leading fraction of the run excluded from the fit
        window: Averaging window in s, by default five slowest periods

    Returns:
        HeatingResult with the least-squares slope and its standard error
    """
    if n_traj < 2:
        raise DomainError("heating rate needs n_traj >= 2")
    if not 0 <= settle < 1:
        raise DomainError("settle must lie in [0, 1)")
    label = flips.labels[0] if initial_label is None else initial_label
    trajectories = integrate_many(trap, lattice, flips, t_end, dt, n_traj, temperature, seed,
                                  label, record_every)
    digest = config_hash(heating_parameters(trap, lattice, flips, t_end=t_end, dt=dt,
                                            temperature=temperature, label=label,
                                            settle=settle, n_traj=n_traj))
    result = rate_from_trajectories(trajectories, settle, window, digest, seed)
    logger.info("heating rate %.4g +- %.2g K/s over %d trajectories", result.rate, result.stderr,
                n_traj)
    return result


def telegraph_force_spectrum(values: Sequence[float], rate: float, omega: np.ndarray) -> np.ndarray:
    """
    Two-sided spectral density of a force jumping uniformly among values

    With k values and total jump rate Gamma the centered force decays as
    exp(-lambda |tau|), lambda = Gamma k / (k - 1), giving
    S(omega) = var(F) 2 lambda / (lambda^2 + omega^2).
    """
    values = np.asarray(values, dtype=float)
    k = len(values)
    decay = rate * k / (k - 1)
    variance = values.var()
    if decay == 0:
        return np.zeros_like(omega)
    return variance * 2 * decay / (decay ** 2 + omega ** 2)


def telegraph_heating_estimate(trap: TrapConfig, lattice: LatticeField, flips: FlipProcess,
                               modes: Optional[NormalModes] = None) -> float:
    """
    Linear-response heating rate in K/s

    The lattice force at the molecule's equilibrium switches among the flip
    labels as a random telegraph; each normal mode absorbs
    P_j S(omega_j) / (2 m_molecule), P_j being the molecule's projection of
    mode j on the lattice axis.
    """
    modes = modes if modes is not None else normal_modes(trap)
    forces = [lattice.depth(label) * lattice.wavenumber * np.sin(-lattice.wavenumber * lattice.offset)
              for label in flips.labels]
    spectrum = telegraph_force_spectrum(forces, flips.rate, modes.frequencies)
    power = np.sum(modes.molecule_participation(lattice.axis) * spectrum) / (2 * trap.molecule_mass)
    return float(power / (6 * k_B))


@dataclass(frozen=True)
class ImpulseScaling:
    """
    Growth of the lattice impulse spread with the number of flips

    Attributes:
        flips (np.ndarray): Mean cumulative flip count at each sample
        variance (np.ndarray): Variance of the accumulated impulse across trajectories
        slope (float): Fitted variance per flip in (N s)^2
        r_squared (float): Coefficient of determination of the linear fit
    """

    flips: np.ndarray
    variance: np.ndarray
    slope: float
    r_squared: float


def impulse_scaling(trajectories: Sequence[EnsembleTrajectory]) -> ImpulseScaling:
    """Variance of accumulated lattice impulse against mean flip count"""
    if len(trajectories) < 2:
        raise DomainError("impulse scaling needs at least two trajectories")
    counts = np.vstack([traj.flip_counts for traj in trajectories]).mean(axis=0)
    impulses = np.vstack([traj.impulse for traj in trajectories])
    variance = impulses.var(axis=0, ddof=1)
    fit = stats.linregress(counts, variance)
    return ImpulseScaling(counts, variance, float(fit.slope), float(fit.rvalue ** 2))
