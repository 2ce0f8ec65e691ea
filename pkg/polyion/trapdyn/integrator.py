"""
Integrator Module

Symplectic integration of the two-ion crystal in the trap, Coulomb and
state-dependent lattice potentials, with the molecule's internal label
switched by a FlipProcess. Each step composes three velocity-Verlet
substeps into a fourth-order scheme. Independent trajectories are
advanced together as one batch; every operation is elementwise over the
batch, so a trajectory evolves identically whether it runs alone or with
others.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.errors import AbortedTrajectoryError, ConfigError, DomainError
from ..core.io import write_csv
from ..core.units import k_B
from ..optics.potential import StatePotential, lattice_secular_frequency
from .crystal import NormalModes, PhaseSpacePoint, Seed, normal_modes, sample_thermal_state
from .flips import FlipProcess, flip_counts
from .trap import ATOM, MOLECULE, TrapConfig

logger = logging.getLogger(__name__)

DEFAULT_DT = 2.5e-9
MAX_PHASE_STEP = 0.02
ABORT_ENERGY = 1e6 * k_B
THREADS_ENV = "POLYION_THREADS"

# Velocity-Verlet substeps composed to fourth order (triple jump)
_CUBE_ROOT_2 = 2 ** (1 / 3)
SUBSTEPS = (1 / (2 - _CUBE_ROOT_2), -_CUBE_ROOT_2 / (2 - _CUBE_ROOT_2), 1 / (2 - _CUBE_ROOT_2))


@dataclass(frozen=True)
class LatticeField:
    """
    State-dependent lattice acting on the molecule

    The lattice coordinate is the molecule's displacement from its crystal
    equilibrium projected on the lattice axis, so offset_z0 of the potentials
    sets the lattice phase at the molecule.

    Attributes:
        potentials (Mapping[int, StatePotential]): Potential per internal label
        direction (Tuple[float, float, float]): Unit lattice axis
    """

    potentials: Mapping[int, StatePotential]
    direction: Tuple[float, float, float]

    def __post_init__(self):
        if not self.potentials:
            raise ConfigError("lattice field needs at least one state potential")
        first = next(iter(self.potentials.values()))
        for potential in self.potentials.values():
            if (potential.wavelength != first.wavelength
                    or potential.offset_z0 != first.offset_z0):
                raise ConfigError("all state potentials must share one lattice geometry")

    @property
    def axis(self) -> np.ndarray:
        return np.asarray(self.direction, dtype=float)

    @property
    def wavenumber(self) -> float:
        return next(iter(self.potentials.values())).wavenumber

    @property
    def offset(self) -> float:
        return next(iter(self.potentials.values())).offset_z0

    def depth(self, label: int) -> float:
        try:
            return self.potentials[label].U0
        except KeyError:
            raise ConfigError(f"no lattice potential for internal label {label}") from None


@dataclass
class EnsembleTrajectory:
    """
    Sampled motion of the two-ion crystal

    Attributes:
        times (np.ndarray): Sample times in s, strictly increasing
        positions (np.ndarray): (n, 2, 3) positions in m, atom then molecule
        velocities (np.ndarray): (n, 2, 3) velocities in m/s
        labels (np.ndarray): Internal label of the molecule at each sample
        flip_times (np.ndarray): Times at which the label switched
        energies (np.ndarray): Total energy above the crystal minimum, lattice included, in J
        secular_energies (np.ndarray): Trap + Coulomb + kinetic energy above the minimum, in J
        impulse (np.ndarray): Accumulated lattice impulse on the molecule along the axis, in N*s
        slowest_period (float): Period of the slowest normal mode in s
    """

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    labels: np.ndarray
    flip_times: np.ndarray
    energies: np.ndarray
    secular_energies: np.ndarray
    impulse: np.ndarray
    slowest_period: float

    @property
    def temperatures(self) -> np.ndarray:
        """Instantaneous secular energy / (6 k_B) in K"""
        return self.secular_energies / (6 * k_B)

    @property
    def flip_counts(self) -> np.ndarray:
        return flip_counts(self.flip_times, self.times)

    def rows(self) -> List[List[Any]]:
        rows = []
        for i, t in enumerate(self.times):
            rows.append([t * 1e6, *(self.positions[i].reshape(6) * 1e9), int(self.labels[i]),
                         self.energies[i] / k_B * 1e3])
        return rows

    def write_csv(self, path: Union[str, Path], meta: Optional[Mapping[str, Any]] = None) -> Path:
        header = ("t_us", "x1_nm", "y1_nm", "z1_nm", "x2_nm", "y2_nm", "z2_nm", "label",
                  "E_total_mK")
        return write_csv(path, header, self.rows(), meta)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer") from None


def check_time_step(dt: float, modes: NormalModes, lattice: Optional[LatticeField],
                    molecule_mass: float) -> float:
    """
    Largest angular frequency times dt

    Raises:
        DomainError: If omega_max * dt exceeds 0.02
    """
    if dt <= 0:
        raise DomainError(f"dt must be positive, got {dt}")
    omega = float(modes.frequencies[-1])
    if lattice is not None:
        deepest = max(lattice.potentials.values(), key=lambda p: abs(p.U0))
        if deepest.U0 != 0:
            trapping = StatePotential(deepest.state_id, deepest.alpha_eff, abs(deepest.U0),
                                      deepest.wavelength, deepest.offset_z0)
            omega = math.hypot(omega, lattice_secular_frequency(trapping, molecule_mass))
    phase = omega * dt
    if phase > MAX_PHASE_STEP:
        raise DomainError(f"dt={dt:.3g} s too large: omega_max*dt = {phase:.3g} > {MAX_PHASE_STEP}")
    if phase > 0.975 * MAX_PHASE_STEP:
        logger.warning("dt=%.3g s is close to the stability bound (omega_max*dt = %.4f)", dt, phase)
    return phase


def _run_batch(trap: TrapConfig, lattice: Optional[LatticeField], t_end: float, dt: float,
               initials: Sequence[PhaseSpacePoint], schedules: Sequence[Tuple[np.ndarray, List[int]]],
               initial_labels: Sequence[int], record_every: int,
               modes: NormalModes) -> List[EnsembleTrajectory]:
    batch = len(initials)
    n_steps = int(round(t_end / dt))
    if n_steps < 1:
        raise DomainError(f"t_end={t_end} shorter than one step of {dt}")
    masses = trap.masses[None, :, None]
    origin = modes.equilibrium[MOLECULE]
    e_min = float(trap.potential_energy(modes.equilibrium))

    if lattice is not None:
        axis = lattice.axis
        wavenumber, offset = lattice.wavenumber, lattice.offset
        depth = np.array([lattice.depth(label) for label in initial_labels])
    else:
        axis, wavenumber, offset = np.zeros(3), 0.0, 0.0
        depth = np.zeros(batch)
    labels = np.array(initial_labels, dtype=int)

    events = []
    for index, (times, sequence) in enumerate(schedules):
        for t, label in zip(times, sequence):
            step = int(math.ceil(t / dt - 1e-9))
            if step <= n_steps:
                events.append((step, index, label))
                if lattice is not None:
                    lattice.depth(label)
    events.sort(key=lambda event: event[0])

    positions = np.stack([p.positions for p in initials]).astype(float)
    velocities = np.stack([p.velocities for p in initials]).astype(float)

    def lattice_coordinate(pos):
        s = pos[:, MOLECULE, :] - origin
        return s[:, 0] * axis[0] + s[:, 1] * axis[1] + s[:, 2] * axis[2]

    def compute_forces(pos):
        forces = trap.forces(pos)
        if lattice is None:
            return forces, np.zeros(batch)
        push = depth * wavenumber * np.sin(wavenumber * (lattice_coordinate(pos) - offset))
        forces[:, MOLECULE, :] += push[:, None] * axis
        return forces, push

    def energies(pos, vel):
        kinetic_terms = 0.5 * masses * vel ** 2
        kinetic = sum(kinetic_terms[:, i, j] for i in range(2) for j in range(3))
        secular = kinetic + trap.potential_energy(pos) - e_min
        if lattice is None:
            return secular, secular
        optical = depth * np.cos(wavenumber * (lattice_coordinate(pos) - offset))
        return secular + optical, secular

    record_steps = list(range(0, n_steps + 1, record_every))
    if record_steps[-1] != n_steps:
        record_steps.append(n_steps)
    n_rec = len(record_steps)
    rec_pos = np.empty((n_rec, batch, 2, 3))
    rec_vel = np.empty((n_rec, batch, 2, 3))
    rec_labels = np.empty((n_rec, batch), dtype=int)
    rec_total = np.empty((n_rec, batch))
    rec_secular = np.empty((n_rec, batch))
    rec_impulse = np.empty((n_rec, batch))
    flip_log: List[List[float]] = [[] for _ in range(batch)]

    forces, push = compute_forces(positions)
    impulse = np.zeros(batch)
    cursor, slot = 0, 0
    for n in range(n_steps + 1):
        if cursor < len(events) and events[cursor][0] == n:
            while cursor < len(events) and events[cursor][0] == n:
                _, index, label = events[cursor]
                labels[index] = label
                if lattice is not None:
                    depth[index] = lattice.depth(label)
                flip_log[index].append(n * dt)
                cursor += 1
            forces, push = compute_forces(positions)
        if slot < n_rec and record_steps[slot] == n:
            total, secular = energies(positions, velocities)
            if np.any(secular > ABORT_ENERGY) or not np.all(np.isfinite(total)):
                worst = float(np.nanmax(np.abs(secular)))
                raise AbortedTrajectoryError(
                    f"trajectory energy {worst / k_B:.3g} K exceeds bound at t={n * dt:.4g} s",
                    residual=worst)
            rec_pos[slot] = positions
            rec_vel[slot] = velocities
            rec_labels[slot] = labels
            rec_total[slot] = total
            rec_secular[slot] = secular
            rec_impulse[slot] = impulse
            slot += 1
        if n == n_steps:
            break
        for weight in SUBSTEPS:
            h = weight * dt
            velocities += 0.5 * h * forces / masses
            positions += h * velocities
            new_forces, new_push = compute_forces(positions)
            impulse += 0.5 * h * (push + new_push)
            velocities += 0.5 * h * new_forces / masses
            forces, push = new_forces, new_push

    times = np.array(record_steps) * dt
    return [EnsembleTrajectory(times=times, positions=rec_pos[:, i].copy(),
                               velocities=rec_vel[:, i].copy(), labels=rec_labels[:, i].copy(),
                               flip_times=np.array(flip_log[i]), energies=rec_total[:, i].copy(),
                               secular_energies=rec_secular[:, i].copy(),
                               impulse=rec_impulse[:, i].copy(),
                               slowest_period=modes.slowest_period)
            for i in range(batch)]


def integrate(trap: TrapConfig, lattice: Optional[LatticeField], flips: Optional[FlipProcess],
              t_end: float, dt: float, initial: PhaseSpacePoint, seed: Seed,
              initial_label: int, record_every: int = 10) -> EnsembleTrajectory:
    """
    Integrate one trajectory

    Args:
        trap: Trap configuration
        lattice: State potentials, or None with the lattice off
        flips: Flip process, or None for a fixed internal label
        t_end: Duration in s
        dt: Time step in s, with omega_max * dt <= 0.02
        initial: Initial positions and velocities
        seed: Seed or generator for the flip draws
        initial_label: Internal label at t = 0, before the first flip
        record_every: Steps between recorded samples

    Returns:
        EnsembleTrajectory sampled every record_every steps

    Raises:
        DomainError: If dt violates the stability bound
        AbortedTrajectoryError: If the energy exceeds 1e6 k_B
    """
    modes = normal_modes(trap)
    check_time_step(dt, modes, lattice, trap.molecule_mass)
    rng = np.random.default_rng(seed)
    schedule = flips.draw(initial_label, t_end, rng) if flips else (np.array([]), [])
    return _run_batch(trap, lattice, t_end, dt, [initial], [schedule], [initial_label],
                      record_every, modes)[0]


def trajectory_seeds(seed: Optional[int], n_traj: int) -> List[np.random.SeedSequence]:
    """Independent child seeds, one per trajectory"""
    return np.random.SeedSequence(seed).spawn(n_traj)


def integrate_many(trap: TrapConfig, lattice: Optional[LatticeField],
                   flips: Optional[FlipProcess], t_end: float, dt: float, n_traj: int,
                   temperature: float, seed: Optional[int], initial_label: int,
                   record_every: int = 10,
                   threads: Optional[int] = None) -> List[EnsembleTrajectory]:
    """
    Integrate n_traj independent thermal trajectories

    Trajectory i draws its thermal start and then its flips from a generator
    seeded by the i-th child of SeedSequence(seed), so it is bit-identical to
    integrate() called with that generator.
    """
    if n_traj < 1:
        raise DomainError("n_traj must be >= 1")
    modes = normal_modes(trap)
    check_time_step(dt, modes, lattice, trap.molecule_mass)
    initials, schedules = [], []
    for child in trajectory_seeds(seed, n_traj):
        rng = np.random.default_rng(child)
        initials.append(sample_thermal_state(trap, temperature, rng, modes))
        schedules.append(flips.draw(initial_label, t_end, rng) if flips
                         else (np.array([]), []))
    labels = [initial_label] * n_traj

    workers = min(threads or thread_count(), n_traj)
    chunks = np.array_split(np.arange(n_traj), workers)

    def run(chunk):
        return _run_batch(trap, lattice, t_end, dt, [initials[i] for i in chunk],
                          [schedules[i] for i in chunk], [labels[i] for i in chunk],
                          record_every, modes)

    if workers == 1:
        results = run(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = [traj for part in pool.map(run, chunks) for traj in part]
    logger.info("integrated %d trajectories of %.3g s (label %d)", n_traj, t_end, initial_label)
    return results
