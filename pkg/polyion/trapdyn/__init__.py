"""
Trap Dynamics Module

This module contains the classical two-ion model: trap and crystal geometry,
normal modes, thermal sampling, flip-driven velocity-Verlet integration and
heating-rate estimation.
"""

from .trap import TrapConfig
from .crystal import (NormalModes, PhaseSpacePoint, equilibrium_positions, hessian, mode_energies,
                      normal_modes, sample_thermal_state)
from .flips import FlipProcess, flip_counts, poisson_times
from .integrator import (DEFAULT_DT, EnsembleTrajectory, LatticeField, check_time_step, integrate,
                         integrate_many, thread_count, trajectory_seeds)
from .heating import (HeatingResult, ImpulseScaling, heating_rate, impulse_scaling,
                      mean_occupation, rate_from_trajectories, telegraph_force_spectrum,
                      telegraph_heating_estimate, temperature_of)

__all__ = [
    'TrapConfig',
    'NormalModes',
    'PhaseSpacePoint',
    'equilibrium_positions',
    'hessian',
    'mode_energies',
    'normal_modes',
    'sample_thermal_state',
    'FlipProcess',
    'flip_counts',
    'poisson_times',
    'DEFAULT_DT',
    'EnsembleTrajectory',
    'LatticeField',
    'check_time_step',
    'integrate',
    'integrate_many',
    'thread_count',
    'trajectory_seeds',
    'HeatingResult',
    'ImpulseScaling',
    'heating_rate',
    'impulse_scaling',
    'mean_occupation',
    'rate_from_trajectories',
    'telegraph_force_spectrum',
    'telegraph_heating_estimate',
    'temperature_of',
]
