"""
Pulses Module

This module contains the internal-state dynamics under spatially uniform
microwave and Raman drives: drive fields, exact piecewise propagation,
dithered pi-pulse schedules and the enantiomer-selective drive loop.
"""

from .drive import (DriveField, DriveKind, InternalState, pi_pulse_schedule, rabi_from_voltage,
                    schedule_to_fields)
from .evolution import Evolution, check_fields, evolve, hamiltonian, propagator
from .chiral import (ChiralResult, Enantiomer, chiral_transfer, cyclic_duration, loop_phase,
                     optimize_chiral_contrast)
from .program import field_from_dict, field_to_dict, load_pulse_program, write_pulse_program

__all__ = [
    'DriveField',
    'DriveKind',
    'InternalState',
    'pi_pulse_schedule',
    'rabi_from_voltage',
    'schedule_to_fields',
    'Evolution',
    'check_fields',
    'evolve',
    'hamiltonian',
    'propagator',
    'ChiralResult',
    'Enantiomer',
    'chiral_transfer',
    'cyclic_duration',
    'loop_phase',
    'optimize_chiral_contrast',
    'field_from_dict',
    'field_to_dict',
    'load_pulse_program',
    'write_pulse_program',
]
