"""
Protocol Module

This module contains the readout and preparation protocols built on
state-dependent heating: the molecule register, subspace queries, the
thermometer, measurement in fast and full modes, binary search, heralded
preparation and spectroscopy scans.
"""

from .register import MoleculeRegister
from .query import SubspaceQuery, drive_plan_problems, mixing_graph_connected, validate_drive_plan
from .thermometer import MeasurementRecord, Outcome, Thermometer
from .measurement import DynamicsReadout, ensemble_measure, measure_subspace
from .search import SearchResult, binary_search_state, step_budget
from .preparation import PreparationResult, bridge_state, prepare_state, swap
from .spectroscopy import ScanPulse, ScanResult, spectroscopy_scan, transfer_probability
from .runlog import LOG_KEYS, write_run_log

__all__ = [
    'MoleculeRegister',
    'SubspaceQuery',
    'drive_plan_problems',
    'mixing_graph_connected',
    'validate_drive_plan',
    'MeasurementRecord',
    'Outcome',
    'Thermometer',
    'DynamicsReadout',
    'ensemble_measure',
    'measure_subspace',
    'SearchResult',
    'binary_search_state',
    'step_budget',
    'PreparationResult',
    'bridge_state',
    'prepare_state',
    'swap',
    'ScanPulse',
    'ScanResult',
    'spectroscopy_scan',
    'transfer_probability',
    'LOG_KEYS',
    'write_run_log',
]
