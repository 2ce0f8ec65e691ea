"""
Molecular Spectroscopy Module

This module contains the rigid asymmetric-top model: Hamiltonian blocks,
eigenstates and labels, direction-cosine matrix elements, selection rules,
thermal populations and the Grotrian export.
"""

from .species import MolecularSpecies
from .hamiltonian import angular_momentum, build_hamiltonian_block
from .levels import LevelTable, RotationalState, j_max_for_cutoff, ka_kc_labels, solve_levels
from .direction_cosines import direction_cosine_block, matrix_element, squared_expectation
from .thermal import (level_populations, rotational_temperature, thermal_candidates,
                      thermal_populations)
from .transitions import (ReachabilityReport, TransitionCatalog, TransitionEntry,
                          allowed_transitions, line_strength, raman_allowed, reachability,
                          transition_type)
from .layer import DiagramLayer, LevelLayer, Partition, TransitionLayer
from .grotrian import (GrotrianDiagram, export_grotrian, read_grotrian_csv,
                       read_grotrian_json, write_grotrian_csv, write_grotrian_json)

__all__ = [
    'MolecularSpecies',
    'angular_momentum',
    'build_hamiltonian_block',
    'LevelTable',
    'RotationalState',
    'j_max_for_cutoff',
    'ka_kc_labels',
    'solve_levels',
    'direction_cosine_block',
    'matrix_element',
    'squared_expectation',
    'level_populations',
    'rotational_temperature',
    'thermal_candidates',
    'thermal_populations',
    'ReachabilityReport',
    'TransitionCatalog',
    'TransitionEntry',
    'allowed_transitions',
    'line_strength',
    'raman_allowed',
    'reachability',
    'transition_type',
    'DiagramLayer',
    'LevelLayer',
    'Partition',
    'TransitionLayer',
    'GrotrianDiagram',
    'export_grotrian',
    'read_grotrian_csv',
    'read_grotrian_json',
    'write_grotrian_csv',
    'write_grotrian_json',
]
