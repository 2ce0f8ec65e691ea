"""
Data Module

Shipped species and trap/lattice configuration files.
"""

from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent
SPECIES_DIR = DATA_DIR / "species"
TRAP_DIR = DATA_DIR / "trap"


def species_path(name: str) -> Path:
    return SPECIES_DIR / f"{name}.json"


def trap_path(name: str) -> Path:
    return TRAP_DIR / f"{name}.json"


__all__ = [
    'DATA_DIR',
    'SPECIES_DIR',
    'TRAP_DIR',
    'species_path',
    'trap_path',
]
