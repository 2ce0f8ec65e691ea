"""
Program Module

Pulse programs: JSON lists of drive fields in lab-friendly units,
[{pair, rabi_MHz, detuning_MHz, phase_rad, windows_us, kind}, ...].
Frequencies are cyclic (Omega / 2 pi).
"""

from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from ..core.errors import ConfigError
from ..core.io import read_json, write_json
from .drive import DriveField, DriveKind

KEYS = ("pair", "rabi_MHz", "detuning_MHz", "phase_rad", "windows_us", "kind")


def field_to_dict(drive: DriveField) -> Dict[str, Any]:
    return {
        "pair": list(drive.pair),
        "rabi_MHz": drive.rabi_frequency / (2 * np.pi * 1e6),
        "detuning_MHz": drive.detuning / (2 * np.pi * 1e6),
        "phase_rad": drive.phase,
        "windows_us": [[on * 1e6, off * 1e6] for on, off in drive.windows],
        "kind": drive.kind.value,
    }


def field_from_dict(entry: Dict[str, Any]) -> DriveField:
    unknown = set(entry) - set(KEYS)
    if unknown:
        raise ConfigError(f"unknown pulse-program keys {sorted(unknown)}")
    try:
        pair = tuple(int(i) for i in entry["pair"])
        kind = DriveKind(entry.get("kind", DriveKind.Microwave.value))
        windows = tuple((on * 1e-6, off * 1e-6) for on, off in entry["windows_us"])
        return DriveField(pair, 2 * np.pi * 1e6 * entry["rabi_MHz"],
                          2 * np.pi * 1e6 * entry.get("detuning_MHz", 0.0),
                          entry.get("phase_rad", 0.0), windows, kind)
    except (KeyError, TypeError, ValueError) as error:
        raise ConfigError(f"malformed pulse-program entry {entry}: {error}") from error


def load_pulse_program(path: Union[str, Path]) -> List[DriveField]:
    document = read_json(path)
    if not isinstance(document, list):
        raise ConfigError("a pulse program must be a JSON list")
    return [field_from_dict(entry) for entry in document]


def write_pulse_program(path: Union[str, Path], fields: Sequence[DriveField]) -> Path:
    return write_json(path, [field_to_dict(drive) for drive in fields])
