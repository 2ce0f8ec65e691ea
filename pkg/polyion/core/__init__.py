"""
Core Module

This module contains the pieces shared by every subpackage: the exception
hierarchy, unit conversions and artifact IO. Configuration loaders live in
polyion.core.config and are imported from there.
"""

from .errors import (AbortedTrajectoryError, ConfigError, DomainError, NumericError, PolyionError,
                     ProtocolConfigError, SearchFailure)
from .io import (canonical_json, config_hash, provenance, read_csv, read_json, read_jsonl,
                 write_csv, write_json, write_jsonl)

__all__ = [
    'AbortedTrajectoryError',
    'ConfigError',
    'DomainError',
    'NumericError',
    'PolyionError',
    'ProtocolConfigError',
    'SearchFailure',
    'canonical_json',
    'config_hash',
    'provenance',
    'read_csv',
    'read_json',
    'read_jsonl',
    'write_csv',
    'write_json',
    'write_jsonl',
]
