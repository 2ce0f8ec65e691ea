"""
Run Log Module

JSON-lines log of protocol measurements.
"""

from pathlib import Path
from typing import Iterable, Union

from ..core.io import write_jsonl
from .thermometer import MeasurementRecord

LOG_KEYS = ("run_id", "step", "query_ids", "outcome", "post_state", "t_model_ms")


def write_run_log(path: Union[str, Path], runs: Iterable[tuple]) -> Path:
    """
    Write one line per measurement

    Args:
        path: Output file
        runs: (run_id, records) pairs
    """
    lines = (record.to_log(run_id) for run_id, records in runs for record in records)
    return write_jsonl(path, lines)
