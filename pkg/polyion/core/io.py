"""
IO Module

Artifact writers shared by every subpackage. Each artifact carries a
provenance block {config_hash, seed, version}; CSV files carry it as
'#'-prefixed header lines. Artifacts contain no timestamps, so reruns with
the same configuration and seed are byte-identical.
"""

import csv
import hashlib
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _plain(value: Any) -> Any:
    """Convert numpy scalars, arrays and tuples into JSON-native values"""
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def canonical_json(document: Any) -> str:
    return json.dumps(_plain(document), sort_keys=True, separators=(",", ":"))


def config_hash(config: Any) -> str:
    """Short SHA-256 digest of the canonical JSON form of a configuration"""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()[:16]


def provenance(config: Any, seed: Optional[int]) -> Dict[str, Any]:
    from .. import __version__

    return {"config_hash": config_hash(config), "seed": seed, "version": __version__}


def write_json(path: PathLike, document: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_plain(document), handle, indent=2, sort_keys=True)
        handle.write("\n")
    logger.debug("wrote %s", path)
    return path


def read_json(path: PathLike) -> Any:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def write_jsonl(path: PathLike, records: Iterable[Mapping[str, Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(_plain(record), sort_keys=True))
            handle.write("\n")
    return path


def read_jsonl(path: PathLike) -> List[Dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


def format_csv(header: Sequence[str], rows: Iterable[Sequence[Any]],
               meta: Optional[Mapping[str, Any]] = None) -> str:
    buffer = io.StringIO()
    for key, value in sorted((meta or {}).items()):
        buffer.write(f"# {key}: {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buffer.getvalue()


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]],
              meta: Optional[Mapping[str, Any]] = None) -> Path:
    """
    Write a CSV file preceded by '# key: value' comment lines

    Floats are written with repr so that reading them back is exact.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(format_csv(header, rows, meta))
    logger.debug("wrote %s", path)
    return path


def read_csv(path: PathLike) -> Tuple[Dict[str, str], List[str], List[List[str]]]:
    """
    Read a CSV written by write_csv

    Returns:
        (meta, header, rows) with every cell left as a string
    """
    meta: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        lines = handle.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("# ") and not body:
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    reader = list(csv.reader(body))
    return meta, reader[0], reader[1:]
