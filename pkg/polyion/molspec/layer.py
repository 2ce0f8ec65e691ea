"""
Layer Module

This module defines the layers a GrotrianDiagram is stacked from. A level
layer holds the rotational states; a transition layer holds the lines of
one frequency partition.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np


class Partition(Enum):
    """Frequency partition a transition layer belongs to"""
    Below = 0
    Above = 1
    All = 2

    @property
    def key(self) -> str:
        return self.name.lower()


class DiagramLayer:
    """
    Base layer of a Grotrian diagram

    Attributes:
        name (str): A unique name for this layer
        partition (Partition): Frequency partition covered by this layer
        order (int): Position of the layer in its parent diagram
        visible (bool): Whether the layer is included in exports
    """

    def __init__(self, name: str, partition: Partition = Partition.All):
        self.name = name
        self.partition = partition
        self.order = 0
        self.visible = True
        self._rows: List[Dict[str, Any]] = []

    def add_row(self, row: Dict[str, Any]) -> None:
        self._rows.append(dict(row))

    def rows(self) -> List[Dict[str, Any]]:
        return [dict(row) for row in self._rows]

    def __len__(self) -> int:
        return len(self._rows)

    def _values(self, key: str) -> np.ndarray:
        return np.array([row[key] for row in self._rows], dtype=float)

    def min_value(self) -> float:
        """
        Smallest energy or frequency in this layer, in GHz

        Returns:
            The minimum, or 0 if the layer is empty
        """
        return 0.0

    def max_value(self) -> float:
        return 0.0

    def __str__(self) -> str:
        return f"{type(self).__name__}({self.name}, {len(self)} rows)"


class LevelLayer(DiagramLayer):
    """Rotational states keyed by id, with energies in GHz"""

    columns = ("id", "J", "Ka", "Kc", "m", "energy_GHz")

    def min_value(self) -> float:
        return float(self._values("energy_GHz").min()) if self._rows else 0.0

    def max_value(self) -> float:
        return float(self._values("energy_GHz").max()) if self._rows else 0.0


class TransitionLayer(DiagramLayer):
    """Transitions of one partition, with frequencies in GHz"""

    columns = ("lo", "hi", "freq_GHz", "strength", "type")

    def min_value(self) -> float:
        return float(self._values("freq_GHz").min()) if self._rows else 0.0

    def max_value(self) -> float:
        return float(self._values("freq_GHz").max()) if self._rows else 0.0

    def strongest(self) -> Optional[Dict[str, Any]]:
        if not self._rows:
            return None
        return dict(max(self._rows, key=lambda row: row["strength"]))
