"""
Grotrian Module

This module defines the GrotrianDiagram class, a layered level and
transition document exported for external plotting, and its JSON and CSV
readers and writers.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from ..core.errors import ConfigError
from ..core.io import read_csv, read_json, write_csv, write_json
from .layer import DiagramLayer, LevelLayer, Partition, TransitionLayer
from .levels import LevelTable
from .transitions import TransitionCatalog

logger = logging.getLogger(__name__)

LEVELS = "levels"


class GrotrianDiagram:
    """
    Level and transition diagram of one species

    Attributes:
        species (str): Name of the species
        split_freq_GHz (float): Frequency separating the Below and Above partitions
        layers (List[DiagramLayer]): Level layer followed by one layer per partition
    """

    def __init__(self, species: str, split_freq_GHz: float):
        self.species = species
        self.split_freq_GHz = split_freq_GHz
        self.layers: List[DiagramLayer] = []
        self._layers_by_name: Dict[str, DiagramLayer] = {}

    def add_layer(self, layer: DiagramLayer, order: int = 0) -> None:
        """
        Add a layer to this diagram

        Args:
            layer: The layer to add
            order: Export order (lower numbers first)
        """
        layer.order = order
        self.layers.append(layer)
        self._layers_by_name[layer.name] = layer
        self.layers.sort(key=lambda l: l.order)

    def remove_layer(self, layer_name: str) -> bool:
        if layer_name in self._layers_by_name:
            self.layers.remove(self._layers_by_name.pop(layer_name))
            return True
        return False

    def get_layer(self, layer_name: str) -> Optional[DiagramLayer]:
        return self._layers_by_name.get(layer_name)

    @property
    def level_layer(self) -> LevelLayer:
        layer = self.get_layer(LEVELS)
        if not isinstance(layer, LevelLayer):
            raise ConfigError("diagram has no level layer")
        return layer

    def transition_layers(self) -> List[TransitionLayer]:
        return [layer for layer in self.layers
                if isinstance(layer, TransitionLayer) and layer.visible]

    def partition(self, partition: Partition) -> List[Dict[str, Any]]:
        """Transition rows of one partition"""
        rows = []
        for layer in self.transition_layers():
            if partition in (Partition.All, layer.partition):
                rows.extend(layer.rows())
        return rows

    def energy_range(self) -> Tuple[float, float]:
        """(min, max) level energy in GHz"""
        return self.level_layer.min_value(), self.level_layer.max_value()

    def frequency_range(self) -> Tuple[float, float]:
        """(min, max) transition frequency in GHz over visible layers, (0, 0) if none"""
        layers = [layer for layer in self.transition_layers() if len(layer)]
        if not layers:
            return 0.0, 0.0
        return (min(layer.min_value() for layer in layers),
                max(layer.max_value() for layer in layers))

    def is_empty(self) -> bool:
        return all(len(layer) == 0 for layer in self.transition_layers())

    def to_document(self) -> Dict[str, Any]:
        """The structured document: levels plus transitions tagged with their partition"""
        transitions = []
        for layer in self.transition_layers():
            for row in layer.rows():
                row["partition"] = layer.partition.key
                transitions.append(row)
        transitions.sort(key=lambda row: (row["freq_GHz"], row["lo"], row["hi"]))
        return {
            "species": self.species,
            "split_freq_GHz": self.split_freq_GHz,
            "levels": self.level_layer.rows(),
            "transitions": transitions,
        }

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "GrotrianDiagram":
        """
        Rebuild a diagram from a document produced by to_document

        Raises:
            ConfigError: If a required key is missing or a partition is unknown
        """
        try:
            diagram = cls(document["species"], document["split_freq_GHz"])
            levels = LevelLayer(LEVELS)
            for row in document["levels"]:
                levels.add_row({key: row[key] for key in LevelLayer.columns})
            diagram.add_layer(levels, order=0)
            layers = {p: TransitionLayer(p.key, p) for p in (Partition.Below, Partition.Above)}
            for row in document["transitions"]:
                partition = Partition[row["partition"].capitalize()]
                layers[partition].add_row({key: row[key] for key in TransitionLayer.columns})
        except (KeyError, TypeError) as error:
            raise ConfigError(f"malformed Grotrian document: {error}") from error
        for order, layer in enumerate(layers.values(), start=1):
            diagram.add_layer(layer, order=order)
        return diagram

    def __str__(self) -> str:
        counts = ", ".join(f"{layer.name}={len(layer)}" for layer in self.layers)
        return f"GrotrianDiagram({self.species}, {counts})"


def export_grotrian(table: LevelTable, catalog: TransitionCatalog,
                    split_freq: float) -> GrotrianDiagram:
    """
    Build the diagram for a level table and its catalog

    Args:
        table: Solved levels; every state appears in the level layer
        catalog: Allowed transitions
        split_freq: Lines at or above this frequency (Hz) go to the Above partition

    Returns:
        GrotrianDiagram with a level layer and Below/Above transition layers
    """
    diagram = GrotrianDiagram(table.species.name, split_freq / 1e9)
    levels = LevelLayer(LEVELS)
    for state in table:
        levels.add_row({"id": state.id, "J": state.J, "Ka": state.Ka, "Kc": state.Kc,
                        "m": state.m, "energy_GHz": state.energy / 1e9})
    diagram.add_layer(levels, order=0)

    below = TransitionLayer(Partition.Below.key, Partition.Below)
    above = TransitionLayer(Partition.Above.key, Partition.Above)
    for entry in catalog:
        layer = above if entry.frequency >= split_freq else below
        layer.add_row({"lo": entry.lower, "hi": entry.upper, "freq_GHz": entry.frequency / 1e9,
                       "strength": entry.line_strength, "type": entry.type})
    diagram.add_layer(below, order=1)
    diagram.add_layer(above, order=2)
    logger.info("%s", diagram)
    return diagram


def write_grotrian_json(diagram: GrotrianDiagram, path: Union[str, Path],
                        meta: Optional[Mapping[str, Any]] = None) -> Path:
    document = diagram.to_document()
    if meta:
        document["provenance"] = dict(meta)
    return write_json(path, document)


def read_grotrian_json(path: Union[str, Path]) -> GrotrianDiagram:
    return GrotrianDiagram.from_document(read_json(path))


def write_grotrian_csv(diagram: GrotrianDiagram, levels_path: Union[str, Path],
                       transitions_path: Union[str, Path],
                       meta: Optional[Mapping[str, Any]] = None) -> Tuple[Path, Path]:
    """Write the level and transition tables as two CSV files"""
    header = dict(meta or {})
    header.update({"species": diagram.species, "split_freq_GHz": diagram.split_freq_GHz})
    document = diagram.to_document()
    level_rows = [[row[key] for key in LevelLayer.columns] for row in document["levels"]]
    columns = TransitionLayer.columns + ("partition",)
    transition_rows = [[row[key] for key in columns] for row in document["transitions"]]
    return (write_csv(levels_path, LevelLayer.columns, level_rows, header),
            write_csv(transitions_path, columns, transition_rows, header))


def read_grotrian_csv(levels_path: Union[str, Path],
                      transitions_path: Union[str, Path]) -> GrotrianDiagram:
    meta, _, level_rows = read_csv(levels_path)
    _, header, transition_rows = read_csv(transitions_path)
    document = {
        "species": meta["species"],
        "split_freq_GHz": float(meta["split_freq_GHz"]),
        "levels": [{"id": int(r[0]), "J": int(r[1]), "Ka": int(r[2]), "Kc": int(r[3]),
                    "m": int(r[4]), "energy_GHz": float(r[5])} for r in level_rows],
        "transitions": [{"lo": int(r[0]), "hi": int(r[1]), "freq_GHz": float(r[2]),
                         "strength": float(r[3]), "type": r[4], "partition": r[5]}
                        for r in transition_rows],
    }
    return GrotrianDiagram.from_document(document)
