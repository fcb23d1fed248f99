"""Core data structures: PLA files, datasets and And-Inverter Graphs."""

from boolearn.models.aig import FALSE, TRUE, Aig, AigMetrics, approximate_to_budget
from boolearn.models.aiger import read_aag, write_aag
from boolearn.models.pla import Cube, Dataset, PlaFile, parse_pla, to_dataset, write_pla

__all__ = [
    "FALSE",
    "TRUE",
    "Aig",
    "AigMetrics",
    "Cube",
    "Dataset",
    "PlaFile",
    "approximate_to_budget",
    "parse_pla",
    "read_aag",
    "to_dataset",
    "write_aag",
    "write_pla",
]
