"""Vietoris-Rips persistence over Z2 and 1-Wasserstein distances between diagrams."""

from .diagram import PersistenceDiagram, project_to_diagonal, read_diagram, write_diagram
from .metric_io import DistanceInput, enclosing_radius, load_metric_input, sparsify_by_threshold
from .vr_engine import PersistenceResult, VRConfig, vr_barcode, zero_dim_persistence

__all__ = [
    "DistanceInput",
    "PersistenceDiagram",
    "PersistenceResult",
    "VRConfig",
    "enclosing_radius",
    "load_metric_input",
    "project_to_diagonal",
    "read_diagram",
    "sparsify_by_threshold",
    "vr_barcode",
    "write_diagram",
    "zero_dim_persistence",
]

__version__ = "0.1.0"
