"""Hopf-Galois structure classification for degree-pq separable extensions."""

from .arith import PqParams, UniqueStructureRegime, pq_parameters
from .report import ClassificationReport, build_report, render

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "PqParams",
    "UniqueStructureRegime",
    "__version__",
    "build_report",
    "pq_parameters",
    "render",
]
