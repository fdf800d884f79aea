"""Exact analysis of down-up Markov chains on branching diagrams."""
from .errors import (
    CapacityError,
    ConfigurationError,
    FormulaInapplicableError,
    LatticeWalkError,
    NotApplicableError,
    SpectrumMismatchError,
    ValidationError,
)
from .lattices import LatticeFamily
from .measures import PBinomial, Pitman, PlancherelLimit, ShiftedPlancherel, UniformLevel, ZMeasure
from .partitions import Partition

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConfigurationError",
    "FormulaInapplicableError",
    "LatticeFamily",
    "LatticeWalkError",
    "NotApplicableError",
    "PBinomial",
    "Partition",
    "Pitman",
    "PlancherelLimit",
    "ShiftedPlancherel",
    "SpectrumMismatchError",
    "UniformLevel",
    "ValidationError",
    "ZMeasure",
]
