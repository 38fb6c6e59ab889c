"""Dirichlet Laplace spectra on finite subsets of Z^n and the universal
gap inequalities they satisfy."""

__version__ = "0.1.0"

from .eigensolver import Spectrum, box_spectrum_oracle, full_spectrum, spectral_checks
from .inequalities import InequalityRecord, full_report
from .operator import DirichletOperator, LatticeFunction, assemble
from .region import (
    Region,
    ball_region,
    boundary,
    box_region,
    is_connected,
    new_region,
    path_region,
    random_connected_region,
    read_region,
    write_region,
)

__all__ = [
    "DirichletOperator",
    "InequalityRecord",
    "LatticeFunction",
    "Region",
    "Spectrum",
    "assemble",
    "ball_region",
    "boundary",
    "box_region",
    "box_spectrum_oracle",
    "full_report",
    "full_spectrum",
    "is_connected",
    "new_region",
    "path_region",
    "random_connected_region",
    "read_region",
    "spectral_checks",
    "write_region",
]
