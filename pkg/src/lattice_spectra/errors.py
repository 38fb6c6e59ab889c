"""Exception types raised across the package."""


class LatticeError(Exception):
    """Base class for every error raised by lattice_spectra."""


class DimensionError(LatticeError, ValueError):
    pass


class EmptyRegionError(LatticeError, ValueError):
    pass


class DomainError(LatticeError, ValueError):
    pass


class MembershipError(LatticeError, KeyError):
    pass


class CoordinateOverflowError(LatticeError, OverflowError):
    pass


class ShapeError(LatticeError, ValueError):
    """Two objects that must share a region (or size) do not."""


class RegionFormatError(LatticeError, ValueError):
    pass


class SolverError(LatticeError, RuntimeError):
    """The QL iteration did not converge within its sweep budget."""

    def __init__(self, message: str, *, index: int, iterations: int, offdiag: float):
        super().__init__(message)
        self.index = index
        self.iterations = iterations
        self.offdiag = offdiag


class KRangeError(LatticeError, ValueError):
    pass


class PreconditionError(LatticeError, ValueError):
    pass


class DegenerateWeightsError(LatticeError, ValueError):
    pass


class StuckError(LatticeError, RuntimeError):
    """No size- and connectivity-preserving move found within the retry budget."""
