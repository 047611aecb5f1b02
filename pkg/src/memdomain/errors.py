"""Exception types shared across the package.

Every error raised on a violated contract derives from MemdomainError so
callers can distinguish library failures from programming mistakes.
"""


class MemdomainError(Exception):
    """Base class for all library errors."""


class DomainError(MemdomainError, ValueError):
    """Argument outside the mathematical domain of a function."""


class UnsupportedBranch(MemdomainError):
    """The growing-frequency solution branch (negative order) was requested.

    Only the decaying branch is implemented; the mirrored branch maps
    n -> -(n+1) and is excluded by design.
    """


class RealityViolation(MemdomainError):
    """Common frequency would be imaginary: the mode is over-damped here."""


class NeverRecordable(MemdomainError):
    """Mode momentum sits below the initial threshold; no recording window."""


class ModeDead(MemdomainError):
    """Queried time is at or past the end of the mode's recording window."""


class StepSizeUnderflow(MemdomainError):
    """Adaptive integrator pushed the step size below the resolvable floor."""


class GridTooCoarse(MemdomainError):
    """Sample grid too coarse (or too short) for finite-difference checks."""


class CutoffTooSmall(MemdomainError):
    """Fock-space truncation cannot hold the requested state accurately."""
