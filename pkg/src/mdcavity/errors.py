"""Exception hierarchy.

Each exception carries a short machine-readable ``category`` that the CLI
reports on failure.
"""

from __future__ import annotations


class CavityError(Exception):
    """Base class for all library errors."""

    category = "error"


class DomainError(CavityError, ValueError):
    """Argument outside the support of an operation."""

    category = "domain"


class PoleError(DomainError):
    """Evaluation at (or numerically on top of) a material resonance."""

    category = "pole"


class BoundaryError(DomainError):
    """Point lies on a zone boundary within the classification tolerance."""

    category = "boundary"


class NoRootError(CavityError):
    """A root that should exist could not be bracketed."""

    category = "no-root"


class SpuriousRootError(CavityError):
    """A root of a squared equation failed the unsquared check."""

    category = "spurious-root"


class TrackingError(CavityError):
    """Continuation along a mode branch lost the branch."""

    category = "tracking"


class ConvergenceError(CavityError):
    """Quadrature or extrapolation did not reach its tolerance."""

    category = "nonconvergence"


class ConfigError(CavityError):
    """Invalid run configuration."""

    category = "config"
