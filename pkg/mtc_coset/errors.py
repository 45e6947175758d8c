"""Exception hierarchy for mtc-coset.

Every error raised by the library derives from :class:`MtcCosetError`, which is
itself a ``ValueError`` so callers that already guard numeric input with
``except ValueError`` keep working.
"""

from __future__ import annotations


class MtcCosetError(ValueError):
    """Base class for all library errors."""


class ConfigError(MtcCosetError):
    """Malformed configuration value (environment or config.env)."""


class StructuralError(MtcCosetError):
    """Shape, label or dimension mismatch in the input data."""


class NotModularDataError(MtcCosetError):
    """Input cannot be modular data (non-integral Verlinde, s^2 not a permutation, ...)."""


class AlgebraError(MtcCosetError):
    """Algebra object invariant violated."""


class ModuleCategoryError(MtcCosetError):
    """Module category decomposition not found or inconsistent."""


class InconsistentSystemError(MtcCosetError):
    """Coset system data contradicts itself."""


class PreconditionError(MtcCosetError):
    """Operation called outside the setting it is defined for."""


class SpectralError(MtcCosetError):
    """Joint diagonalization or eigenvector labeling failed."""


class FileFormatError(MtcCosetError):
    """Input file could not be parsed into the expected schema."""


class SearchLimitError(MtcCosetError):
    """Branching search exceeded one of its configured limits."""
