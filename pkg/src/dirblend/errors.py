"""Exception types shared across the library."""

from __future__ import annotations


class DirblendError(Exception):
    """Base class for every error this library raises on purpose."""


class ValidationError(DirblendError):
    """A value violates one of the data-model invariants."""


class NonFiniteError(ValidationError):
    """A matrix entry is NaN or infinite."""


class NegativeEntryError(ValidationError):
    """A probability entry is below zero."""


class RowSumError(ValidationError):
    """A matrix row's sum deviates from 1 by more than the tolerance."""


class InvalidShapeError(ValidationError):
    """An array has the wrong dimensionality or an empty axis."""


class LengthMismatchError(ValidationError):
    """Paired containers (predictions vs. labels) disagree on sample count."""


class ShapeMismatchError(ValidationError):
    """Member matrices that must share one N x C shape do not."""


class WeightCountMismatchError(ValidationError):
    """Weight vector length differs from the number of members."""


class InvalidAlphaError(ValidationError):
    """Dirichlet concentration parameter is non-positive or non-finite."""


class EmptyMemberSetError(ValidationError):
    """An operation needs at least one ensemble member."""


class EmptyClassError(ValidationError):
    """A class has no samples, so a stratified split cannot include it."""


class DegenerateSplitError(ValidationError):
    """A split would leave some class without any training samples."""


class InfeasibleSpecError(ValidationError):
    """A synthetic-member spec cannot be realized (e.g. confidence <= 1/C)."""


class OutOfRangeError(ValidationError):
    """A class index falls outside [0, C)."""


class FileFormatError(DirblendError):
    """Problem ingesting or interpreting a file; carries path and line."""

    def __init__(self, message: str, path=None, line: int | None = None):
        location = str(path) if path is not None else ""
        if line is not None:
            location += f":{line}"
        super().__init__(f"{location}: {message}" if location else message)
        self.path = str(path) if path is not None else None
        self.line = line


class ParseError(FileFormatError):
    """File contents do not match the expected format."""


class MissingFileError(FileFormatError):
    """A referenced file does not exist."""


class InconsistentShapesError(FileFormatError):
    """Files referenced together disagree on sample or class counts."""


class UnsupportedVersionError(FileFormatError):
    """A structured file declares a format_version this release cannot read."""
