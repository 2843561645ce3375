"""
Exception Hierarchy
Every error raised by the lab derives from GepnetLabError and from the
builtin it specializes.
"""

from typing import Optional


class GepnetLabError(Exception):
    """Base class for all lab errors"""


class NotPositiveDefinite(GepnetLabError, ArithmeticError):
    """Symmetric factorization hit a non-positive pivot"""

    def __init__(self, pivot: int, message: Optional[str] = None):
        self.pivot = pivot
        super().__init__(message or f"Matrix is not positive definite (pivot {pivot} failed)")


class NumericalDomain(GepnetLabError, ArithmeticError):
    """A numerical routine left its valid domain"""


class InvalidCorrelation(GepnetLabError, ValueError):
    """Correlation coefficient outside [0, 1)"""


class InvalidLength(GepnetLabError, ValueError):
    """Sequence length incompatible with the requested mapping"""


class InvalidPilots(GepnetLabError, ValueError):
    """Pilot matrix cannot support channel estimation"""


class SizeTooLarge(GepnetLabError, ValueError):
    """Exhaustive enumeration beyond the configured cap"""


class DimensionMismatch(GepnetLabError, ValueError):
    """Inconsistent code, modem and antenna dimensions"""


class UnknownAlgorithm(GepnetLabError, ValueError):
    """Name does not match any registered algorithm"""


class ConfigError(GepnetLabError, ValueError):
    """Experiment configuration could not be parsed or validated"""


class MissingArchiveError(GepnetLabError, FileNotFoundError):
    """A weight archive referenced by the configuration does not exist"""


class ArchiveError(GepnetLabError, ValueError):
    """Base class for archive decoding failures"""


class ArchiveVersionError(ArchiveError):
    """Unknown magic bytes or format version"""


class ArchiveChecksumError(ArchiveError):
    """Stored checksum does not match the file contents"""


class ArchiveShapeError(ArchiveError):
    """A stored tensor does not have the expected shape"""

    def __init__(self, tensor: str, expected, found):
        self.tensor = tensor
        self.expected = tuple(expected)
        self.found = tuple(found)
        super().__init__(f"Tensor '{tensor}' has shape {self.found}, expected {self.expected}")


class TrainingDivergedError(GepnetLabError, ArithmeticError):
    """Loss became non-finite during training"""

    def __init__(self, message: str, snapshot_path: Optional[str] = None):
        self.snapshot_path = snapshot_path
        super().__init__(message if snapshot_path is None else f"{message} (snapshot: {snapshot_path})")
