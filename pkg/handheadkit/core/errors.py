"""Exception hierarchy for handheadkit."""

from typing import Optional


class HandHeadError(Exception):
    """Base class for all handheadkit errors."""

    pass


class DegenerateDirection(HandHeadError, ValueError):
    """Raised when a direction vector is too short to normalise."""

    pass


class FormatError(HandHeadError, ValueError):
    """Raised when a recording file is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        """
        Initialize format error.

        Args:
            message: Description of the problem
            line: 1-based line number in the offending file
        """
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class SchemaError(HandHeadError, ValueError):
    """Raised when a recording uses an unknown schema (e.g. coords tag)."""

    pass


class UnknownFamily(HandHeadError, ValueError):
    """Raised when a synthetic motion family is not registered."""

    pass


class ShapeMismatch(HandHeadError, ValueError):
    """Raised when a tensor has an unexpected shape."""

    pass


class OutOfRange(HandHeadError, ValueError):
    """Raised when a diffusion time step is outside the schedule."""

    pass


class BadConfig(HandHeadError, ValueError):
    """Raised when a configuration value is invalid."""

    pass


class EmptyDataset(HandHeadError, ValueError):
    """Raised when training is started without samples."""

    pass


class CorruptCheckpoint(HandHeadError):
    """Raised when checkpoint files do not match their manifest."""

    pass


class VersionMismatch(HandHeadError):
    """Raised when a checkpoint was written by an unsupported format version."""

    pass


class LengthMismatch(HandHeadError, ValueError):
    """Raised when prediction and ground truth lengths differ."""

    pass


class EmptyInput(HandHeadError, ValueError):
    """Raised when a summary statistic is requested for no values."""

    pass


class TooFewPairs(HandHeadError, ValueError):
    """Raised when a paired test has too few non-zero differences."""

    pass


class TooFew(HandHeadError, ValueError):
    """Raised when clustering gets fewer points than the minimum cluster size."""

    pass


class NeedTwoClusters(HandHeadError, ValueError):
    """Raised when a cluster quality index needs at least two clusters."""

    pass


class UnknownCluster(HandHeadError, KeyError):
    """Raised when a cluster id has no members."""

    pass


class SingleClass(HandHeadError, ValueError):
    """Raised when a probe is fitted on a single class."""

    pass


class UnknownClass(HandHeadError, KeyError):
    """Raised when a label is not part of the probe's class set."""

    pass
