"""Exception hierarchy shared by every module of the package."""


class HadamardStorageError(Exception):
    """Base class for all domain errors raised by this package."""


class IndexOutOfRangeError(HadamardStorageError, IndexError):
    pass


class DimensionMismatchError(HadamardStorageError, ValueError):
    pass


class SingularMatrixError(HadamardStorageError, ValueError):
    pass


class UnsupportedKError(HadamardStorageError, ValueError):
    pass


class NodeUnavailableError(HadamardStorageError, LookupError):
    pass


class InternalRankError(HadamardStorageError, AssertionError):
    """The final repair system came out singular. Indicates a bug, never a data problem."""


class IntolerableError(HadamardStorageError):
    """The failure set is outside what the code can recover."""


class InsufficientAccessError(HadamardStorageError):
    pass


class AlreadyFailedError(HadamardStorageError):
    pass


class UnknownNodeError(HadamardStorageError, KeyError):
    pass


class ChunkFormatError(HadamardStorageError, ValueError):
    """Malformed chunk header or checksum mismatch."""
