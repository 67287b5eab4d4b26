"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MrpcError(Exception):
    """Base class for every error raised by the package."""


class MrpSyntaxError(MrpcError):
    """Malformed surface syntax; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotAnMrp(MrpcError):
    """Formula is well formed but lies outside the modal reduction principle fragment."""


class SignatureError(MrpcError):
    pass


class InvalidChain(MrpcError):
    pass


class NotInductiveInput(MrpcError):
    pass


class ShapeMismatch(MrpcError):
    pass


class SortMismatch(MrpcError):
    pass


class NotLiftable(MrpcError):
    pass


class UnknownSymbol(MrpcError):
    pass


class DimensionMismatch(MrpcError):
    pass


class TooLarge(MrpcError):
    pass


class NotALattice(MrpcError):
    pass


class NotDistributive(MrpcError):
    pass


class UnknownName(MrpcError):
    pass


class NotICompatible(MrpcError):
    pass


class FrameFormatError(MrpcError):
    pass


class RegressionDrift(MrpcError):
    pass
