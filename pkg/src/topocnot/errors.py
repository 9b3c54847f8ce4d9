"""Exception hierarchy shared by every compilation stage."""


class CompileError(Exception):
    """Base class for all errors raised by topocnot."""


class DimensionMismatch(CompileError, ValueError):
    pass


class IndexOutOfRange(CompileError, IndexError):
    pass


class SingularMatrix(CompileError, ValueError):
    pass


class ParseError(CompileError, ValueError):
    pass


class DuplicateEdge(ParseError):
    pass


class SelfLoop(ParseError):
    pass


class UnknownArchitecture(CompileError, LookupError):
    pass


class DisconnectedGraph(CompileError, ValueError):
    pass


class SameVertex(CompileError, ValueError):
    pass


class InvalidDistance(CompileError, ValueError):
    pass


class InvalidPlacement(CompileError, ValueError):
    pass


class TooManyQubits(CompileError, ValueError):
    pass


class InstanceTooLarge(CompileError, ValueError):
    pass


class InvalidPath(CompileError, ValueError):
    pass


class InvalidParams(CompileError, ValueError):
    pass


class VerificationFailed(CompileError, RuntimeError):
    """A compiled circuit disagreed with its source matrix (internal bug guard)."""
