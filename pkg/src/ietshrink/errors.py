"""Exception types shared across the package."""


class IetError(Exception):
    """Base class for all package errors."""


class MixedFieldError(IetError, TypeError):
    """Two quadratic values live in different fields Q(sqrt D)."""


class OutOfDomainError(IetError, ValueError):
    pass


class CapExceededError(IetError, RuntimeError):
    pass


class NotReturningError(IetError, RuntimeError):
    pass


class NotInGeneralPositionError(IetError, ValueError):
    def __init__(self, message, depth=None):
        super().__init__(message if depth is None else f"{message} (depth {depth})")
        self.depth = depth


class ReducibleError(IetError, ValueError):
    pass


class ZeroColumnError(IetError, ValueError):
    pass


class NotPositiveError(IetError, ValueError):
    pass


class NotALoopError(IetError, ValueError):
    pass


class DegreeTooHighError(IetError, ValueError):
    pass


class OutOfRangeError(IetError, IndexError):
    pass


class PreconditionViolated(IetError, ValueError):
    pass


class TowerNotFoundError(IetError, RuntimeError):
    def __init__(self, message, j=None):
        super().__init__(message)
        self.j = j


class InvalidParams(IetError, ValueError):
    pass
