"""Exceptions raised by the engine."""


class TorusAlgError(Exception):
    """Base class."""


class MalformedInput(TorusAlgError, ValueError):
    """Input data does not parse or violates grading consistency."""

    def __init__(self, message: str, locus: str | None = None):
        self.locus = locus
        super().__init__(f"{locus}: {message}" if locus else message)


class NotInA(TorusAlgError):
    """The structure map does not become an isomorphism after inverting Euler classes."""

    def __init__(self, message: str, component=None, degree=None):
        self.component = component
        self.degree = degree
        super().__init__(message)


class NotEffective(TorusAlgError):
    """A construction leaves the finitely describable class of objects."""


class WindowTooSmall(TorusAlgError):
    def __init__(self, message: str, suggested: tuple[int, int] | None = None):
        self.suggested = suggested
        super().__init__(message)
