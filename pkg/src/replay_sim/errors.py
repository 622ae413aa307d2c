"""Exception hierarchy shared by every stage of the pipeline."""


class ReplaySimError(Exception):
    """Base class; the CLI maps any subclass to exit code 1."""


class ParseError(ReplaySimError):
    pass


class ValidationError(ReplaySimError):
    """Raised with a JSON-path-like locator of the offending element."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ModelError(ReplaySimError):
    pass


class Unreachable(ReplaySimError):
    pass


class NoWalkPossible(ReplaySimError):
    pass


class VersionMismatch(ReplaySimError):
    pass


class MutationError(ReplaySimError):
    pass


class ReportIOError(ReplaySimError):
    pass
