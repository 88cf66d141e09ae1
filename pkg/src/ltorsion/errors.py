"""Exception hierarchy shared by the library and the command line."""


class LTorsionError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class InvalidInputError(LTorsionError, ValueError):
    pass


class SingularCurveError(InvalidInputError):
    pass


class ResourceLimitError(LTorsionError):
    exit_code = 2


class DependencyMissingError(LTorsionError):
    pass


class CacheCorruptionError(LTorsionError):
    def __init__(self, path, lineno, line):
        super().__init__(f"{path}:{lineno}: corrupt cache record {line!r}")
        self.path = path
        self.lineno = lineno
        self.line = line


class VerificationFailure(LTorsionError):
    exit_code = 3
