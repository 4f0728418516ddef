"""Exception types raised by the conic bundle toolkit."""

from typing import Iterable, Optional, Sequence


class ConicBundleError(Exception):
    """Base class for every error raised by the package.

    Parameters
    ----------
    message : str
        Human readable description.
    module : str, optional
        Short name of the raising module, used to prefix the message.
    """

    def __init__(self, message: str, module: Optional[str] = None):
        self.module = module
        self.detail = message
        super().__init__(f"[{module}] {message}" if module else message)


class InvalidInput(ConicBundleError, ValueError):
    """An argument does not satisfy the precondition of an operation."""


class PoleAtSample(InvalidInput):
    """A rational function was evaluated at one of its poles."""


class InvalidSpec(ConicBundleError, ValueError):
    """A conic bundle specification cannot be realized.

    ``clauses`` lists every failing rule, not only the first one.
    """

    def __init__(
        self,
        message: str,
        clauses: Iterable[str] = (),
        module: Optional[str] = None,
    ):
        self.clauses = tuple(clauses)
        super().__init__(message, module=module)


class SchemaError(InvalidSpec):
    """A spec document is malformed.

    Each issue is a ``(location, message)`` pair, the location being a
    JSON path such as ``$.g.abstract[1].zeros``.
    """

    def __init__(self, issues: Sequence[tuple[str, str]]):
        self.issues = tuple(issues)
        lines = [f"{loc}: {msg}" for loc, msg in self.issues]
        super().__init__(
            f"{len(lines)} schema error(s):\n  " + "\n  ".join(lines),
            clauses=lines,
            module="io",
        )


class OracleInconclusive(ConicBundleError, RuntimeError):
    """Floating point sampling could not decide a sign."""


class OracleDisagreement(ConicBundleError, RuntimeError):
    """The numeric oracle kept disagreeing with the exact computation."""
