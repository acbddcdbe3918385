"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`F1EVError`,
which is itself a ``ValueError`` so callers that only care about "bad input"
can catch that.
"""

from __future__ import annotations

from collections.abc import Iterable


class F1EVError(ValueError):
    pass


class InvalidInput(F1EVError):
    pass


class InvalidParameter(F1EVError):
    pass


class EmptySet(F1EVError):
    pass


class SingleClass(F1EVError):
    """Raised when a metric needs both normal and anomalous samples."""


class DegenerateScores(F1EVError):
    """Raised when all scores are equal and the threshold range has zero width."""


class InsufficientNormals(F1EVError):
    pass


class InsufficientData(F1EVError):
    pass


class UndefinedCorrelation(F1EVError):
    pass


class ParseError(F1EVError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class JoinError(F1EVError):
    def __init__(self, missing: Iterable[str]):
        self.missing = sorted(missing)
        shown = ", ".join(self.missing[:10])
        more = f" (+{len(self.missing) - 10} more)" if len(self.missing) > 10 else ""
        super().__init__(f"no score for {len(self.missing)} ground-truth clip(s): {shown}{more}")
