"""Exception hierarchy shared by kernels, frontends and the CLI."""

from __future__ import annotations


class AnalysisError(Exception):
    """Base class for everything this package raises on bad input."""


class SourceError(AnalysisError):
    """An error tied to a location in a source file."""

    def __init__(
        self,
        message: str,
        file: str | None = None,
        line: int | None = None,
        col: int | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.file = file
        self.line = line
        self.col = col

    def __str__(self) -> str:
        where = [str(part) for part in (self.file, self.line, self.col) if part is not None]
        if where:
            return f"{':'.join(where)}: {self.message}"
        return self.message


class ParseError(SourceError):
    """Syntax error in a frontend language."""


class ScanError(SourceError):
    """The shallow Java scanner could not make sense of its input."""


class ResolutionError(SourceError):
    """A name in the source does not resolve (state id, superclass, extends target)."""


class StructureError(AnalysisError):
    """Misuse of an overlay structure: unknown ids, detached nodes, cross-tree links."""


class InheritanceCycleError(StructureError):
    def __init__(self, message: str, members: list) -> None:
        super().__init__(message)
        self.members = members


class CorpusError(AnalysisError):
    """Inconsistent Java corpus, e.g. the same qualified type declared twice."""
