"""Back-links from overlay nodes into frontend ASTs.

A :class:`SourceRef` is owned by an overlay node and points *into* the base
tree.  Base nodes never point back.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any


class Frontend(str, enum.Enum):
    SM = "sm"
    JAVA_TYPES = "java-types"
    JAVA_PACKAGES = "java-packages"
    MINIJAVA = "minijava"
    MLITE = "mlite"


@dataclass(frozen=True, order=True)
class Span:
    """1-based source range; ``col_end`` is exclusive."""

    file: str
    line_start: int
    col_start: int
    line_end: int
    col_end: int

    def to_json(self) -> dict[str, Any]:
        return {
            "file": self.file,
            "line_start": self.line_start,
            "col_start": self.col_start,
            "line_end": self.line_end,
            "col_end": self.col_end,
        }

    def __str__(self) -> str:
        return f"{self.file}:{self.line_start}:{self.col_start}"


class SourceRef:
    """Opaque handle on one frontend AST node.

    ``key`` is stable and human readable (state label, qualified type name,
    scope path); ``node`` is the AST node itself.
    """

    __slots__ = ("frontend", "key", "node")

    def __init__(self, frontend: Frontend, key: str, node: Any = None) -> None:
        self.frontend = frontend
        self.key = key
        self.node = node

    @property
    def span(self) -> Span | None:
        return getattr(self.node, "span", None)

    def resolve(self) -> Any:
        return self.node

    def __repr__(self) -> str:
        return f"SourceRef({self.frontend.value}, {self.key!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SourceRef):
            return NotImplemented
        return self.frontend == other.frontend and self.key == other.key and self.node is other.node

    def __hash__(self) -> int:
        return hash((self.frontend, self.key, id(self.node)))
