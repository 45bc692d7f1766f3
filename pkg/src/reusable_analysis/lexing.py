"""A small C-family tokenizer shared by all frontends.

Handles ``//`` and ``/* */`` comments, string/char literals (including Java
text blocks), numbers, identifiers and punctuation.  Positions are 1-based.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError
from .sourceref import Span

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\n]+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<open_comment>/\*)
  | (?P<string>\"\"\"(?:.|\n)*?\"\"\"|"(?:\\.|[^"\\\n])*")
  | (?P<char>'(?:\\.|[^'\\\n])+')
  | (?P<number>\d[\w.]*)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<op>->|::|\.\.\.|[{}()\[\];,.=<>:+\-*/%!&|^~?@])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, string, char, op, eof
    value: str
    line: int
    col: int
    end_line: int
    end_col: int

    def span(self, file: str) -> Span:
        return Span(file, self.line, self.col, self.end_line, self.end_col)


class _Positions:
    def __init__(self, text: str) -> None:
        self._starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def at(self, offset: int) -> tuple[int, int]:
        line = bisect.bisect_right(self._starts, offset)
        return line, offset - self._starts[line - 1] + 1


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    """Tokenize ``text``; the result always ends with an ``eof`` token."""
    return list(_iter_tokens(text, file))


def _iter_tokens(text: str, file: str) -> Iterator[Token]:
    pos = _Positions(text)
    offset = 0
    n = len(text)
    while offset < n:
        m = _TOKEN_RE.match(text, offset)
        if m is None:
            line, col = pos.at(offset)
            raise ParseError(f"unexpected character {text[offset]!r}", file, line, col)
        kind = m.lastgroup
        if kind == "open_comment":
            line, col = pos.at(offset)
            raise ParseError("unterminated block comment", file, line, col)
        if kind not in ("ws", "comment"):
            line, col = pos.at(m.start())
            end_line, end_col = pos.at(m.end() - 1)
            yield Token(kind, m.group(), line, col, end_line, end_col + 1)
        offset = m.end()
    line, col = pos.at(n)
    yield Token("eof", "", line, col, line, col)


class TokenStream:
    """Cursor over a token list with the usual peek/expect helpers."""

    def __init__(self, tokens: list[Token], file: str) -> None:
        self.tokens = tokens
        self.file = file
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, value: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.value == value and tok.kind in ("op", "ident")

    def at_eof(self) -> bool:
        return self.current.kind == "eof"

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, value: str) -> Token | None:
        if self.at(value):
            return self.advance()
        return None

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self.fail(f"expected {value!r}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.current
        if tok.kind != "ident":
            self.fail(f"expected {what}")
        return self.advance()

    def fail(self, message: str, tok: Token | None = None) -> None:
        tok = tok or self.current
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise ParseError(f"{message}, found {found}", self.file, tok.line, tok.col)

    def span_from(self, start: Token, end: Token | None = None) -> Span:
        end = end or self.tokens[self.pos - 1]
        return Span(self.file, start.line, start.col, end.end_line, end.end_col)
