from __future__ import annotations

import re

from ..errors import ParseError, position_of

QUOTE_OPEN = "`'"
QUOTE_CLOSE = "'`"


class Scanner:
    """Cursor over source text with whitespace/comment skipping."""

    def __init__(self, text: str, comments: bool = True) -> None:
        self.text = text
        self.pos = 0
        self.comments = comments

    def skip_ws(self) -> None:
        text, n = self.text, len(self.text)
        while self.pos < n:
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif self.comments and ch == "#":
                nl = text.find("\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            else:
                break

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, k: int = 1) -> str:
        return self.text[self.pos:self.pos + k]

    def startswith(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def match(self, pattern: re.Pattern) -> re.Match | None:
        m = pattern.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def error(self, message: str, expected: str | None = None, at: int | None = None) -> ParseError:
        line, col = position_of(self.text, self.pos if at is None else at)
        return ParseError(message, line, col, expected)

    def expect(self, s: str) -> None:
        self.skip_ws()
        if not self.startswith(s):
            found = self.peek(10) or "end of input"
            raise self.error(f"unexpected {found!r}", expected=repr(s))
        self.pos += len(s)

    def quoted_name(self) -> str:
        """Read `label' / 'label' / `label` starting at the opening quote."""
        start = self.pos
        self.pos += 1
        end = -1
        for i in range(self.pos, len(self.text)):
            if self.text[i] in QUOTE_CLOSE:
                end = i
                break
            if self.text[i] == "\n":
                break
        if end < 0:
            raise self.error("unterminated quoted name", expected="closing quote", at=start)
        self.pos = end + 1
        return self.text[start + 1:end]
