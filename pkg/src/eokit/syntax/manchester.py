"""Manchester-style class expressions.

Grammar (``and`` binds tighter than ``or``; restriction fillers are
primaries)::

    expr    := conj ("or" conj)*
    conj    := primary ("and" primary)*
    primary := "(" expr ")" | name | prop "some" primary | prop "min" INT primary

Names may be CURIEs, ``<absolute IRIs>``, label-style quoted names
(``eo:`System Recommendation'``) or bare labels/local names resolved through
the ontology's alias table (``isBasedOn``, ```Study'``).
"""

from __future__ import annotations

import re
from typing import NamedTuple

from ..errors import ParseError
from ..expressions import And, AtLeast, ClassExpression, Named, Or, Some
from ..graph import Iri, PrefixMap, base_prefixes
from ._scan import QUOTE_OPEN, Scanner
from .names import Names, default_names
from .turtle import render_iri

KEYWORDS = {"and", "or", "some", "min"}

_IRIREF = re.compile(r"<([^<>\"{}|^`\\\s]*)>")
_PNAME = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*)?:")
_LOCAL = re.compile(r"[A-Za-z0-9_\-]+(?:\.[A-Za-z0-9_\-]+)*")
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_INT = re.compile(r"[0-9]+")


class Token(NamedTuple):
    kind: str  # "(", ")", "kw", "int", "name"
    value: object
    offset: int


def tokenize(text: str, prefixes: PrefixMap | None = None, names: Names | None = None) -> list[Token]:
    prefixes = prefixes if prefixes is not None else base_prefixes()
    names = names or default_names()
    s = Scanner(text, comments=False)
    out: list[Token] = []
    while not s.at_end():
        start = s.pos
        ch = s.peek()
        if ch in "()":
            s.pos += 1
            out.append(Token(ch, ch, start))
            continue
        m = s.match(_INT)
        if m:
            out.append(Token("int", int(m.group(0)), start))
            continue
        m = s.match(_IRIREF)
        if m:
            try:
                out.append(Token("name", Iri(m.group(1)), start))
            except ValueError as exc:
                raise s.error(str(exc), at=start) from None
            continue
        m = s.match(_PNAME)
        if m:
            namespace = prefixes.namespace(m.group(1) or "")
            if s.peek() and s.peek() in QUOTE_OPEN:
                iri = names.quoted(namespace, s.quoted_name())
            else:
                local = s.match(_LOCAL)
                if not local:
                    raise s.error("missing local name", expected="name after prefix")
                iri = Iri(namespace + local.group(0))
            out.append(Token("name", iri, start))
            continue
        if ch in QUOTE_OPEN:
            label = s.quoted_name()
            out.append(Token("name", _bare(s, names, label, start), start))
            continue
        m = s.match(_WORD)
        if m:
            word = m.group(0)
            if word.lower() in KEYWORDS:
                out.append(Token("kw", word.lower(), start))
            else:
                out.append(Token("name", _bare(s, names, word, start), start))
            continue
        raise s.error(f"unexpected character {ch!r}", expected="name, keyword or parenthesis")
    return out


def _bare(s: Scanner, names: Names, text: str, start: int) -> Iri:
    iri = names.bare(text)
    if iri is None:
        raise s.error(f"unknown name {text!r}", expected="a declared label or prefixed name", at=start)
    return iri


class _Parser:
    def __init__(self, text: str, tokens: list[Token]) -> None:
        self.text = text
        self.toks = tokens
        self.i = 0

    def error(self, message: str, expected: str) -> ParseError:
        from ..errors import position_of

        offset = self.toks[self.i].offset if self.i < len(self.toks) else len(self.text)
        line, col = position_of(self.text, offset)
        return ParseError(message, line, col, expected)

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind: str, value: object = None, expected: str = "") -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind or (value is not None and tok.value != value):
            found = "end of input" if tok is None else repr(tok.value)
            raise self.error(f"unexpected {found}", expected or repr(value or kind))
        self.i += 1
        return tok

    def at_kw(self, word: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "kw" and tok.value == word

    def parse(self) -> ClassExpression:
        if not self.toks:
            raise self.error("empty expression", "class expression")
        expr = self.expr()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek().value!r}", "'and', 'or' or end of input")
        return expr

    def expr(self) -> ClassExpression:
        parts = [self.conj()]
        while self.at_kw("or"):
            self.i += 1
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(*parts)

    def conj(self) -> ClassExpression:
        parts = [self.primary()]
        while self.at_kw("and"):
            self.i += 1
            parts.append(self.primary())
        return parts[0] if len(parts) == 1 else And(*parts)

    def primary(self) -> ClassExpression:
        tok = self.peek()
        if tok is not None and tok.kind == "(":
            self.i += 1
            inner = self.expr()
            self.take(")", expected="')'")
            return inner
        name = self.take("name", expected="class or property name, or '('").value
        if self.at_kw("some"):
            self.i += 1
            return Some(name, self.primary())
        if self.at_kw("min"):
            self.i += 1
            n = self.take("int", expected="cardinality").value
            if n < 1:
                self.i -= 1
                raise self.error("cardinality must be at least 1", "positive integer")
            return AtLeast(n, name, self.primary())
        return Named(name)


def parse_manchester(text: str, prefixes: PrefixMap | None = None, names: Names | None = None) -> ClassExpression:
    return _Parser(text, tokenize(text, prefixes, names)).parse()


def serialize_manchester(expr: ClassExpression, prefixes: PrefixMap | None = None) -> str:
    prefixes = prefixes if prefixes is not None else base_prefixes()

    def wrap(e) -> str:
        return ser(e) if isinstance(e, Named) else f"({ser(e)})"

    def ser(e) -> str:
        if isinstance(e, Named):
            return render_iri(e.iri, prefixes)
        if isinstance(e, Some):
            return f"{render_iri(e.property, prefixes)} some {_filler(e.filler)}"
        if isinstance(e, AtLeast):
            return f"{render_iri(e.property, prefixes)} min {e.n} {_filler(e.filler)}"
        if isinstance(e, And):
            return " and ".join(wrap(op) for op in e.operands)
        if isinstance(e, Or):
            return " or ".join(wrap(op) for op in e.operands)
        raise TypeError(f"not a class expression: {e!r}")

    def _filler(e) -> str:
        return f"({ser(e)})" if isinstance(e, (And, Or)) else ser(e)

    return ser(expr)


def normalized_tokens(text: str, prefixes: PrefixMap | None = None, names: Names | None = None) -> list[str]:
    """Token stream with parentheses dropped and every name resolved to its
    full IRI, for layout-insensitive comparison of expression texts."""
    out = []
    for tok in tokenize(text, prefixes, names):
        if tok.kind in "()":
            continue
        out.append(tok.value.value if isinstance(tok.value, Iri) else str(tok.value))
    return out
