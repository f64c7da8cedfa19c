"""Basic graph-pattern queries over ontology axioms and instance data.

Supported text: ``prefix`` declarations, ``select ?a ?b`` (or ``*``), and a
``where { ... }`` block of triple patterns separated by ``.``.  The predicate
position may hold an alternation ``(p1|p2|...)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import ParseError, position_of
from .expressions import ClassExpression, Named
from .graph import (
    OWL,
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
    OWL_EQUIVALENTCLASS,
    BlankNode,
    Graph,
    Iri,
    Literal,
    PrefixMap,
    Triple,
)
from .schema import DisjointClasses, EquivalentTo, Ontology, SubClassOf
from .syntax._scan import QUOTE_OPEN, Scanner
from .syntax.manchester import serialize_manchester
from .syntax.turtle import render_iri, render_literal

OWL_CLASS = Iri(OWL + "Class")
OWL_OBJECT_PROPERTY = Iri(OWL + "ObjectProperty")
OWL_DISJOINT_WITH = Iri(OWL + "disjointWith")


@dataclass(frozen=True)
class ExpressionNode:
    """A class expression standing in object position of the schema view."""

    expr: ClassExpression

    def __str__(self) -> str:
        return serialize_manchester(self.expr)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return "?" + self.name


@dataclass(frozen=True)
class Alternation:
    options: tuple[Iri, ...]


Position = Union[Var, Iri, Literal, BlankNode, Alternation]


@dataclass(frozen=True)
class TriplePattern:
    subject: Position
    predicate: Position
    object: Position

    def variables(self) -> list[str]:
        return [p.name for p in (self.subject, self.predicate, self.object) if isinstance(p, Var)]


@dataclass(frozen=True)
class Query:
    variables: tuple[str, ...]
    patterns: tuple[TriplePattern, ...]
    prefixes: PrefixMap

    def __post_init__(self) -> None:
        seen = {v for p in self.patterns for v in p.variables()}
        for v in self.variables:
            if v not in seen:
                raise ValueError(f"selected variable ?{v} does not occur in any pattern")


@dataclass(frozen=True)
class BindingSet:
    variables: tuple[str, ...]
    rows: tuple[dict, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def rendered(self, prefixes: PrefixMap) -> list[tuple[str, ...]]:
        return [tuple(render_term(row[v], prefixes) for v in self.variables) for row in self.rows]


def render_term(term: object, prefixes: PrefixMap) -> str:
    if isinstance(term, Iri):
        return render_iri(term, prefixes)
    if isinstance(term, Literal):
        return render_literal(term)
    if isinstance(term, BlankNode):
        return str(term)
    if isinstance(term, ExpressionNode):
        return serialize_manchester(term.expr, prefixes)
    return str(term)


# --- parsing --------------------------------------------------------------------

_KW = re.compile(r"(prefix|select|where)\b", re.IGNORECASE)
_PNAME_NS = re.compile(r"([A-Za-z][A-Za-z0-9_\-]*)?:")
_LOCAL = re.compile(r"[A-Za-z0-9_\-]+(?:\.[A-Za-z0-9_\-]+)*")
_IRIREF = re.compile(r"<([^<>\"{}|^`\\\s]*)>")
_VAR = re.compile(r"[?$]([A-Za-z_][A-Za-z0-9_]*)")
_A = re.compile(r"a(?=[\s(<?$])")


class _QueryParser:
    def __init__(self, text: str, prefixes: PrefixMap | None) -> None:
        self.s = Scanner(text)
        self.prefixes = prefixes.copy() if prefixes is not None else PrefixMap()

    def keyword(self, word: str) -> bool:
        self.s.skip_ws()
        m = _KW.match(self.s.text, self.s.pos)
        if m and m.group(1).lower() == word:
            self.s.pos = m.end()
            return True
        return False

    def parse(self) -> Query:
        s = self.s
        while self.keyword("prefix"):
            s.skip_ws()
            m = s.match(_PNAME_NS)
            if not m:
                raise s.error("bad prefix label", expected="prefix label followed by ':'")
            s.skip_ws()
            iri = s.match(_IRIREF)
            if not iri:
                raise s.error("bad namespace", expected="<namespace IRI>")
            self.prefixes.bind(m.group(1) or "", iri.group(1))
        if not self.keyword("select"):
            raise s.error("missing select clause", expected="'select'")
        variables: list[str] = []
        star = False
        while True:
            s.skip_ws()
            if s.startswith("*"):
                s.pos += 1
                star = True
                continue
            m = s.match(_VAR)
            if not m:
                break
            variables.append(m.group(1))
        if not variables and not star:
            raise s.error("no variables selected", expected="?variable or *")
        self.keyword("where")
        s.expect("{")
        patterns = []
        while True:
            s.skip_ws()
            if s.startswith("}"):
                s.pos += 1
                break
            patterns.append(self.pattern())
            s.skip_ws()
            if s.startswith("."):
                s.pos += 1
            elif not s.startswith("}"):
                raise s.error(f"unexpected {s.peek(10)!r}", expected="'.' or '}'")
        if not s.at_end():
            raise s.error(f"trailing text {s.peek(10)!r}", expected="end of query")
        if not patterns:
            raise s.error("empty where block", expected="triple pattern")
        if star:
            for p in patterns:
                for v in p.variables():
                    if v not in variables:
                        variables.append(v)
        try:
            return Query(tuple(variables), tuple(patterns), self.prefixes)
        except ValueError as exc:
            line, col = position_of(s.text, 0)
            raise ParseError(str(exc), line, col, "selected variables used in the where block") from None

    def pattern(self) -> TriplePattern:
        subj = self.term("subject")
        if isinstance(subj, Literal):
            raise self.s.error("literal in subject position", expected="variable or IRI")
        pred = self.predicate()
        obj = self.term("object")
        return TriplePattern(subj, pred, obj)

    def predicate(self) -> Position:
        s = self.s
        s.skip_ws()
        if s.match(_A):
            return RDF_TYPE
        if s.startswith("("):
            s.pos += 1
            options = [self.iri(required=True)]
            while True:
                s.skip_ws()
                if s.startswith("|"):
                    s.pos += 1
                    options.append(self.iri(required=True))
                    continue
                s.expect(")")
                break
            return options[0] if len(options) == 1 else Alternation(tuple(options))
        m = s.match(_VAR)
        if m:
            return Var(m.group(1))
        return self.iri(required=True)

    def term(self, where: str) -> Position:
        s = self.s
        s.skip_ws()
        m = s.match(_VAR)
        if m:
            return Var(m.group(1))
        if s.startswith("``"):
            end = s.text.find("''", s.pos + 2)
            if end < 0:
                raise s.error("unterminated string", expected="''")
            text = s.text[s.pos + 2:end]
            s.pos = end + 2
            return Literal(text, self.lang())
        if s.peek() in ('"', "'") and s.peek():
            quote = s.peek()
            end = s.pos + 1
            out = []
            while end < len(s.text) and s.text[end] != quote:
                if s.text[end] == "\\" and end + 1 < len(s.text):
                    out.append(s.text[end + 1])
                    end += 2
                    continue
                out.append(s.text[end])
                end += 1
            if end >= len(s.text):
                raise s.error("unterminated string", expected=quote)
            s.pos = end + 1
            return Literal("".join(out), self.lang())
        iri = self.iri(required=False)
        if iri is None:
            raise s.error(f"unexpected {s.peek(10) or 'end of input'!r}", expected=where)
        return iri

    def lang(self) -> Optional[str]:
        m = self.s.match(re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)"))
        return m.group(1) if m else None

    def iri(self, required: bool) -> Optional[Iri]:
        s = self.s
        s.skip_ws()
        m = s.match(_IRIREF)
        if m:
            return Iri(m.group(1))
        m = s.match(_PNAME_NS)
        if m:
            namespace = self.prefixes.namespace(m.group(1) or "")
            if s.peek() and s.peek() in QUOTE_OPEN:
                from .syntax.names import default_names

                return default_names().quoted(namespace, s.quoted_name())
            local = s.match(_LOCAL)
            return Iri(namespace + (local.group(0) if local else ""))
        if required:
            raise s.error(f"unexpected {s.peek(10) or 'end of input'!r}", expected="IRI")
        return None


def parse_query(text: str, prefixes: PrefixMap | None = None) -> Query:
    """Parse query text.  Only prefixes declared in the text (or passed in)
    are known."""
    return _QueryParser(text, prefixes).parse()


# --- schema view ----------------------------------------------------------------


def schema_view(ont: Ontology) -> Graph:
    """The ontology's axioms as triples, with restrictions as ExpressionNodes."""
    g = Graph()
    for c in ont.classes:
        g.add(Triple(c, RDF_TYPE, OWL_CLASS))
    for p in ont.properties:
        g.add(Triple(p, RDF_TYPE, OWL_OBJECT_PROPERTY))
    for iri, label in ont.labels.items():
        g.add(Triple(iri, RDFS_LABEL, Literal(label)))
    for ind, cls in ont.individuals.items():
        g.add(Triple(ind, RDF_TYPE, cls))
    for ax in ont.axioms:
        if isinstance(ax, SubClassOf):
            obj = ax.sup.iri if isinstance(ax.sup, Named) else ExpressionNode(ax.sup)
            g.add(Triple(ax.sub, RDFS_SUBCLASSOF, obj))
        elif isinstance(ax, EquivalentTo):
            g.add(Triple(ax.cls, OWL_EQUIVALENTCLASS, ExpressionNode(ax.expr)))
        elif isinstance(ax, DisjointClasses):
            for a in ax.classes:
                for b in ax.classes:
                    if a != b:
                        g.add(Triple(a, OWL_DISJOINT_WITH, b))
    return g.seal()


# --- evaluation -----------------------------------------------------------------


def _resolve(pos: Position, row: dict):
    if isinstance(pos, Var):
        return row.get(pos.name)
    return pos


def _bound_count(p: TriplePattern, bound: set[str]) -> int:
    return sum(1 for x in (p.subject, p.predicate, p.object) if not isinstance(x, Var) or x.name in bound)


def _extend(graph: Graph, p: TriplePattern, row: dict) -> Iterable[dict]:
    s = _resolve(p.subject, row)
    o = _resolve(p.object, row)
    if isinstance(p.predicate, Alternation):
        preds: list = list(p.predicate.options)
    else:
        preds = [_resolve(p.predicate, row)]
    for pred in preds:
        for t in graph.match(s, pred, o):
            new = dict(row)
            ok = True
            for pos, value in ((p.subject, t.subject), (p.predicate, t.predicate), (p.object, t.object)):
                if isinstance(pos, Var):
                    if pos.name in new and new[pos.name] != value:
                        ok = False
                        break
                    new[pos.name] = value
            if ok:
                yield new


def _estimate(graph: Graph, p: TriplePattern) -> int:
    s = None if isinstance(p.subject, Var) else p.subject
    o = None if isinstance(p.object, Var) else p.object
    if isinstance(p.predicate, Alternation):
        return sum(len(graph.match(s, opt, o)) for opt in p.predicate.options)
    pred = None if isinstance(p.predicate, Var) else p.predicate
    return len(graph.match(s, pred, o))


def evaluate(graph: Graph, q: Query) -> BindingSet:
    """Nested-loop join; each step takes the pattern with the most bound
    positions, breaking ties by the pattern's standalone match count."""
    remaining = list(q.patterns)
    rows: list[dict] = [{}]
    bound: set[str] = set()
    while remaining:
        nxt = min(
            range(len(remaining)),
            key=lambda i: (-_bound_count(remaining[i], bound), _estimate(graph, remaining[i]), i),
        )
        p = remaining.pop(nxt)
        rows = [new for row in rows for new in _extend(graph, p, row)]
        bound.update(p.variables())
        if not rows:
            break
    projected = {tuple((v, row[v]) for v in q.variables) for row in rows}
    prefixes = q.prefixes
    ordered = sorted(projected, key=lambda r: tuple(render_term(val, prefixes) for _, val in r))
    return BindingSet(q.variables, tuple(dict(r) for r in ordered))


def execute(ont: Ontology, graph: Graph | None, q: Query) -> BindingSet:
    """Run ``q`` over the ontology's schema view plus ``graph``."""
    source = schema_view(ont)
    if graph is not None:
        source = source.union(graph)
    return evaluate(source, q)
