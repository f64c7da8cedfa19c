"""Reader and writer for the Turtle subset used by instance data.

Supported: ``@prefix`` / ``PREFIX`` declarations, ``a``, ``;`` and ``,``
lists, ``[ ... ]`` anonymous nodes, ``_:label`` blank nodes, string
literals (``"..."``, ``'...'`` and the typeset ````...''`` form) with an
optional language tag, and label-style local names (``sio:`has output'``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..graph import (
    RDF_TYPE,
    BlankNode,
    Graph,
    Iri,
    Literal,
    PrefixMap,
    Triple,
    base_prefixes,
    term_key,
)
from ._scan import QUOTE_OPEN, Scanner
from .names import Names, default_names

_PN_PREFIX = re.compile(r"(?:[A-Za-z][A-Za-z0-9_\-]*(?:\.[A-Za-z0-9_\-]+)*)?:")
_PN_LOCAL = re.compile(r"(?:[A-Za-z0-9_\-%]+(?:\.[A-Za-z0-9_\-%]+)*)?")
_IRIREF = re.compile(r"<([^<>\"{}|^`\\\s]*)>")
_BNODE_LABEL = re.compile(r"_:([A-Za-z0-9_\-]+(?:\.[A-Za-z0-9_\-]+)*)")
_LANG = re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)")
_PREFIX_KW = re.compile(r"(@prefix|PREFIX)\b(?!:)", re.IGNORECASE)
_A_KW = re.compile(r"a(?=[\s\[<\"'`]|$)")
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "'": "'", "\\": "\\", "b": "\b", "f": "\f"}

# local names the writer may emit bare after a prefix
SAFE_LOCAL = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


@dataclass
class TurtleDocument:
    prefixes: PrefixMap
    graph: Graph


class _TurtleParser:
    def __init__(self, text: str, prefixes: PrefixMap, names: Names) -> None:
        self.s = Scanner(text)
        self.prefixes = prefixes
        self.names = names
        self.graph = Graph()
        self.labels: dict[str, BlankNode] = {}

    def parse(self) -> TurtleDocument:
        s = self.s
        while not s.at_end():
            m = s.match(_PREFIX_KW)
            if m:
                self.prefix_directive(m.group(1).startswith("@"))
                continue
            self.triples()
            s.expect(".")
        return TurtleDocument(self.prefixes, self.graph.seal())

    def prefix_directive(self, at_form: bool) -> None:
        s = self.s
        s.skip_ws()
        m = s.match(_PN_PREFIX)
        if not m:
            raise s.error("bad prefix label", expected="prefix label followed by ':'")
        s.skip_ws()
        iri = s.match(_IRIREF)
        if not iri:
            raise s.error("bad namespace", expected="<namespace IRI>")
        self.prefixes.bind(m.group(0)[:-1], iri.group(1))
        if at_form:
            s.expect(".")

    def triples(self) -> None:
        s = self.s
        s.skip_ws()
        if s.startswith("["):
            subject = self.blank_property_list()
            s.skip_ws()
            if s.startswith("."):
                return
        else:
            subject = self.subject()
        self.predicate_object_list(subject)

    def subject(self):
        s = self.s
        start = s.pos
        term = self.iri_or_bnode()
        if term is None:
            raise s.error(f"unexpected {s.peek(10) or 'end of input'!r}", expected="subject", at=start)
        return term

    def predicate_object_list(self, subject) -> None:
        s = self.s
        while True:
            pred = self.verb()
            self.object_list(subject, pred)
            s.skip_ws()
            if not s.startswith(";"):
                return
            while s.startswith(";"):
                s.pos += 1
                s.skip_ws()
            if s.peek() in (".", "]", ""):
                return

    def verb(self) -> Iri:
        s = self.s
        s.skip_ws()
        if s.match(_A_KW):
            return RDF_TYPE
        start = s.pos
        term = self.iri(predicate=True)
        if term is None:
            raise s.error(f"unexpected {s.peek(10) or 'end of input'!r}", expected="predicate", at=start)
        return term

    def object_list(self, subject, pred: Iri) -> None:
        s = self.s
        while True:
            obj = self.object()
            self.graph.add(Triple(subject, pred, obj))
            s.skip_ws()
            if not s.startswith(","):
                return
            s.pos += 1

    def object(self):
        s = self.s
        s.skip_ws()
        if s.startswith("["):
            return self.blank_property_list()
        lit = self.literal()
        if lit is not None:
            return lit
        start = s.pos
        term = self.iri_or_bnode()
        if term is None:
            raise s.error(f"unexpected {s.peek(10) or 'end of input'!r}", expected="object", at=start)
        return term

    def blank_property_list(self) -> BlankNode:
        s = self.s
        s.expect("[")
        node = BlankNode()
        s.skip_ws()
        if not s.startswith("]"):
            self.predicate_object_list(node)
        s.expect("]")
        return node

    def iri_or_bnode(self):
        s = self.s
        s.skip_ws()
        m = s.match(_BNODE_LABEL)
        if m:
            label = m.group(1)
            if label not in self.labels:
                self.labels[label] = BlankNode()
            return self.labels[label]
        return self.iri()

    def iri(self, predicate: bool = False) -> Optional[Iri]:
        s = self.s
        s.skip_ws()
        m = s.match(_IRIREF)
        if m:
            try:
                return Iri(m.group(1))
            except ValueError as exc:
                raise s.error(str(exc), at=m.start()) from None
        start = s.pos
        m = s.match(_PN_PREFIX)
        if not m:
            return None
        label = m.group(0)[:-1]
        namespace = self.prefixes.namespace(label)
        if s.peek() and s.peek() in QUOTE_OPEN and not s.startswith("``"):
            return self.names.quoted(namespace, s.quoted_name())
        local = s.match(_PN_LOCAL).group(0)
        try:
            iri = Iri(namespace + local)
        except ValueError as exc:
            raise s.error(str(exc), at=start) from None
        if predicate and label == "":
            iri = self.names.canonical_default(iri, local)
        return iri

    def literal(self) -> Optional[Literal]:
        s = self.s
        start = s.pos
        if s.startswith("``"):
            end = s.text.find("''", s.pos + 2)
            if end < 0:
                raise s.error("unterminated string", expected="''", at=start)
            text = s.text[s.pos + 2:end]
            s.pos = end + 2
        elif s.peek() in ('"', "'") and s.peek():
            text = self._escaped_string(s.peek())
        else:
            return None
        m = s.match(_LANG)
        return Literal(text, m.group(1) if m else None)

    def _escaped_string(self, quote: str) -> str:
        s = self.s
        start = s.pos
        s.pos += 1
        out = []
        while True:
            if s.pos >= len(s.text) or s.text[s.pos] == "\n":
                raise s.error("unterminated string", expected=quote, at=start)
            ch = s.text[s.pos]
            if ch == quote:
                s.pos += 1
                return "".join(out)
            if ch == "\\":
                nxt = s.text[s.pos + 1:s.pos + 2]
                if nxt == "u":
                    out.append(chr(int(s.text[s.pos + 2:s.pos + 6], 16)))
                    s.pos += 6
                    continue
                if nxt not in _ESCAPES:
                    raise s.error(f"bad escape \\{nxt}", at=s.pos)
                out.append(_ESCAPES[nxt])
                s.pos += 2
                continue
            out.append(ch)
            s.pos += 1


def parse_turtle(text: str, prefixes: PrefixMap | None = None, names: Names | None = None) -> TurtleDocument:
    """Parse Turtle-subset text into a sealed graph.

    The standard prefixes (eo, ep, sio, prov, rdf, rdfs, owl) are pre-bound;
    declarations in the document add to or override them.
    """
    pm = (prefixes if prefixes is not None else base_prefixes()).copy()
    return _TurtleParser(text, pm, names or default_names()).parse()


# --- writer -------------------------------------------------------------------


def _escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def render_iri(iri: Iri, prefixes: PrefixMap) -> str:
    split = prefixes.compress(iri, SAFE_LOCAL)
    if split is None:
        return f"<{iri.value}>"
    return f"{split[0]}:{split[1]}"


def render_literal(lit: Literal) -> str:
    tag = f"@{lit.lang}" if lit.lang else ""
    return f'"{_escape(lit.text)}"{tag}'


class _Writer:
    def __init__(self, doc: TurtleDocument) -> None:
        self.g = doc.graph
        self.prefixes = doc.prefixes
        self.labels: dict[BlankNode, str] = {}
        self.emitted: set = set()
        refs: dict[BlankNode, int] = {}
        for t in self.g.triples:
            if isinstance(t.object, BlankNode):
                refs[t.object] = refs.get(t.object, 0) + 1
        # blank nodes referenced exactly once are written inline as [ ... ]
        self.inline = {b for b, n in refs.items() if n == 1}

    def label(self, b: BlankNode) -> str:
        if b not in self.labels:
            self.labels[b] = f"b{len(self.labels)}"
        return "_:" + self.labels[b]

    def term(self, t, indent: int) -> str:
        if isinstance(t, Iri):
            return render_iri(t, self.prefixes)
        if isinstance(t, Literal):
            return render_literal(t)
        if t in self.inline:
            return self.inline_node(t, indent)
        return self.label(t)

    def inline_node(self, b: BlankNode, indent: int) -> str:
        self.emitted.add(b)
        body = self.predicate_block(b, indent + 4, inline=True)
        return "[]" if not body else f"[ {body} ]"

    def predicate_block(self, subject, indent: int, inline: bool = False) -> str:
        by_pred: dict[Iri, list] = {}
        for t in self.g.match(s=subject):
            by_pred.setdefault(t.predicate, []).append(t.object)
        preds = sorted(by_pred, key=lambda p: (p != RDF_TYPE, p.value))
        parts = []
        for p in preds:
            verb = "a" if p == RDF_TYPE else render_iri(p, self.prefixes)
            objs = ", ".join(self.term(o, indent) for o in sorted(by_pred[p], key=term_key))
            parts.append(f"{verb} {objs}")
        sep = " ; " if inline else " ;\n" + " " * indent
        return sep.join(parts)

    def statement(self, subject) -> str:
        if isinstance(subject, BlankNode):
            self.emitted.add(subject)
            head = self.label(subject) if subject not in self.inline else "[]"
        else:
            head = render_iri(subject, self.prefixes)
        return f"{head} {self.predicate_block(subject, 4)} ."

    def write(self) -> str:
        lines = [f"@prefix {label}: <{ns}> ." for label, ns in self.prefixes.items()]
        subjects = sorted(self.g.subjects(), key=term_key)
        blocks = []
        for subj in subjects:
            if subj in self.inline:
                continue
            blocks.append(self.statement(subj))
        # inline candidates that only reference each other in a cycle
        pending = [b for b in subjects if b in self.inline and b not in self.emitted]
        while pending:
            b = pending[0]
            self.inline.discard(b)
            blocks.append(self.statement(b))
            pending = [x for x in pending if x not in self.emitted]
        out = "\n".join(lines)
        if blocks:
            out += "\n\n" + "\n\n".join(blocks)
        return out + "\n"


def serialize_turtle(doc: TurtleDocument) -> str:
    return _Writer(doc).write()
