"""RDF term model, prefix handling and an in-memory triple store.

A :class:`Graph` starts life as a mutable builder.  Calling :meth:`Graph.seal`
freezes it; afterwards it can be shared freely between threads.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import SealedGraphError, UnknownPrefix

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_OPAQUE_SCHEMES = {"urn", "mailto", "tag", "data", "file"}
_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        v = self.value
        if not isinstance(v, str) or not v:
            raise ValueError("IRI must be a non-empty string")
        if _FORBIDDEN.search(v):
            raise ValueError(f"IRI contains a forbidden character: {v!r}")
        if "://" not in v:
            m = _SCHEME.match(v)
            if not m or m.group(0)[:-1].lower() not in _OPAQUE_SCHEMES:
                raise ValueError(f"not an absolute IRI: {v!r}")

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"Iri({self.value!r})"


@dataclass(frozen=True)
class Literal:
    text: str
    lang: Optional[str] = None

    def __str__(self) -> str:
        return self.text if self.lang is None else f"{self.text}@{self.lang}"


_bnode_ids = itertools.count(1)


@dataclass(frozen=True)
class BlankNode:
    id: str = field(default_factory=lambda: f"b{next(_bnode_ids)}")

    def __str__(self) -> str:
        return f"_:{self.id}"


Term = Union[Iri, Literal, BlankNode]
Node = Union[Iri, BlankNode]


def term_key(term: object) -> tuple:
    """Total order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(term, Iri):
        return (0, term.value, "")
    if isinstance(term, BlankNode):
        return (1, term.id, "")
    if isinstance(term, Literal):
        return (2, term.text, term.lang or "")
    # schema-view objects (e.g. class expressions) sort last, by text
    return (3, str(term), "")


@dataclass(frozen=True)
class Triple:
    subject: Node
    predicate: Iri
    object: object

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise TypeError(f"triple subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TypeError(f"triple predicate must be an IRI, got {self.predicate!r}")

    def __iter__(self) -> Iterator:
        return iter((self.subject, self.predicate, self.object))


def triple_key(t: Triple) -> tuple:
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))


# --- namespaces ---------------------------------------------------------------

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
SIO = "http://semanticscience.org/resource/"
PROV = "http://www.w3.org/ns/prov-o#"
EO = "https://purl.org/heals/eo#"
EP = "http://linkedu.eu/dedalo/explanationPattern.owl#"

RDF_TYPE = Iri(RDF + "type")
RDFS_LABEL = Iri(RDFS + "label")
RDFS_SUBCLASSOF = Iri(RDFS + "subClassOf")
OWL_EQUIVALENTCLASS = Iri(OWL + "equivalentClass")


class PrefixMap:
    """Mapping from prefix labels to namespace IRIs.

    The empty string is a valid label (the ``:local`` default prefix).
    """

    def __init__(self, entries: Mapping[str, str | Iri] | None = None) -> None:
        self._entries: dict[str, str] = {}
        for label, ns in (entries or {}).items():
            self.bind(label, ns)

    def bind(self, label: str, namespace: str | Iri) -> None:
        self._entries[label] = str(namespace)

    def copy(self) -> "PrefixMap":
        return PrefixMap(self._entries)

    def merged(self, other: "PrefixMap | Mapping[str, str]") -> "PrefixMap":
        out = self.copy()
        items = other.items() if isinstance(other, Mapping) else other._entries.items()
        for label, ns in items:
            out.bind(label, ns)
        return out

    def namespace(self, label: str) -> str:
        try:
            return self._entries[label]
        except KeyError:
            raise UnknownPrefix(label) from None

    def __contains__(self, label: object) -> bool:
        return label in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def items(self):
        return sorted(self._entries.items())

    def as_dict(self) -> dict[str, str]:
        return dict(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrefixMap) and self._entries == other._entries

    def __repr__(self) -> str:
        return f"PrefixMap({self._entries!r})"

    def expand(self, curie: str) -> Iri:
        return expand_curie(self, curie)

    def compress(self, iri: Iri | str, local_pattern: re.Pattern | None = None) -> Optional[tuple[str, str]]:
        """Best (label, local) split for ``iri`` or None.

        Longest namespace wins; among equal namespaces the shortest label,
        then alphabetical, so the choice is deterministic.
        """
        value = str(iri)
        best = None
        for label, ns in self._entries.items():
            if value.startswith(ns) and len(value) > len(ns):
                local = value[len(ns):]
                if local_pattern is not None and not local_pattern.fullmatch(local):
                    continue
                rank = (-len(ns), len(label), label)
                if best is None or rank < best[0]:
                    best = (rank, label, local)
        return None if best is None else (best[1], best[2])


BASE_PREFIXES = PrefixMap(
    {
        "sio": SIO,
        "prov": PROV,
        "eo": EO,
        "ep": EP,
        "rdf": RDF,
        "rdfs": RDFS,
        "owl": OWL,
    }
)


def base_prefixes() -> PrefixMap:
    return BASE_PREFIXES.copy()


def expand_curie(prefixes: PrefixMap, curie: str) -> Iri:
    """Expand ``label:local`` (or pass through ``<absolute>``) to an Iri."""
    curie = curie.strip()
    if curie.startswith("<") and curie.endswith(">"):
        return Iri(curie[1:-1])
    label, sep, local = curie.partition(":")
    if not sep:
        raise ValueError(f"not a CURIE: {curie!r}")
    return Iri(prefixes.namespace(label) + local)


# --- graph --------------------------------------------------------------------


class Graph:
    """Set of triples with subject, predicate, object and (s, p) indexes."""

    def __init__(self, triples: Iterable[Triple] = ()) -> None:
        self._triples: set[Triple] = set()
        self._by_s: dict[object, set[Triple]] = defaultdict(set)
        self._by_p: dict[Iri, set[Triple]] = defaultdict(set)
        self._by_o: dict[object, set[Triple]] = defaultdict(set)
        self._by_sp: dict[tuple, set[Triple]] = defaultdict(set)
        self._sealed = False
        for t in triples:
            self.add(t)

    @classmethod
    def of(cls, triples: Iterable[Triple | tuple]) -> "Graph":
        """Build and seal a graph in one step."""
        g = cls()
        for t in triples:
            g.add(t if isinstance(t, Triple) else Triple(*t))
        return g.seal()

    @property
    def sealed(self) -> bool:
        return self._sealed

    def seal(self) -> "Graph":
        if not self._sealed:
            self._sealed = True
            # drop defaultdict behaviour so lookups never grow the indexes
            self._by_s = dict(self._by_s)
            self._by_p = dict(self._by_p)
            self._by_o = dict(self._by_o)
            self._by_sp = dict(self._by_sp)
        return self

    def add(self, triple: Triple) -> "Graph":
        if self._sealed:
            raise SealedGraphError("cannot insert into a sealed graph")
        if triple in self._triples:
            return self
        self._triples.add(triple)
        s, p, o = triple
        self._by_s[s].add(triple)
        self._by_p[p].add(triple)
        self._by_o[o].add(triple)
        self._by_sp[(s, p)].add(triple)
        return self

    def insert(self, triple: Triple) -> "Graph":
        return self.add(triple)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=triple_key))

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    @property
    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def match(self, s: object = None, p: Optional[Iri] = None, o: object = None) -> set[Triple]:
        """Triples agreeing with every bound (non-None) position."""
        if s is not None and p is not None:
            candidates = self._by_sp.get((s, p), ())
        elif s is not None:
            candidates = self._by_s.get(s, ())
        elif o is not None:
            candidates = self._by_o.get(o, ())
        elif p is not None:
            candidates = self._by_p.get(p, ())
        else:
            return set(self._triples)
        return {
            t
            for t in candidates
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        }

    def objects(self, s: object, p: Iri) -> set:
        return {t.object for t in self._by_sp.get((s, p), ())}

    def subjects(self) -> set:
        return {s for s, ts in self._by_s.items() if ts}

    def predicates(self) -> set[Iri]:
        return {p for p, ts in self._by_p.items() if ts}

    def by_predicate(self, p: Iri) -> set[Triple]:
        return set(self._by_p.get(p, ()))

    def nodes(self) -> set:
        """Every subject and every non-literal object."""
        out = set(self.subjects())
        out.update(o for o, ts in self._by_o.items() if ts and not isinstance(o, Literal))
        return out

    def filtered(self, keep) -> "Graph":
        """New sealed graph holding the triples for which ``keep`` is true."""
        return Graph.of(t for t in self._triples if keep(t))

    def union(self, *others: "Graph") -> "Graph":
        g = Graph(self._triples)
        for other in others:
            for t in other._triples:
                g.add(t)
        return g.seal()

    def __repr__(self) -> str:
        state = "sealed" if self._sealed else "builder"
        return f"<Graph {len(self)} triples, {state}>"


# --- isomorphism ----------------------------------------------------------------


def _blank_nodes(g: Graph) -> set[BlankNode]:
    out = set()
    for s, _, o in g.triples:
        if isinstance(s, BlankNode):
            out.add(s)
        if isinstance(o, BlankNode):
            out.add(o)
    return out


def _signatures(g: Graph, bnodes: set[BlankNode], rounds: int = 3) -> dict[BlankNode, object]:
    """Colour refinement: each round folds in the neighbours' colours."""
    colour: dict[BlankNode, object] = {b: 0 for b in bnodes}

    def c(term):
        return ("b", colour[term]) if isinstance(term, BlankNode) else ("g", term_key(term))

    for _ in range(rounds):
        nxt = {}
        for b in bnodes:
            out_edges = Counter((t.predicate.value, c(t.object)) for t in g.match(s=b))
            in_edges = Counter((t.predicate.value, c(t.subject)) for t in g.match(o=b))
            nxt[b] = hash((colour[b], tuple(sorted(out_edges.items(), key=repr)), tuple(sorted(in_edges.items(), key=repr))))
        colour = nxt
    return colour


def isomorphic(a: Graph, b: Graph) -> bool:
    """True when a bijection between blank nodes maps ``a`` onto ``b``."""
    if len(a) != len(b):
        return False
    ba, bb = _blank_nodes(a), _blank_nodes(b)
    if len(ba) != len(bb):
        return False
    ground_a = {t for t in a.triples if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}
    ground_b = {t for t in b.triples if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}
    if ground_a != ground_b:
        return False
    if not ba:
        return True

    sig_a, sig_b = _signatures(a, ba), _signatures(b, bb)
    if sorted(Counter(sig_a.values()).items()) != sorted(Counter(sig_b.values()).items()):
        return False

    candidates = {x: [y for y in bb if sig_b[y] == sig_a[x]] for x in ba}
    order = sorted(ba, key=lambda x: (len(candidates[x]), x.id))
    target = b.triples
    rest_a = [t for t in a.triples if t not in ground_a]

    def consistent(mapping: dict) -> bool:
        for t in rest_a:
            s, o = t.subject, t.object
            if (isinstance(s, BlankNode) and s not in mapping) or (isinstance(o, BlankNode) and o not in mapping):
                continue
            if Triple(mapping.get(s, s), t.predicate, mapping.get(o, o)) not in target:
                return False
        return True

    def search(i: int, mapping: dict, used: set) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in candidates[x]:
            if y in used:
                continue
            mapping[x] = y
            used.add(y)
            if consistent(mapping) and search(i + 1, mapping, used):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return search(0, {}, set())
