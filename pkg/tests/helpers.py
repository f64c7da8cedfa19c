"""Random generators and an independent reference evaluator for the tests."""

from __future__ import annotations

import random
import re
from pathlib import Path

from eokit.expressions import And, AtLeast, Named, Or, Some
from eokit.graph import RDF_TYPE, RDFS_LABEL, BlankNode, Graph, Iri, Literal, Triple
from eokit.schema import EquivalentTo, SubClassOf, builtin_ontology, eo, ep, prov, sio

FIXTURES = Path(__file__).parent / "fixtures"
EX = "http://example.org/t#"


def fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def squash(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()


# --- random data ------------------------------------------------------------------

ONT = builtin_ontology()
CLASS_POOL = sorted(
    [
        eo("SystemRecommendation"),
        eo("Knowledge"),
        eo("ContextualKnowledge"),
        eo("ScientificKnowledge"),
        eo("Fact"),
        eo("Foil"),
        eo("NumericalEvidence"),
        eo("SystemTrace"),
        eo("ObjectRecord"),
        eo("Study"),
        eo("ScientificMethod"),
        eo("AITask"),
        eo("InductiveTask"),
        ep("Situation"),
        ep("Explanation"),
        eo("ContrastiveExplanation"),
        eo("ContextualExplanation"),
        eo("StatisticalExplanation"),
    ],
    key=lambda i: i.value,
)
PROPERTY_POOL = [
    ep("isBasedOn"),
    prov("used"),
    sio("inRelationTo"),
    prov("wasGeneratedBy"),
    prov("wasAssociatedWith"),
]


def random_graph(rng: random.Random, max_nodes: int = 30, max_triples: int = 120) -> Graph:
    n = rng.randint(1, max_nodes)
    nodes = [Iri(f"{EX}n{i}") if rng.random() < 0.8 else BlankNode(f"r{i}") for i in range(n)]
    triples = set()
    for _ in range(rng.randint(0, max_triples)):
        s = rng.choice(nodes)
        roll = rng.random()
        if roll < 0.4:
            triples.add(Triple(s, RDF_TYPE, rng.choice(CLASS_POOL)))
        elif roll < 0.95:
            triples.add(Triple(s, rng.choice(PROPERTY_POOL), rng.choice(nodes)))
        else:
            triples.add(Triple(s, RDFS_LABEL, Literal(f"label {rng.randint(0, 9)}")))
        if len(triples) >= max_triples:
            break
    return Graph.of(triples)


def random_expression(rng: random.Random, depth: int = 5, top: bool = True):
    if depth <= 1 or (not top and rng.random() < 0.25):
        return Named(rng.choice(CLASS_POOL))
    kind = rng.choice(["and", "or", "some", "some", "min"])
    if kind in ("and", "or"):
        ops = [random_expression(rng, depth - 1, False) for _ in range(rng.randint(2, 3))]
        return And(*ops) if kind == "and" else Or(*ops)
    filler = random_expression(rng, depth - 1, False)
    prop = rng.choice(PROPERTY_POOL)
    if kind == "some":
        return Some(prop, filler)
    return AtLeast(rng.randint(1, 3), prop, filler)


# --- naive reference evaluator --------------------------------------------------------


class NaiveEvaluator:
    """Per-node recursive membership, written without the library's reasoner.

    Type closure walks SubClassOf axioms directly; equivalences are applied
    one node at a time until nothing changes.
    """

    def __init__(self, ont, graph: Graph) -> None:
        self.ont = ont
        self.graph = list(graph)
        self.parents: dict[Iri, set[Iri]] = {}
        for ax in ont.axioms:
            if isinstance(ax, SubClassOf) and isinstance(ax.sup, Named):
                self.parents.setdefault(ax.sub, set()).add(ax.sup.iri)
        self.equivalences = [(ax.cls, ax.expr) for ax in ont.axioms if isinstance(ax, EquivalentTo)]
        self.nodes = set()
        for t in self.graph:
            self.nodes.add(t.subject)
            if not isinstance(t.object, Literal):
                self.nodes.add(t.object)
        self.types: dict[object, set[Iri]] = {n: set() for n in self.nodes}
        for t in self.graph:
            if t.predicate == RDF_TYPE and isinstance(t.object, Iri) and t.object in ont.classes:
                self.types[t.subject] |= self.up(t.object)
        changed = True
        while changed:
            changed = False
            for node in sorted(self.nodes, key=str):
                for cls, expr in self.equivalences:
                    if cls not in self.types[node] and self.holds(node, expr):
                        self.types[node] |= self.up(cls)
                        changed = True

    def up(self, cls: Iri) -> set[Iri]:
        seen = {cls}
        todo = [cls]
        while todo:
            c = todo.pop()
            for p in self.parents.get(c, ()):
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        return seen

    def values(self, node, prop: Iri) -> list:
        return [t.object for t in self.graph if t.subject == node and t.predicate == prop]

    def holds(self, node, expr) -> bool:
        if isinstance(expr, Named):
            return expr.iri in self.types.get(node, set())
        if isinstance(expr, And):
            return all(self.holds(node, e) for e in expr.operands)
        if isinstance(expr, Or):
            return any(self.holds(node, e) for e in expr.operands)
        if isinstance(expr, Some):
            return any(self.holds(o, expr.filler) for o in self.values(node, expr.property))
        if isinstance(expr, AtLeast):
            return sum(1 for o in set(self.values(node, expr.property)) if self.holds(o, expr.filler)) >= expr.n
        raise TypeError(expr)


def witness_graph(condition, available=None, choose=None, prefix: str = "w") -> tuple[Iri, Graph]:
    """A small graph whose root realizes ``condition``.

    ``available(cls)`` says which named classes may be used; an Or takes its
    first operand made only of usable classes.  ``choose(cls)`` picks the
    class actually asserted for a leaf (e.g. a producible subclass).
    """
    from eokit.expressions import named_classes

    available = available or (lambda c: True)
    choose = choose or (lambda c: c)
    counter = [0]
    triples: list[Triple] = []

    def fresh() -> Iri:
        counter[0] += 1
        return Iri(f"{EX}{prefix}{counter[0]}")

    def realize(node, expr) -> None:
        if isinstance(expr, Named):
            triples.append(Triple(node, RDF_TYPE, choose(expr.iri)))
        elif isinstance(expr, And):
            for e in expr.operands:
                realize(node, e)
        elif isinstance(expr, Or):
            usable = [e for e in expr.operands if all(available(c) for c in named_classes(e))]
            realize(node, (usable or expr.operands)[0])
        elif isinstance(expr, Some):
            o = fresh()
            triples.append(Triple(node, expr.property, o))
            realize(o, expr.filler)
        elif isinstance(expr, AtLeast):
            for _ in range(expr.n):
                o = fresh()
                triples.append(Triple(node, expr.property, o))
                realize(o, expr.filler)

    root = Iri(f"{EX}{prefix}root")
    realize(root, condition)
    return root, Graph.of(triples)

