"""Closed-world instance checking over sealed graphs.

Named classes are satisfied by asserted ``rdf:type`` (up the named subclass
hierarchy) or by membership derived from an ``EquivalentTo`` axiom.  The
derivation runs to a least fixpoint before any query is answered.  There is
no negation, so every answer is monotone in the graph.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .expressions import And, AtLeast, ClassExpression, Named, Or, Some
from .graph import RDF_TYPE, Graph, Iri, Literal, PrefixMap, term_key
from .schema import EXPLANATION_TYPES, Ontology, is_builtin


@dataclass(frozen=True)
class Trace:
    """Per-subexpression verdict.

    For restrictions, ``witnesses`` lists the objects that satisfy the filler
    and ``rejected`` those that do not, each with the filler's own trace.
    """

    expression: ClassExpression
    satisfied: bool
    children: tuple["Trace", ...] = ()
    witnesses: tuple[tuple[object, "Trace"], ...] = ()
    rejected: tuple[tuple[object, "Trace"], ...] = ()
    note: Optional[str] = None

    def to_dict(self, prefixes: PrefixMap) -> dict:
        from .query import render_term
        from .syntax.manchester import serialize_manchester

        out: dict = {
            "expression": serialize_manchester(self.expression, prefixes),
            "satisfied": self.satisfied,
        }
        if self.children:
            out["children"] = [c.to_dict(prefixes) for c in self.children]
        if isinstance(self.expression, (Some, AtLeast)):
            out["witnesses"] = [
                {"node": render_term(n, prefixes), "trace": t.to_dict(prefixes)} for n, t in self.witnesses
            ]
            if self.rejected:
                out["rejected"] = [render_term(n, prefixes) for n, _ in self.rejected]
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class MembershipReport:
    node: object
    expression: ClassExpression
    trace: Trace

    @property
    def satisfied(self) -> bool:
        return self.trace.satisfied

    def to_dict(self, prefixes: PrefixMap) -> dict:
        from .query import render_term

        return {"node": render_term(self.node, prefixes), "satisfied": self.satisfied, "trace": self.trace.to_dict(prefixes)}


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    terms: tuple = ()

    def sort_key(self) -> tuple:
        return (self.severity != "error", self.code, tuple(term_key(t) for t in self.terms), self.message)


class Diagnostics(list):
    """List of :class:`Diagnostic`; empty means the graph passed every check."""

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self if d.severity == "error"]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self if d.severity == "warning"]


class Reasoner:
    """Typing fixpoint and query evaluation for one (ontology, graph) pair.

    The graph must be sealed; the reasoner caches derived types.
    """

    def __init__(self, ont: Ontology, graph: Graph) -> None:
        if not graph.sealed:
            raise ValueError("reasoning requires a sealed graph")
        self.ont = ont
        self.graph = graph
        self.nodes = graph.nodes()
        self._types: dict[object, set[Iri]] = defaultdict(set)
        self._members: dict[Iri, set[object]] = defaultdict(set)
        self.asserted: dict[object, frozenset[Iri]] = {}
        self.rounds = 0
        self._saturate()

    # typing

    def _closure(self, cls: Iri) -> frozenset[Iri]:
        return self.ont.superclasses(cls) if cls in self.ont.classes else frozenset({cls})

    def _add_type(self, node, cls: Iri) -> bool:
        if cls in self._types[node]:
            return False
        for c in self._closure(cls):
            if c not in self._types[node]:
                self._types[node].add(c)
                self._members[c].add(node)
        return True

    def _saturate(self) -> None:
        asserted: dict[object, set[Iri]] = defaultdict(set)
        for t in self.graph.by_predicate(RDF_TYPE):
            if isinstance(t.object, Iri):
                asserted[t.subject].add(t.object)
                self._add_type(t.subject, t.object)
        self.asserted = {n: frozenset(cs) for n, cs in asserted.items()}
        changed = True
        while changed:
            changed = False
            self.rounds += 1
            for cls, expr in self.ont.equivalences:
                for node in self.extension(expr):
                    if self._add_type(node, cls):
                        changed = True

    def types(self, node) -> frozenset[Iri]:
        return frozenset(self._types.get(node, ()))

    def derived(self, node) -> frozenset[Iri]:
        """Classes the node belongs to only through an equivalence axiom."""
        base: set[Iri] = set()
        for c in self.asserted.get(node, ()):
            base |= self._closure(c)
        return self.types(node) - base

    # set-at-a-time evaluation

    def extension(self, expr: ClassExpression) -> set:
        if isinstance(expr, Named):
            if expr.iri not in self.ont.classes:
                return set()
            return set(self._members.get(expr.iri, ()))
        if isinstance(expr, And):
            sets = sorted((self.extension(op) for op in expr.operands), key=len)
            out = sets[0]
            for s in sets[1:]:
                out = out & s
            return out
        if isinstance(expr, Or):
            out = set()
            for op in expr.operands:
                out |= self.extension(op)
            return out
        if isinstance(expr, Some):
            fill = self.extension(expr.filler)
            return {t.subject for t in self.graph.by_predicate(expr.property) if t.object in fill}
        if isinstance(expr, AtLeast):
            fill = self.extension(expr.filler)
            counts: dict[object, int] = defaultdict(int)
            for t in self.graph.by_predicate(expr.property):
                if t.object in fill:
                    counts[t.subject] += 1
            return {s for s, n in counts.items() if n >= expr.n}
        raise TypeError(f"not a class expression: {expr!r}")

    def instances_of(self, expr: ClassExpression) -> list:
        return sorted(self.extension(expr), key=term_key)

    # per-node evaluation with explanation

    def trace(self, node, expr: ClassExpression) -> Trace:
        if isinstance(expr, Named):
            if expr.iri not in self.ont.classes:
                return Trace(expr, False, note=f"warning: undeclared class {expr.iri}")
            ok = expr.iri in self._types.get(node, ())
            return Trace(expr, ok, note="derived" if ok and expr.iri in self.derived(node) else None)
        if isinstance(expr, (And, Or)):
            kids = tuple(self.trace(node, op) for op in expr.operands)
            verdicts = [k.satisfied for k in kids]
            ok = all(verdicts) if isinstance(expr, And) else any(verdicts)
            return Trace(expr, ok, children=kids)
        if isinstance(expr, (Some, AtLeast)):
            need = 1 if isinstance(expr, Some) else expr.n
            good, bad = [], []
            objects = sorted(self.graph.objects(node, expr.property), key=term_key)
            for o in objects:
                sub = self.trace(o, expr.filler)
                (good if sub.satisfied else bad).append((o, sub))
            ok = len(good) >= need
            note = None
            if not ok:
                if not objects:
                    note = "no values for this property"
                elif not good:
                    note = "no value satisfies the filler"
                else:
                    note = f"only {len(good)} of {need} required values satisfy the filler"
            if expr.property not in self.ont.properties and not is_builtin(expr.property):
                note = f"warning: undeclared property {expr.property}" + (f"; {note}" if note else "")
            return Trace(expr, ok, witnesses=tuple(good), rejected=tuple(bad), note=note)
        raise TypeError(f"not a class expression: {expr!r}")

    def check(self, node, expr: ClassExpression) -> MembershipReport:
        return MembershipReport(node, expr, self.trace(node, expr))

    # classification and validation

    def classify(self, types: tuple[Iri, ...] = EXPLANATION_TYPES) -> dict[object, frozenset[Iri]]:
        wanted = set(types)
        out = {}
        for node in sorted(self.nodes, key=term_key):
            hit = frozenset(self._types.get(node, set()) & wanted)
            if hit:
                out[node] = hit
        return out

    def validate(self, prefixes: PrefixMap | None = None) -> Diagnostics:
        """Diagnostics sorted errors first.  ``prefixes`` only affects how
        terms are written inside messages."""
        from .query import render_term
        from .syntax.manchester import serialize_manchester

        ont = self.ont
        prefixes = prefixes or ont.prefixes

        def r(term) -> str:
            return render_term(term, prefixes)

        diags: list[Diagnostic] = []
        for node in sorted(self.nodes, key=term_key):
            types = self._types.get(node, set())
            for group in ont.disjoint_sets:
                clash = sorted(group & types, key=term_key)
                if len(clash) > 1:
                    names = ", ".join(ont.label(c) for c in clash)
                    diags.append(Diagnostic("error", "disjointness-violation", f"{r(node)} is typed with disjoint classes {names}", (node, *clash)))
        for t in self.graph:
            p = t.predicate
            if not is_builtin(p) and p not in ont.properties:
                diags.append(Diagnostic("warning", "unknown-term", f"undeclared predicate {r(p)}", (p, t.subject)))
            if p == RDF_TYPE:
                o = t.object
                if isinstance(o, Literal):
                    diags.append(Diagnostic("error", "bad-type", f"rdf:type value of {r(t.subject)} is a literal", (t.subject,)))
                elif isinstance(o, Iri) and not is_builtin(o) and o not in ont.classes:
                    diags.append(Diagnostic("warning", "unknown-term", f"undeclared class {r(o)}", (o, t.subject)))
        for node in sorted(self.nodes, key=term_key):
            types = self._types.get(node, set())
            for cls in sorted(types, key=term_key):
                for restriction in ont.restrictions(cls):
                    if not self.trace(node, restriction).satisfied:
                        text = serialize_manchester(restriction, prefixes)
                        diags.append(Diagnostic("warning", "necessary-condition-unmet", f"{r(node)} is typed {r(cls)} but lacks: {text}", (node, cls)))
            for cls in sorted(self.asserted.get(node, ()), key=term_key):
                expr = ont.equivalent(cls)
                if expr is not None and not self.trace(node, expr).satisfied:
                    diags.append(Diagnostic("warning", "equivalence-unmet", f"{r(node)} is asserted {r(cls)} but its sufficiency condition does not hold", (node, cls)))
        # a predicate may be reported once per subject; collapse exact repeats
        unique = {(d.severity, d.code, d.message, d.terms): d for d in diags}
        return Diagnostics(sorted(unique.values(), key=Diagnostic.sort_key))


# --- functional API --------------------------------------------------------------


def superclasses(ont: Ontology, cls: Iri) -> frozenset[Iri]:
    return ont.superclasses(cls)


def check_membership(ont: Ontology, graph: Graph, node, expr: ClassExpression) -> MembershipReport:
    return Reasoner(ont, graph).check(node, expr)


def instances_of(ont: Ontology, graph: Graph, expr: ClassExpression) -> list:
    return Reasoner(ont, graph).instances_of(expr)


def classify_explanations(ont: Ontology, graph: Graph) -> dict[object, frozenset[Iri]]:
    return Reasoner(ont, graph).classify()


def validate_graph(ont: Ontology, graph: Graph) -> Diagnostics:
    return Reasoner(ont, graph).validate()


def strip_explanation_types(graph: Graph, types: tuple[Iri, ...] = EXPLANATION_TYPES) -> Graph:
    """Copy of ``graph`` without asserted memberships in the given types."""
    drop = set(types)
    return graph.filtered(lambda t: not (t.predicate == RDF_TYPE and t.object in drop))


def witness_pairs(trace: Trace) -> list[tuple[object, object]]:
    """(outer, inner) pairs from nested restriction witnesses, depth first."""
    out = []

    def walk(tr: Trace, parent) -> None:
        for node, sub in tr.witnesses:
            if parent is not None:
                out.append((parent, node))
            walk(sub, node)
        for kid in tr.children:
            walk(kid, parent)

    walk(trace, None)
    return out


def class_witnesses(trace: Trace) -> list[tuple[Iri, object]]:
    """(class, node) pairs: named classes met by restriction witnesses.

    For the contrastive condition this yields pairs such as
    ``(eo:Fact, :GuidelineEvidence)``.
    """
    out: list[tuple[Iri, object]] = []

    def walk(tr: Trace, node) -> None:
        if isinstance(tr.expression, Named):
            if tr.satisfied and node is not None and (tr.expression.iri, node) not in out:
                out.append((tr.expression.iri, node))
            return
        for kid in tr.children:
            if kid.satisfied:
                walk(kid, node)
        for w, sub in tr.witnesses:
            walk(sub, w)

    walk(trace, None)
    return out
