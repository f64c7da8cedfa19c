"""The explanation ontology: vocabulary, axioms, the nine explanation types
and the seed knowledge base used by the recommender."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Optional, Union

from .errors import OntologyError, UnknownClass, UnknownExplanationType
from .expressions import And, AtLeast, ClassExpression, Named, Or, Some, named_classes, properties
from .graph import (
    EO,
    EP,
    OWL,
    PROV,
    RDF,
    RDF_TYPE,
    RDFS,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
    SIO,
    Graph,
    Iri,
    Literal,
    PrefixMap,
    base_prefixes,
    term_key,
)
from .syntax.names import Names, normalize_label


def eo(local: str) -> Iri:
    return Iri(EO + local)


def ep(local: str) -> Iri:
    return Iri(EP + local)


def sio(local: str) -> Iri:
    return Iri(SIO + local)


def prov(local: str) -> Iri:
    return Iri(PROV + local)


# --- axioms -------------------------------------------------------------------


@dataclass(frozen=True)
class ClassDeclaration:
    iri: Iri


@dataclass(frozen=True)
class PropertyDeclaration:
    iri: Iri


@dataclass(frozen=True)
class SubClassOf:
    sub: Iri
    sup: ClassExpression


@dataclass(frozen=True)
class EquivalentTo:
    cls: Iri
    expr: ClassExpression


@dataclass(frozen=True)
class DisjointClasses:
    classes: frozenset


Axiom = Union[ClassDeclaration, PropertyDeclaration, SubClassOf, EquivalentTo, DisjointClasses]

# predicates and classes every graph may use without declaring them
BUILTIN_NAMESPACES = (RDF, RDFS, OWL)


def is_builtin(iri: Iri) -> bool:
    return iri.value.startswith(BUILTIN_NAMESPACES)


class Ontology:
    """Axioms plus label and alias tables.

    Construction checks that every IRI used in an axiom is declared and that
    the named subclass relation is acyclic.
    """

    def __init__(
        self,
        axioms: Iterable[Axiom],
        prefixes: PrefixMap | None = None,
        labels: Mapping[Iri, str] | None = None,
        individuals: Mapping[Iri, Iri] | None = None,
        default_terms: Mapping[str, Iri] | None = None,
    ) -> None:
        self.axioms: tuple[Axiom, ...] = tuple(axioms)
        self.prefixes = prefixes.copy() if prefixes is not None else base_prefixes()
        self.labels: dict[Iri, str] = dict(labels or {})
        self.individuals: dict[Iri, Iri] = dict(individuals or {})
        self.classes = frozenset(a.iri for a in self.axioms if isinstance(a, ClassDeclaration))
        self.properties = frozenset(a.iri for a in self.axioms if isinstance(a, PropertyDeclaration))
        self._parents: dict[Iri, set[Iri]] = {c: set() for c in self.classes}
        self._restrictions: dict[Iri, list[ClassExpression]] = {}
        self._equivalences: list[tuple[Iri, ClassExpression]] = []
        self._disjoint: list[frozenset] = []
        for ax in self.axioms:
            self._check_declared(ax)
            if isinstance(ax, SubClassOf):
                if isinstance(ax.sup, Named):
                    self._parents[ax.sub].add(ax.sup.iri)
                else:
                    self._restrictions.setdefault(ax.sub, []).append(ax.sup)
            elif isinstance(ax, EquivalentTo):
                if not isinstance(ax.cls, Iri):
                    raise OntologyError("EquivalentTo needs a named class on the left")
                self._equivalences.append((ax.cls, ax.expr))
            elif isinstance(ax, DisjointClasses):
                self._disjoint.append(frozenset(ax.classes))
        for ind, cls in self.individuals.items():
            if cls not in self.classes:
                raise OntologyError(f"individual {ind} typed with undeclared class {cls}")
        self._check_acyclic()
        self._closure: dict[Iri, frozenset[Iri]] = {}
        self.names = self._build_names(default_terms or {})

    # construction helpers

    def _check_declared(self, ax: Axiom) -> None:
        used_classes: list[Iri] = []
        used_props: list[Iri] = []
        if isinstance(ax, SubClassOf):
            used_classes.append(ax.sub)
            used_classes.extend(named_classes(ax.sup))
            used_props.extend(properties(ax.sup))
        elif isinstance(ax, EquivalentTo):
            used_classes.append(ax.cls)
            used_classes.extend(named_classes(ax.expr))
            used_props.extend(properties(ax.expr))
        elif isinstance(ax, DisjointClasses):
            used_classes.extend(ax.classes)
        for c in used_classes:
            if c not in self.classes:
                raise OntologyError(f"undeclared class {c} in {type(ax).__name__}")
        for p in used_props:
            if p not in self.properties:
                raise OntologyError(f"undeclared property {p} in {type(ax).__name__}")

    def _check_acyclic(self) -> None:
        state: dict[Iri, int] = {}

        def visit(c: Iri, path: list[Iri]) -> None:
            state[c] = 1
            for p in sorted(self._parents.get(c, ()), key=term_key):
                if state.get(p) == 1:
                    cycle = " -> ".join(str(x) for x in path + [c, p])
                    raise OntologyError(f"subclass cycle: {cycle}")
                if p not in state:
                    visit(p, path + [c])
            state[c] = 2

        for c in sorted(self._parents, key=term_key):
            if c not in state:
                visit(c, [])

    def _build_names(self, default_terms: Mapping[str, Iri]) -> Names:
        aliases: dict[str, Iri] = {}
        owners: dict[str, Iri] = {}
        for iri in sorted(self.classes | self.properties | set(self.individuals), key=term_key):
            keys = {normalize_label(self.local_name(iri))}
            if iri in self.labels:
                keys.add(normalize_label(self.labels[iri]))
            for key in keys:
                if key in owners and owners[key] != iri:
                    raise OntologyError(f"label {key!r} names both {owners[key]} and {iri}")
                owners[key] = iri
                aliases[key] = iri
        return Names(aliases=aliases, default_terms=dict(default_terms))

    # lookups

    @staticmethod
    def local_name(iri: Iri) -> str:
        v = iri.value
        cut = max(v.rfind("#"), v.rfind("/"))
        return v[cut + 1:]

    def label(self, iri: Iri) -> str:
        return self.labels.get(iri, self.local_name(iri))

    def declared(self, iri: Iri) -> bool:
        return iri in self.classes or iri in self.properties or iri in self.individuals

    def parents(self, cls: Iri) -> frozenset[Iri]:
        return frozenset(self._parents.get(cls, ()))

    def superclasses(self, cls: Iri) -> frozenset[Iri]:
        """Reflexive-transitive closure over named SubClassOf axioms."""
        if cls not in self.classes:
            raise UnknownClass(cls)
        hit = self._closure.get(cls)
        if hit is None:
            seen = {cls}
            stack = [cls]
            while stack:
                for p in self._parents.get(stack.pop(), ()):
                    if p not in seen:
                        seen.add(p)
                        stack.append(p)
            hit = self._closure[cls] = frozenset(seen)
        return hit

    def subclasses(self, cls: Iri) -> frozenset[Iri]:
        if cls not in self.classes:
            raise UnknownClass(cls)
        return frozenset(c for c in self.classes if cls in self.superclasses(c))

    def restrictions(self, cls: Iri) -> tuple[ClassExpression, ...]:
        return tuple(self._restrictions.get(cls, ()))

    @property
    def equivalences(self) -> tuple[tuple[Iri, ClassExpression], ...]:
        return tuple(self._equivalences)

    def equivalent(self, cls: Iri) -> Optional[ClassExpression]:
        for c, e in self._equivalences:
            if c == cls:
                return e
        return None

    @property
    def disjoint_sets(self) -> tuple[frozenset, ...]:
        return tuple(self._disjoint)

    def extended(
        self,
        classes: Iterable[Iri] = (),
        subclass_of: Iterable[tuple[Iri, Iri]] = (),
        labels: Mapping[Iri, str] | None = None,
        individuals: Mapping[Iri, Iri] | None = None,
    ) -> "Ontology":
        """Copy with extra named classes, subclass links, labels and individuals."""
        extra: list[Axiom] = [ClassDeclaration(c) for c in classes if c not in self.classes]
        extra += [SubClassOf(sub, Named(sup)) for sub, sup in subclass_of]
        merged_labels = dict(self.labels)
        merged_labels.update(labels or {})
        merged_ind = dict(self.individuals)
        merged_ind.update(individuals or {})
        return Ontology(
            self.axioms + tuple(extra),
            self.prefixes,
            merged_labels,
            merged_ind,
            self.names.default_terms,
        )

    def __repr__(self) -> str:
        return f"<Ontology {len(self.classes)} classes, {len(self.properties)} properties, {len(self.axioms)} axioms>"


# --- vocabulary -------------------------------------------------------------------

EXPLANATION = ep("Explanation")
SYSTEM_RECOMMENDATION = eo("SystemRecommendation")
AI_TASK = eo("AITask")
AI_METHOD = eo("AIMethod")
REASONING_MODE = eo("ReasoningMode")
KNOWLEDGE = eo("Knowledge")
FACT = eo("Fact")
FOIL = eo("Foil")

IS_BASED_ON = ep("isBasedOn")
IS_CONCEPTUALIZED_BY = ep("isConceptualizedBy")
IN_RELATION_TO = sio("inRelationTo")
USED = prov("used")
WAS_GENERATED_BY = prov("wasGeneratedBy")
WAS_ASSOCIATED_WITH = prov("wasAssociatedWith")

# overlay vocabulary for the seed knowledge base
GENERATION_RECIPE = eo("GenerationRecipe")
CONTEXT_RULE = eo("ContextRule")
FOR_EXPLANATION_TYPE = eo("forExplanationType")
USES_TASK = eo("usesTask")
USES_METHOD = eo("usesMethod")
EXAMPLE_QUESTION = eo("exampleQuestion")
REQUIRES_CONTEXT = eo("requiresContext")

_CLASSES: dict[Iri, tuple[str, Optional[Iri]]] = {
    # iri: (label, named parent)
    EXPLANATION: ("Explanation", sio("computationalEntity")),
    sio("computationalEntity"): ("computational entity", None),
    SYSTEM_RECOMMENDATION: ("System Recommendation", None),
    AI_TASK: ("AI Task", None),
    eo("DeductiveTask"): ("Deductive Task", AI_TASK),
    eo("InductiveTask"): ("Inductive Task", AI_TASK),
    eo("AbductiveTask"): ("Abductive Task", AI_TASK),
    eo("AbstractionTask"): ("Abstraction Task", AI_TASK),
    eo("RankingTask"): ("Ranking Task", AI_TASK),
    AI_METHOD: ("AI Method", None),
    eo("KnowledgeBasedSystem"): ("Knowledge-based systems", AI_METHOD),
    eo("DecisionTree"): ("Machine learning model: decision trees", AI_METHOD),
    eo("Clustering"): ("Clustering", AI_METHOD),
    REASONING_MODE: ("Reasoning Mode", None),
    eo("User"): ("User", None),
    sio("question"): ("question", None),
    sio("patient"): ("patient", None),
    eo("ObjectRecord"): ("Object Record", None),
    ep("Situation"): ("Situation", None),
    eo("ExplanationModality"): ("Explanation Modality", None),
    KNOWLEDGE: ("Knowledge", None),
    eo("ContextualKnowledge"): ("Contextual Knowledge", KNOWLEDGE),
    eo("ScientificKnowledge"): ("Scientific Knowledge", KNOWLEDGE),
    eo("EverydayKnowledge"): ("Everyday Knowledge", KNOWLEDGE),
    eo("NumericalEvidence"): ("Numerical Evidence", KNOWLEDGE),
    eo("SystemTrace"): ("System Trace", KNOWLEDGE),
    eo("AlternativeInput"): ("Alternative Input", KNOWLEDGE),
    eo("Simulation"): ("Simulation", KNOWLEDGE),
    FACT: ("Fact", None),
    FOIL: ("Foil", None),
    eo("ScientificMethod"): ("Scientific Method", None),
    eo("Study"): ("Study", None),
    GENERATION_RECIPE: ("Generation Recipe", None),
    CONTEXT_RULE: ("Context Rule", None),
}

_PROPERTIES: dict[Iri, str] = {
    IS_BASED_ON: "is based on",
    IS_CONCEPTUALIZED_BY: "is conceptualized by",
    ep("hasSetting"): "has setting",
    eo("implements"): "implements",
    eo("addresses"): "addresses",
    IN_RELATION_TO: "in relation to",
    sio("hasOutput"): "has output",
    sio("isInputIn"): "is input in",
    USED: "used",
    WAS_GENERATED_BY: "was generated by",
    WAS_ASSOCIATED_WITH: "was associated with",
    RDFS_LABEL: "label",
    FOR_EXPLANATION_TYPE: "for explanation type",
    USES_TASK: "uses task",
    USES_METHOD: "uses method",
    EXAMPLE_QUESTION: "example question",
    REQUIRES_CONTEXT: "requires context",
}

REASONING_MODES: dict[Iri, str] = {
    eo("TreatmentPlanning"): "Treatment Planning",
    eo("DifferentialDiagnosis"): "Differential Diagnosis",
    eo("PlanCritiquing"): "Plan Critiquing",
}


# --- the nine explanation types --------------------------------------------------


def _R() -> Some:
    return Some(IS_BASED_ON, Named(SYSTEM_RECOMMENDATION))


def _scientific_support() -> And:
    return And(
        Named(eo("ScientificKnowledge")),
        Or(
            Some(WAS_GENERATED_BY, Named(eo("Study"))),
            Some(WAS_ASSOCIATED_WITH, Named(eo("ScientificMethod"))),
        ),
    )


def _rec_using(cls: Iri) -> Some:
    return Some(IS_BASED_ON, And(Named(SYSTEM_RECOMMENDATION), Some(USED, Named(cls))))


def _conditions() -> dict[str, ClassExpression]:
    ck = Named(eo("ContextualKnowledge"))
    return {
        "case-based": And(
            _R(),
            Some(IS_BASED_ON, And(Named(eo("ObjectRecord")), Some(IN_RELATION_TO, Named(ep("Situation"))))),
        ),
        "contextual": And(
            _R(),
            Or(
                Some(IS_BASED_ON, And(ck, Some(IN_RELATION_TO, Named(ep("Situation"))))),
                Some(IS_BASED_ON, And(ck, Some(IN_RELATION_TO, Named(eo("ObjectRecord"))))),
            ),
        ),
        "contrastive": And(_rec_using(FACT), _rec_using(FOIL)),
        "counterfactual": And(
            AtLeast(2, IS_BASED_ON, Named(SYSTEM_RECOMMENDATION)),
            _rec_using(eo("AlternativeInput")),
        ),
        "everyday": And(
            _R(),
            Some(IS_BASED_ON, And(Named(eo("EverydayKnowledge")), Some(IN_RELATION_TO, Named(eo("User"))))),
        ),
        "scientific": Or(
            And(Some(IS_BASED_ON, _scientific_support()), _R()),
            Some(
                IS_BASED_ON,
                And(Named(SYSTEM_RECOMMENDATION), Some(USED, _scientific_support())),
            ),
        ),
        "simulation-based": And(
            _R(),
            Some(IS_BASED_ON, And(Named(eo("Simulation")), Some(IN_RELATION_TO, Named(ep("Situation"))))),
        ),
        "statistical": _rec_using(eo("NumericalEvidence")),
        "trace-based": _rec_using(eo("SystemTrace")),
    }


@dataclass(frozen=True)
class ExplanationTypeSpec:
    cls: Iri
    token: str
    label: str
    description: str
    question: str
    condition: ClassExpression
    provenance: str


_PUBLISHED = "OWL restriction as published with the ontology"
_FORMALIZED = "formalized from the natural-language sufficiency criterion"

# token, class local name, label, description, prototypical question, provenance
_TYPE_TABLE = [
    (
        "case-based",
        "CaseBasedExplanation",
        "Case Based Explanation",
        "Supports the conclusion with actual prior cases that resemble the current situation.",
        "To what other situations has this recommendation been applied?",
        _FORMALIZED,
    ),
    (
        "contextual",
        "ContextualExplanation",
        "Contextual Explanation",
        "Brings in information beyond the explicit inputs and output: the user, the situation, the environment.",
        "What broader information about the current situation prompted the suggestion of this recommendation?",
        _PUBLISHED,
    ),
    (
        "contrastive",
        "ContrastiveExplanation",
        "Contrastive Explanation",
        "Sets the chosen output and its supporting facts against an alternative output and its foil.",
        "Why choose option A over option B that I typically choose?",
        _FORMALIZED,
    ),
    (
        "counterfactual",
        "CounterfactualExplanation",
        "Counterfactual Explanation",
        "Reports the outcome the system would reach from a different set of inputs.",
        "What if input A was over 1000?",
        _FORMALIZED + "; introduces eo:AlternativeInput",
    ),
    (
        "everyday",
        "EverydayExplanation",
        "Everyday Explanation",
        "Relies on accounts of the world that match what the user already understands.",
        "Why does option A make sense",
        _FORMALIZED + "; introduces eo:EverydayKnowledge",
    ),
    (
        "scientific",
        "ScientificExplanation",
        "Scientific Explanation",
        "Cites results of rigorous scientific methods, observations and measurements.",
        "What studies have backed this recommendation?",
        _PUBLISHED,
    ),
    (
        "simulation-based",
        "SimulationBasedExplanation",
        "Simulation Based Explanation",
        "Runs an imitation of the system or process and reports what emerges from similar inputs.",
        "What would happen if this recommendation is followed?",
        _FORMALIZED + "; introduces eo:Simulation",
    ),
    (
        "statistical",
        "StatisticalExplanation",
        "Statistical Explanation",
        "Gives numerical evidence about how likely the factors behind the outcome are.",
        "What percentage of people with this condition have recovered?",
        _FORMALIZED + "; introduces eo:NumericalEvidence",
    ),
    (
        "trace-based",
        "TraceBasedExplanation",
        "Trace Based Explanation",
        "Lays out the sequence of steps the system took to reach the result.",
        "What steps were taken by the system to generate this recommendation?",
        _FORMALIZED + "; introduces eo:SystemTrace",
    ),
]

TYPE_TOKENS: dict[str, Iri] = {row[0]: eo(row[1]) for row in _TYPE_TABLE}
EXPLANATION_TYPES: tuple[Iri, ...] = tuple(TYPE_TOKENS.values())
_TOKEN_OF = {v: k for k, v in TYPE_TOKENS.items()}
_BY_LABEL = {normalize_label(row[2]): eo(row[1]) for row in _TYPE_TABLE}


def type_token(cls: Iri) -> str:
    try:
        return _TOKEN_OF[cls]
    except KeyError:
        raise UnknownExplanationType(cls) from None


def resolve_type(name: str | Iri, ont: Ontology | None = None) -> Iri:
    """Accept a kebab-case token, a label, a CURIE or an Iri naming one of the nine types."""
    if isinstance(name, Iri):
        iri = name
    elif name in TYPE_TOKENS:
        return TYPE_TOKENS[name]
    elif normalize_label(name) in _BY_LABEL:
        return _BY_LABEL[normalize_label(name)]
    else:
        prefixes = ont.prefixes if ont is not None else base_prefixes()
        try:
            iri = prefixes.expand(name)
        except (ValueError, KeyError):
            raise UnknownExplanationType(name) from None
    if iri not in _TOKEN_OF:
        raise UnknownExplanationType(name)
    return iri


@functools.lru_cache(maxsize=None)
def builtin_ontology() -> Ontology:
    axioms: list[Axiom] = []
    labels: dict[Iri, str] = {}
    for iri, (label, _) in _CLASSES.items():
        axioms.append(ClassDeclaration(iri))
        labels[iri] = label
    for token, local, label, *_ in _TYPE_TABLE:
        axioms.append(ClassDeclaration(eo(local)))
        labels[eo(local)] = label
    for iri, label in _PROPERTIES.items():
        axioms.append(PropertyDeclaration(iri))
        labels[iri] = label

    for iri, (_, parent) in _CLASSES.items():
        if parent is not None:
            axioms.append(SubClassOf(iri, Named(parent)))
    axioms += [
        SubClassOf(EXPLANATION, Some(IS_BASED_ON, Named(KNOWLEDGE))),
        SubClassOf(EXPLANATION, Some(IS_BASED_ON, Named(SYSTEM_RECOMMENDATION))),
        SubClassOf(EXPLANATION, Some(IS_CONCEPTUALIZED_BY, Named(AI_TASK))),
    ]
    conditions = _conditions()
    for token, local, *_ in _TYPE_TABLE:
        axioms.append(SubClassOf(eo(local), Named(EXPLANATION)))
        axioms.append(EquivalentTo(eo(local), conditions[token]))
    axioms.append(DisjointClasses(frozenset({FACT, FOIL})))

    labels.update(REASONING_MODES)
    individuals = {iri: REASONING_MODE for iri in REASONING_MODES}
    return Ontology(
        axioms,
        base_prefixes(),
        labels,
        individuals,
        default_terms={"addresses": eo("addresses"), "implements": eo("implements")},
    )


def explanation_types(ont: Ontology | None = None) -> list[ExplanationTypeSpec]:
    """The nine types, in the order case based ... trace based."""
    ont = ont or builtin_ontology()
    out = []
    for token, local, label, description, question, provenance in _TYPE_TABLE:
        cls = eo(local)
        condition = ont.equivalent(cls)
        if condition is None:
            raise OntologyError(f"{cls} has no sufficiency condition")
        out.append(ExplanationTypeSpec(cls, token, ont.label(cls) or label, description, question, condition, provenance))
    return out


def explanation_type(ont: Ontology | None, name: str | Iri) -> ExplanationTypeSpec:
    iri = resolve_type(name, ont)
    for spec in explanation_types(ont):
        if spec.cls == iri:
            return spec
    raise UnknownExplanationType(name)


def sufficiency_condition(ont: Ontology | None, type_: str | Iri) -> ClassExpression:
    return explanation_type(ont, type_).condition


# --- seed knowledge base ---------------------------------------------------------


@dataclass(frozen=True)
class SeedKnowledgeBase:
    """Lookup tables consulted by the recommender.

    ``context_rules`` holds, per type, alternative sets of context classes;
    a profile matches a type's rule when it covers any one of the sets.
    """

    generation: Mapping[Iri, frozenset] = field(default_factory=dict)
    example_questions: Mapping[Iri, tuple[str, ...]] = field(default_factory=dict)
    context_rules: Mapping[Iri, tuple[frozenset, ...]] = field(default_factory=dict)

    def methods(self, type_: Iri) -> frozenset:
        return self.generation.get(type_, frozenset())

    def questions(self, type_: Iri) -> tuple[str, ...]:
        return self.example_questions.get(type_, ())

    def rules(self, type_: Iri) -> tuple[frozenset, ...]:
        return self.context_rules.get(type_, ())


def _objects(g: Graph, s, p: Iri) -> list:
    return sorted(g.objects(s, p), key=term_key)


def load_overlay(
    text: str,
    ont: Ontology | None = None,
    seed: SeedKnowledgeBase | None = None,
) -> tuple[Ontology, SeedKnowledgeBase]:
    """Merge a Turtle overlay into an ontology and seed knowledge base.

    The overlay may declare new classes (``rdfs:subClassOf`` / ``rdfs:label``),
    new reasoning-mode individuals, ``eo:GenerationRecipe`` and
    ``eo:ContextRule`` nodes, and ``eo:exampleQuestion`` literals.
    """
    from .syntax.turtle import parse_turtle

    ont = ont or builtin_ontology()
    seed = seed or SeedKnowledgeBase()
    doc = parse_turtle(text, ont.prefixes, ont.names)
    g = doc.graph

    new_classes: set[Iri] = set()
    links: list[tuple[Iri, Iri]] = []
    for t in g.match(p=RDFS_SUBCLASSOF):
        if not isinstance(t.subject, Iri) or not isinstance(t.object, Iri):
            raise OntologyError("overlay subclass links must join two named classes")
        if t.subject not in ont.classes:
            new_classes.add(t.subject)
        links.append((t.subject, t.object))
    labels = {}
    for t in g.match(p=RDFS_LABEL):
        if isinstance(t.subject, Iri) and isinstance(t.object, Literal):
            if t.subject in new_classes or ont.declared(t.subject):
                labels[t.subject] = t.object.text
    individuals = {}
    for t in g.match(p=RDF_TYPE, o=REASONING_MODE):
        if isinstance(t.subject, Iri):
            individuals[t.subject] = REASONING_MODE
            if t.subject not in labels:
                for lab in _objects(g, t.subject, RDFS_LABEL):
                    labels[t.subject] = str(lab.text)
    if new_classes or links or labels or individuals:
        ont = ont.extended(sorted(new_classes, key=term_key), links, labels, individuals)

    def declared(iri, kind: str):
        if not isinstance(iri, Iri) or not ont.declared(iri):
            raise OntologyError(f"overlay references undeclared {kind} {iri}")
        return iri

    def the_type(node) -> Iri:
        found = _objects(g, node, FOR_EXPLANATION_TYPE)
        if len(found) != 1:
            raise OntologyError(f"{node} needs exactly one eo:forExplanationType")
        return resolve_type(found[0], ont)

    generation = {k: set(v) for k, v in seed.generation.items()}
    for t in sorted(g.match(p=RDF_TYPE, o=GENERATION_RECIPE), key=lambda t: term_key(t.subject)):
        node = t.subject
        type_ = the_type(node)
        tasks = _objects(g, node, USES_TASK)
        methods = _objects(g, node, USES_METHOD)
        if len(tasks) != 1 or not methods:
            raise OntologyError(f"recipe {node} needs one eo:usesTask and at least one eo:usesMethod")
        task = declared(tasks[0], "task")
        if AI_TASK not in ont.superclasses(task):
            raise OntologyError(f"{task} is not an AI task")
        for m in methods:
            declared(m, "method")
            if AI_METHOD not in ont.superclasses(m):
                raise OntologyError(f"{m} is not an AI method")
            generation.setdefault(type_, set()).add((task, m))

    questions = {k: list(v) for k, v in seed.example_questions.items()}
    for t in sorted(g.match(p=EXAMPLE_QUESTION), key=lambda t: (term_key(t.subject), term_key(t.object))):
        type_ = resolve_type(t.subject, ont) if isinstance(t.subject, Iri) else None
        if type_ is None or not isinstance(t.object, Literal):
            raise OntologyError("eo:exampleQuestion links an explanation type to a text literal")
        bucket = questions.setdefault(type_, [])
        if t.object.text not in bucket:
            bucket.append(t.object.text)

    rules = {k: list(v) for k, v in seed.context_rules.items()}
    for t in sorted(g.match(p=RDF_TYPE, o=CONTEXT_RULE), key=lambda t: term_key(t.subject)):
        type_ = the_type(t.subject)
        required = frozenset(declared(c, "context class") for c in g.objects(t.subject, REQUIRES_CONTEXT))
        if not required:
            raise OntologyError(f"context rule {t.subject} requires nothing")
        if required not in rules.setdefault(type_, []):
            rules[type_].append(required)

    return ont, SeedKnowledgeBase(
        generation={k: frozenset(v) for k, v in generation.items()},
        example_questions={k: tuple(v) for k, v in questions.items()},
        context_rules={k: tuple(v) for k, v in rules.items()},
    )


@functools.lru_cache(maxsize=None)
def _builtin_seed() -> SeedKnowledgeBase:
    text = resources.files("eokit").joinpath("data/seed.ttl").read_text(encoding="utf-8")
    ont, seed = load_overlay(text, builtin_ontology(), SeedKnowledgeBase())
    if ont is not builtin_ontology() and ont.classes != builtin_ontology().classes:
        raise OntologyError("the builtin seed must not extend the ontology")
    return seed


def seed_kb() -> SeedKnowledgeBase:
    return _builtin_seed()
