"""Explanation-type toolkit: RDF graphs, the explanation ontology, a
closed-world reasoner, a recommender and a small query engine."""

__version__ = "0.1.0"

from .errors import (
    EOError,
    OntologyError,
    ParseError,
    ProfileError,
    SealedGraphError,
    UnknownClass,
    UnknownExplanationType,
    UnknownPrefix,
)
from .expressions import And, AtLeast, ClassExpression, Named, Or, Some
from .graph import BlankNode, Graph, Iri, Literal, PrefixMap, Triple, base_prefixes, expand_curie, isomorphic
from .query import BindingSet, ExpressionNode, Query, execute, parse_query, render_term, schema_view
from .reasoner import (
    Diagnostic,
    Diagnostics,
    MembershipReport,
    Reasoner,
    Trace,
    check_membership,
    class_witnesses,
    classify_explanations,
    instances_of,
    strip_explanation_types,
    superclasses,
    validate_graph,
)
from .recommender import (
    INTENTS,
    CapabilityProfile,
    GenerationPlan,
    QuestionDescriptor,
    Recommendation,
    RecommendationReport,
    abstractly_satisfiable,
    applicable_types,
    example_questions,
    methods_for_type,
    plan_for_question,
)
from .schema import (
    EXPLANATION_TYPES,
    TYPE_TOKENS,
    ExplanationTypeSpec,
    Ontology,
    SeedKnowledgeBase,
    builtin_ontology,
    explanation_type,
    explanation_types,
    load_overlay,
    resolve_type,
    seed_kb,
    sufficiency_condition,
)
from .syntax import normalized_tokens, parse_manchester, parse_turtle, serialize_manchester, serialize_turtle

__all__ = [
    "And",
    "AtLeast",
    "BindingSet",
    "BlankNode",
    "CapabilityProfile",
    "ClassExpression",
    "Diagnostic",
    "Diagnostics",
    "EOError",
    "EXPLANATION_TYPES",
    "ExplanationTypeSpec",
    "ExpressionNode",
    "GenerationPlan",
    "Graph",
    "INTENTS",
    "Iri",
    "Literal",
    "MembershipReport",
    "Named",
    "Ontology",
    "OntologyError",
    "Or",
    "ParseError",
    "PrefixMap",
    "ProfileError",
    "Query",
    "QuestionDescriptor",
    "Reasoner",
    "Recommendation",
    "RecommendationReport",
    "SealedGraphError",
    "SeedKnowledgeBase",
    "Some",
    "TYPE_TOKENS",
    "Trace",
    "Triple",
    "UnknownClass",
    "UnknownExplanationType",
    "UnknownPrefix",
    "abstractly_satisfiable",
    "applicable_types",
    "base_prefixes",
    "builtin_ontology",
    "check_membership",
    "class_witnesses",
    "classify_explanations",
    "example_questions",
    "execute",
    "expand_curie",
    "explanation_type",
    "explanation_types",
    "instances_of",
    "isomorphic",
    "load_overlay",
    "methods_for_type",
    "normalized_tokens",
    "parse_manchester",
    "parse_query",
    "parse_turtle",
    "plan_for_question",
    "render_term",
    "resolve_type",
    "schema_view",
    "seed_kb",
    "serialize_manchester",
    "serialize_turtle",
    "strip_explanation_types",
    "sufficiency_condition",
    "superclasses",
    "validate_graph",
]
