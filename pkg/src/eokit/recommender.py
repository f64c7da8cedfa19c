"""Type-level recommendation of explanation types.

A capability profile says which classes of things a system can produce
and which tasks/methods it runs.  Sufficiency conditions are evaluated
against the profile instead of against instance data: a named class is
available when some producible class falls under it, and restrictions
collapse onto their fillers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional

from .errors import ProfileError, UnknownExplanationType
from .expressions import ClassExpression, dnf
from .graph import Iri, PrefixMap, term_key
from .schema import (
    AI_METHOD,
    AI_TASK,
    KNOWLEDGE,
    REASONING_MODE,
    TYPE_TOKENS,
    Ontology,
    SeedKnowledgeBase,
    explanation_type,
    explanation_types,
    resolve_type,
    type_token,
)

# question intent -> explanation-type token
INTENTS: dict[str, str] = {
    "other-situations": "case-based",
    "broader-info": "contextual",
    "why-this-not-that": "contrastive",
    "what-if-input": "counterfactual",
    "why-makes-sense": "everyday",
    "what-studies": "scientific",
    "what-if-followed": "simulation-based",
    "what-percentage": "statistical",
    "what-steps": "trace-based",
}


def _iris(values: Any, prefixes: PrefixMap, field_name: str) -> frozenset[Iri]:
    if values is None:
        return frozenset()
    if isinstance(values, str):
        values = [v for v in values.replace(",", " ").split() if v]
    out = set()
    for v in values:
        if isinstance(v, Iri):
            out.add(v)
            continue
        try:
            out.add(prefixes.expand(str(v)))
        except (ValueError, KeyError) as exc:
            raise ProfileError(f"{field_name}: {exc}") from None
    return frozenset(out)


@dataclass(frozen=True)
class CapabilityProfile:
    producible: frozenset = frozenset()
    tasks: frozenset = frozenset()
    methods: frozenset = frozenset()
    mode: Optional[Iri] = None

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], prefixes: PrefixMap) -> "CapabilityProfile":
        unknown = set(data) - {"producible_classes", "tasks", "methods", "mode"}
        if unknown:
            raise ProfileError(f"unknown profile fields: {', '.join(sorted(unknown))}")
        mode = data.get("mode")
        return cls(
            producible=_iris(data.get("producible_classes"), prefixes, "producible_classes"),
            tasks=_iris(data.get("tasks"), prefixes, "tasks"),
            methods=_iris(data.get("methods"), prefixes, "methods"),
            mode=None if mode in (None, "") else _single(mode, prefixes),
        )

    def to_mapping(self, prefixes: PrefixMap) -> dict[str, Any]:
        from .query import render_term

        def names(xs):
            return [render_term(x, prefixes) for x in sorted(xs, key=term_key)]

        return {
            "producible_classes": names(self.producible),
            "tasks": names(self.tasks),
            "methods": names(self.methods),
            "mode": None if self.mode is None else render_term(self.mode, prefixes),
        }

    def validate(self, ont: Ontology) -> "CapabilityProfile":
        problems = []
        for c in sorted(self.producible, key=term_key):
            if c not in ont.classes:
                problems.append(f"undeclared class {c}")
        for t in sorted(self.tasks, key=term_key):
            if t not in ont.classes or AI_TASK not in ont.superclasses(t):
                problems.append(f"not an AI task: {t}")
        for m in sorted(self.methods, key=term_key):
            if m not in ont.classes or AI_METHOD not in ont.superclasses(m):
                problems.append(f"not an AI method: {m}")
        if self.mode is not None:
            ok = ont.individuals.get(self.mode) == REASONING_MODE or (
                self.mode in ont.classes and REASONING_MODE in ont.superclasses(self.mode)
            )
            if not ok:
                problems.append(f"not a reasoning mode: {self.mode}")
        if problems:
            raise ProfileError("; ".join(problems))
        return self

    def union(self, other: "CapabilityProfile") -> "CapabilityProfile":
        return CapabilityProfile(
            self.producible | other.producible,
            self.tasks | other.tasks,
            self.methods | other.methods,
            self.mode or other.mode,
        )


def _single(value: Any, prefixes: PrefixMap) -> Iri:
    found = _iris([value], prefixes, "mode")
    return next(iter(found))


@dataclass(frozen=True)
class QuestionDescriptor:
    intent: str
    text: Optional[str] = None

    def __post_init__(self) -> None:
        if self.intent not in INTENTS:
            raise ProfileError(f"unknown intent {self.intent!r}; expected one of {', '.join(INTENTS)}")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "QuestionDescriptor":
        unknown = set(data) - {"intent", "text"}
        if unknown:
            raise ProfileError(f"unknown question fields: {', '.join(sorted(unknown))}")
        if "intent" not in data:
            raise ProfileError("question document needs an intent")
        text = data.get("text")
        return cls(str(data["intent"]), None if text is None else str(text))

    @property
    def explanation_type(self) -> Iri:
        return TYPE_TOKENS[INTENTS[self.intent]]


@dataclass(frozen=True)
class GenerationPlan:
    task: Iri
    method: Iri
    knowledge: frozenset = frozenset()
    supported: bool = False

    def summary(self, ont: Ontology) -> str:
        task = ont.label(self.task)
        if self.task == AI_TASK:
            head = "run an AI task"
        else:
            short = task[: -len(" Task")] if task.endswith(" Task") else task
            head = f"run `{short}' AI task"
        text = f"{head} with `{ont.label(self.method)}' method"
        if self.knowledge:
            kinds = " and ".join(ont.label(k).lower() for k in sorted(self.knowledge, key=term_key))
            text += f" to generate {kinds}"
        return text


@dataclass(frozen=True)
class Recommendation:
    type: Iri
    satisfiable: bool
    missing: frozenset = frozenset()
    required: frozenset = frozenset()
    context_match: bool = False
    plan: Optional[GenerationPlan] = None

    @property
    def token(self) -> str:
        return type_token(self.type)


@dataclass(frozen=True)
class RecommendationReport:
    entries: tuple[Recommendation, ...] = ()

    @property
    def satisfiable(self) -> list[Iri]:
        return [r.type for r in self.entries if r.satisfiable]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


@dataclass(frozen=True)
class QuestionAnswer:
    intent: str
    type: Iri
    satisfiable: bool
    plan: Optional[GenerationPlan] = None
    missing: frozenset = frozenset()


# --- evaluation -----------------------------------------------------------------


def _available(ont: Ontology, profile: CapabilityProfile) -> set[Iri]:
    """Every class some producible class falls under."""
    out: set[Iri] = set()
    for d in profile.producible:
        out |= ont.superclasses(d) if d in ont.classes else {d}
    return out


def _iri_order(xs: Iterable[Iri]) -> tuple[str, ...]:
    return tuple(sorted(x.value for x in xs))


def _best_term(ont: Ontology, profile: CapabilityProfile, expr: ClassExpression) -> tuple[frozenset, frozenset]:
    """(required, missing) for the cheapest way to satisfy ``expr``.

    Cheapest means fewest missing classes, then fewest classes overall, then
    lexicographic order of the missing set.
    """
    available = _available(ont, profile)
    best = None
    for term in dnf(expr):
        missing = frozenset(c for c in term if c not in available)
        rank = (len(missing), len(term), _iri_order(missing), _iri_order(term))
        if best is None or rank < best[0]:
            best = (rank, term, missing)
    return best[1], best[2]


def abstractly_satisfiable(ont: Ontology, profile: CapabilityProfile, expr: ClassExpression) -> tuple[bool, frozenset]:
    """Type-level verdict and the smallest set of classes still missing."""
    _, missing = _best_term(ont, profile, expr)
    return not missing, missing


def methods_for_type(seed: SeedKnowledgeBase, type_: str | Iri) -> frozenset:
    return seed.methods(resolve_type(type_))


def example_questions(seed: SeedKnowledgeBase, type_: str | Iri, ont: Ontology | None = None) -> list[str]:
    iri = resolve_type(type_)
    out = list(seed.questions(iri))
    proto = explanation_type(ont, iri).question
    if proto not in out:
        out.append(proto)
    return out


def _context(ont: Ontology, profile: CapabilityProfile) -> set[Iri]:
    ctx = set(_available(ont, profile))
    for c in profile.tasks | profile.methods:
        ctx |= ont.superclasses(c) if c in ont.classes else {c}
    if profile.mode is not None:
        ctx.add(profile.mode)
        if profile.mode in ont.classes:
            ctx |= ont.superclasses(profile.mode)
    return ctx


def _plan(ont: Ontology, seed: SeedKnowledgeBase, profile: CapabilityProfile, type_: Iri, required: frozenset) -> Optional[GenerationPlan]:
    pairs = seed.methods(type_)
    if not pairs:
        return None
    tasks: set[Iri] = set()
    for t in profile.tasks:
        tasks |= ont.superclasses(t) if t in ont.classes else {t}
    methods: set[Iri] = set()
    for m in profile.methods:
        methods |= ont.superclasses(m) if m in ont.classes else {m}

    def rank(pair):
        task, method = pair
        return (task not in tasks, method not in methods, task.value, method.value)

    task, method = min(pairs, key=rank)
    knowledge = frozenset(c for c in required if c in ont.classes and KNOWLEDGE in ont.superclasses(c))
    return GenerationPlan(task, method, knowledge, supported=task in tasks and method in methods)


def _recommend(ont: Ontology, seed: SeedKnowledgeBase, profile: CapabilityProfile, type_: Iri, expr: ClassExpression) -> Recommendation:
    required, missing = _best_term(ont, profile, expr)
    ok = not missing
    ctx = _context(ont, profile)
    matched = any(rule <= ctx for rule in seed.rules(type_))
    plan = _plan(ont, seed, profile, type_, required) if ok else None
    return Recommendation(type_, ok, missing, required, matched, plan)


def applicable_types(ont: Ontology, seed: SeedKnowledgeBase, profile: CapabilityProfile) -> RecommendationReport:
    """All nine types, satisfiable first.

    Satisfiable types are ordered by context-rule match, then by how many
    classes their cheapest satisfying combination needs, then by IRI.
    Unsatisfiable ones follow, ordered by how much is missing.
    """
    recs = [_recommend(ont, seed, profile, spec.cls, spec.condition) for spec in explanation_types(ont)]

    def key(r: Recommendation):
        if r.satisfiable:
            return (0, not r.context_match, len(r.required), r.type.value)
        return (1, len(r.missing), not r.context_match, r.type.value)

    return RecommendationReport(tuple(sorted(recs, key=key)))


def plan_for_question(ont: Ontology, seed: SeedKnowledgeBase, profile: CapabilityProfile, q: QuestionDescriptor) -> QuestionAnswer:
    spec = explanation_type(ont, q.explanation_type)
    rec = _recommend(ont, seed, profile, spec.cls, spec.condition)
    return QuestionAnswer(q.intent, spec.cls, rec.satisfiable, rec.plan, rec.missing)


def intent_for_type(type_: str | Iri) -> str:
    token = type_token(resolve_type(type_))
    for intent, tok in INTENTS.items():
        if tok == token:
            return intent
    raise UnknownExplanationType(type_)
