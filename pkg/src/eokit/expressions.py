"""Class-expression trees: named classes, intersections, unions and
existential / minimum-cardinality restrictions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .graph import Iri


@dataclass(frozen=True)
class Named:
    iri: Iri


@dataclass(frozen=True)
class And:
    operands: tuple

    def __init__(self, *operands) -> None:
        ops = _flatten_args(operands)
        if len(ops) < 2:
            raise ValueError("And needs at least two operands")
        object.__setattr__(self, "operands", ops)


@dataclass(frozen=True)
class Or:
    operands: tuple

    def __init__(self, *operands) -> None:
        ops = _flatten_args(operands)
        if len(ops) < 2:
            raise ValueError("Or needs at least two operands")
        object.__setattr__(self, "operands", ops)


@dataclass(frozen=True)
class Some:
    property: Iri
    filler: "ClassExpression"


@dataclass(frozen=True)
class AtLeast:
    n: int
    property: Iri
    filler: "ClassExpression"

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"min cardinality must be a positive integer, got {self.n!r}")


ClassExpression = Union[Named, And, Or, Some, AtLeast]


def _flatten_args(operands: tuple) -> tuple:
    # allow And([a, b]) as well as And(a, b); nesting is never merged
    if len(operands) == 1 and isinstance(operands[0], (list, tuple)):
        operands = tuple(operands[0])
    return tuple(_coerce(o) for o in operands)


def _coerce(x):
    return Named(x) if isinstance(x, Iri) else x


def named_classes(expr: ClassExpression) -> Iterator[Iri]:
    """Every class IRI mentioned in ``expr`` (with repeats, in tree order)."""
    if isinstance(expr, Named):
        yield expr.iri
    elif isinstance(expr, (And, Or)):
        for op in expr.operands:
            yield from named_classes(op)
    elif isinstance(expr, (Some, AtLeast)):
        yield from named_classes(expr.filler)


def properties(expr: ClassExpression) -> Iterator[Iri]:
    if isinstance(expr, (And, Or)):
        for op in expr.operands:
            yield from properties(op)
    elif isinstance(expr, (Some, AtLeast)):
        yield expr.property
        yield from properties(expr.filler)


def depth(expr: ClassExpression) -> int:
    if isinstance(expr, Named):
        return 1
    if isinstance(expr, (And, Or)):
        return 1 + max(depth(op) for op in expr.operands)
    return 1 + depth(expr.filler)


def dnf(expr: ClassExpression) -> list[frozenset[Iri]]:
    """Disjunctive normal form over named leaves, restrictions erased.

    Each element is a set of classes that together satisfy ``expr`` at the
    type level (every restriction treated as satisfiable once its filler is).
    """
    if isinstance(expr, Named):
        return [frozenset([expr.iri])]
    if isinstance(expr, (Some, AtLeast)):
        return dnf(expr.filler)
    if isinstance(expr, Or):
        out: list[frozenset[Iri]] = []
        for op in expr.operands:
            for term in dnf(op):
                if term not in out:
                    out.append(term)
        return out
    terms = [frozenset()]
    for op in expr.operands:
        terms = [a | b for a in terms for b in dnf(op)]
        # dedupe while keeping order
        seen: list[frozenset[Iri]] = []
        for t in terms:
            if t not in seen:
                seen.append(t)
        terms = seen
    return terms
