from .manchester import normalized_tokens, parse_manchester, serialize_manchester
from .names import Names, camel_case, normalize_label
from .turtle import TurtleDocument, parse_turtle, render_iri, render_literal, serialize_turtle

__all__ = [
    "Names",
    "TurtleDocument",
    "camel_case",
    "normalize_label",
    "normalized_tokens",
    "parse_manchester",
    "parse_turtle",
    "render_iri",
    "render_literal",
    "serialize_manchester",
    "serialize_turtle",
]
